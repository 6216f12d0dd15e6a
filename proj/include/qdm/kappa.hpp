#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qdm {

// Degree of surprise: a natural number or infinity.  Zero means unsurprising,
// larger values mean more implausible, infinity means impossible.  Infinity is
// carried as a separate flag rather than a sentinel integer so that arithmetic
// cannot silently wrap.
class KappaValue {
 public:
  constexpr KappaValue() = default;
  constexpr explicit KappaValue(std::uint64_t v) : value_(v) {}

  static constexpr KappaValue infinity() {
    KappaValue k;
    k.infinite_ = true;
    return k;
  }

  [[nodiscard]] constexpr bool is_infinite() const { return infinite_; }

  [[nodiscard]] std::uint64_t finite() const {
    if (infinite_) throw std::logic_error("kappa: finite() on infinity");
    return value_;
  }

  friend constexpr KappaValue operator+(KappaValue a, KappaValue b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return KappaValue(a.value_ + b.value_);
  }

  // Conditional ranks are differences; subtracting from infinity stays
  // infinite, and the finite case requires a >= b.
  friend KappaValue operator-(KappaValue a, KappaValue b) {
    if (b.infinite_) throw std::logic_error("kappa: invalid subtraction");
    if (a.infinite_) return infinity();
    if (b.value_ > a.value_)
      throw std::logic_error("kappa: invalid subtraction");
    return KappaValue(a.value_ - b.value_);
  }

  friend constexpr bool operator==(KappaValue a, KappaValue b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

  friend constexpr bool operator<(KappaValue a, KappaValue b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }

  friend constexpr bool operator<=(KappaValue a, KappaValue b) { return a < b || a == b; }
  friend constexpr bool operator>(KappaValue a, KappaValue b) { return b < a; }
  friend constexpr bool operator>=(KappaValue a, KappaValue b) { return b <= a; }

  static constexpr KappaValue min(KappaValue a, KappaValue b) { return a < b ? a : b; }

  [[nodiscard]] std::string to_string() const {
    return infinite_ ? "inf" : std::to_string(value_);
  }

  friend std::ostream& operator<<(std::ostream& os, KappaValue k) {
    return os << k.to_string();
  }

 private:
  std::uint64_t value_ = 0;
  bool infinite_ = false;
};

}  // namespace qdm
