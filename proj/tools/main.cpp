#include <iostream>
#include <string>
#include <vector>

#include "qdm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qdm::cli::run(std::move(args), std::cout, std::cerr);
}
