#include <iostream>

#include "treefac/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return treefac::cli::run(args, std::cout, std::cerr);
}
