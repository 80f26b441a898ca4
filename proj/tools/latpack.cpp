#include <iostream>
#include <string>
#include <vector>

#include "latpack/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return latpack::cli::run(args, std::cin, std::cout, std::cerr);
}
