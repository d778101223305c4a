#include <iostream>

#include "hair/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hair::cli::run(args, std::cout, std::cerr);
}
