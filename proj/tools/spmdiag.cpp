#include <iostream>
#include <string>
#include <vector>

#include "spmdiag/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return spmdiag::run_cli(args, std::cout, std::cerr);
}
