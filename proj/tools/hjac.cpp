#include <iostream>

#include "hybrid_jacobi/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hybrid_jacobi::run_cli(args, std::cout, std::cerr);
}
