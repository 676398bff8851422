#include <iostream>

#include "pwafix/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pwafix::run_cli(args, std::cout, std::cerr);
}
