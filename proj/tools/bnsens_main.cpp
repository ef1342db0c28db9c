#include <iostream>

#include "bnsens/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bnsens::run_cli(args, std::cout, std::cerr);
}
