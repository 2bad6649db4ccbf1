#include <iostream>
#include <string>
#include <vector>

#include "hawking/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hawking::run_cli(args, std::cout, std::cerr);
}
