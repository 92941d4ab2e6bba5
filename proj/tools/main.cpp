#include <iostream>
#include <string>
#include <vector>

#include "sp21kit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sp21kit::run_cli(args, std::cout, std::cerr);
}
