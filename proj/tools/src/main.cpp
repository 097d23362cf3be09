#include <iostream>
#include <string>
#include <vector>

#include "strausslab/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return strausslab::run_cli(args, std::cout, std::cerr);
}
