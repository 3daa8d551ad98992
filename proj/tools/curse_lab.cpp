#include <iostream>
#include <string>
#include <vector>

#include "curselab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return curselab::run_cli(args, std::cout, std::cerr);
}
