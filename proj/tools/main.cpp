#include <iostream>
#include <string>
#include <vector>

#include "mrmc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mrmc::run_cli(args, std::cout, std::cerr);
}
