#include <iostream>
#include <string>
#include <vector>

#include "rqbc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rqbc::run_cli(args, std::cout, std::cerr);
}
