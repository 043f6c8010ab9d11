#include <iostream>
#include <string>
#include <vector>

#include "vvicert/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vvicert::runCli(args, std::cout, std::cerr);
}
