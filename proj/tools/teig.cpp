#include <iostream>
#include <string>
#include <vector>

#include "teig/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return teig::RunCli(args, std::cout, std::cerr);
}
