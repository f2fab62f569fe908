#include <iostream>
#include <string>
#include <vector>

#include "qshyp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qshyp::cli_dispatch(args, std::cout, std::cerr);
}
