#include <iostream>
#include <string>
#include <vector>

#include "classdesc/cli.hpp"

int main(int argc, char* argv[]) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return classdesc::cli::run(args, std::cout, std::cerr);
}
