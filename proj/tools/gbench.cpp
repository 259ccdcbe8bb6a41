#include <iostream>
#include <string>
#include <vector>

#include "gbench/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gbench::cli::run(args, std::cout, std::cerr);
}
