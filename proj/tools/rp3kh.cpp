#include <iostream>
#include <string>
#include <vector>

#include "rp3kh/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rp3kh::cli::run(args, std::cout, std::cerr);
}
