#include <iostream>
#include <string>
#include <vector>

#include "snlw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return snlw::cli::run(args, std::cout, std::cerr);
}
