#include <iostream>

#include "sparsevar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sparsevar::cli::run(args, std::cout, std::cerr);
}
