#include <iostream>
#include <string>
#include <vector>

#include "mcpdist/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mcpdist::cli::main_entry(args, std::cout, std::cerr);
}
