#include <iostream>
#include <string>
#include <vector>

#include "tw/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return tw::cli::main_entry(args, std::cout, std::cerr);
}
