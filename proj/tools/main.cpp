#include <iostream>

#include "advnet/cli.hpp"

int main(int argc, char** argv) {
  return advnet::cli::run_cli(argc, argv, std::cout, std::cerr);
}
