#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  return chanscale::cli::runMain(argc, argv, std::cout, std::cerr);
}
