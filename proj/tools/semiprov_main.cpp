#include <iostream>

#include "semiprov/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return semiprov::cli::run(args, std::cout, std::cerr);
}
