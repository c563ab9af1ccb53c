#include <iostream>

#include "carbofront/cli.hpp"

int main(int argc, char** argv) {
  return carbofront::cli::main_entry(argc, argv, std::cout, std::cerr);
}
