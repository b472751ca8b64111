#include <iostream>

#include "tropweight/cli.hpp"

int main(int argc, char** argv) {
  return tropweight::run_cli(argc, argv, std::cout, std::cerr);
}
