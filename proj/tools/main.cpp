#include <iostream>

#include "sapcensus/cli.hpp"

int main(int argc, char** argv) {
  return sapcensus::run_cli(argc, argv, std::cout, std::cerr);
}
