#include <iostream>

#include "lsc/cli.hpp"

#ifndef LSC_FIXTURES_DIR
#define LSC_FIXTURES_DIR ""
#endif

int main(int argc, char **argv) {
  return lsc::run_cli(argc, argv, std::cout, std::cerr, LSC_FIXTURES_DIR);
}
