#include <iostream>

#include "rise/cli.hpp"

int main(int argc, char** argv) {
  return rise::run_cli(argc, argv, {std::cout, std::cerr, {}});
}
