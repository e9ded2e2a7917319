#include <iostream>

#include "qsys/cli.hpp"

int main(int argc, char** argv) {
  return qsys::cli::dispatch(argc, argv, std::cout, std::cerr);
}
