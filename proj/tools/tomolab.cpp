#include <iostream>

#include "tomolab/cli.hpp"

int main(int argc, char** argv) {
  return tomolab::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
