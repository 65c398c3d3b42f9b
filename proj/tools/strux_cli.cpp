#include <iostream>

#include "strux/cli.hpp"

int main(int argc, char** argv) {
  return strux::cli_main(argc, argv, std::cout, std::cerr);
}
