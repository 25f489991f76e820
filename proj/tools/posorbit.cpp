#include <iostream>

#include "posorbit/cli.hpp"

int main(int argc, char** argv) {
  return posorbit::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
