#include <iostream>

#include "totalk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return totalk::dispatch(args, std::cout, std::cerr);
}
