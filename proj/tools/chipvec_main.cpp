#include <iostream>
#include <string>
#include <vector>

#include "chipvec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chipvec::dispatch(args, std::cout, std::cerr);
}
