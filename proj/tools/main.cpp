#include <iostream>
#include <string>
#include <vector>

#include "outfn/cli.hpp"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv, argv + argc);
  return outfn::cli::dispatch(args, std::cout, std::cerr);
}
