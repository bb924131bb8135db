#include <iostream>

#include "mikado/cli.hpp"

int main(int argc, char **argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return mikado::run_cli(args, std::cout, std::cerr);
}
