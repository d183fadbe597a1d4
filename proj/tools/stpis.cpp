#include <iostream>
#include <string>
#include <vector>

#include "stpis/experiment.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return stpis::run_cli(args, std::cout, std::cerr);
}
