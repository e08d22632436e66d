#include <iostream>
#include <string>
#include <vector>

#include "divfree/cli.hpp"

int main(int argc, char** argv) {
  return divfree::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
