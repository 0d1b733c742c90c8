#include <iostream>
#include <string>
#include <vector>

#include "rmps/cli.hpp"

int main(int argc, char** argv) {
  return rmps::cli_dispatch(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
