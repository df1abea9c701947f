#include <iostream>
#include <string>
#include <vector>

#include "qiopa/cli.hpp"

int main(int argc, char** argv) {
  return qiopa::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
