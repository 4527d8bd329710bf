#include <iostream>
#include <string>
#include <vector>

#include <subangle/cli.hpp>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return subangle::cli::run(args, std::cout, std::cerr, std::cin);
}
