#include <string>
#include <vector>

#include "hmap/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hmap::cli::run(args);
}
