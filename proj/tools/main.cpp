#include <string>
#include <vector>

#include "ugae/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ugae::cli::run(args);
}
