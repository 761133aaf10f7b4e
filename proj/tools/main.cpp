#include <vector>

#include "casikit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return casikit::cli::run(args);
}
