#include <string>
#include <vector>

#include "cubeshadow/cli.hpp"

int main(int argc, char** argv) {
  return cubeshadow::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
