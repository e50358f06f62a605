#include <vector>

#include "drrbfpu/cli.hpp"

int main(int argc, char** argv) {
  return drrbfpu::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
