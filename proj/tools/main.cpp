#include <string>
#include <vector>

#include "orlicz/cli.hpp"

int main(int argc, char** argv) {
  return orlicz::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
