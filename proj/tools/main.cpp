#include <cstdlib>
#include <iostream>

#include <unistd.h>

#include "parawork/tools/cli.hpp"

int main(int argc, char** argv) {
  const bool color = std::getenv("NO_COLOR") == nullptr && isatty(STDOUT_FILENO);
  return parawork::tools::dispatch(argc, argv, std::cout, std::cerr, color);
}
