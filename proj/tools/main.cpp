#include <vector>

#include "mteval/cli.hpp"

int main(int argc, char** argv) {
  return mteval::run(std::vector<std::string>(argv + 1, argv + argc));
}
