// Writes a localized Gaussian dump for the CLI smoke test: make_fixture <base> <n> <L> <N>
#include "nlh/io.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  if (argc != 5) {
    std::cerr << "usage: make_fixture <base> <n> <L> <N>\n";
    return 3;
  }
  const nlh::Grid g(std::atoi(argv[2]), std::atof(argv[3]), std::atoi(argv[4]));
  nlh::io::write_field(argv[1], nlh::ScalarField::sample(g, [](const nlh::Point& x) {
                         return std::exp(-0.5 * x.squaredNorm());
                       }));
  return 0;
}
