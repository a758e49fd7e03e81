// Writes the bound-state margin beta - lambda1 of the desk problem, taken from
// the dense oracle.
#include <cstdio>
#include <fstream>
#include <iostream>

#include "fracspec/commands.hpp"
#include "fracspec/eigensolver.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: fracspec_golden <output file>\n";
    return 2;
  }
  using namespace fracspec;
  const GridSpec grid(1, 20.0, 256, 0.25);
  const OperatorSpec op(gaussian_well(grid, 1.0, 1.0), 1.0);
  const auto dense = dense_oracle(op);
  const double margin = op.beta() - dense.values[0];
  std::ofstream out(argv[1]);
  out << format_double(margin) << "\n";
  if (!out) {
    std::cerr << "cannot write " << argv[1] << "\n";
    return 3;
  }
  return 0;
}
