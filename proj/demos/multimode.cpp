// M-mode isocovariant optimum: all of the energy in one mode, then spread
// evenly over the modes by the discrete Fourier passive transform.

#include <cstdio>

#include "gaussdist/gaussdist.hpp"

int main() {
  const int modes = 3;
  const double energy = 0.5;
  const auto opt = gaussdist::spectrum_minimize(modes, energy);
  std::printf("M = %d, E = %g per mode\n", modes, energy);
  std::printf("closed form %.12e\nnumeric     %.12e\n", opt.fidelity, opt.numeric_fidelity);

  const auto [a, b] = gaussdist::symmetric_transform(opt.pair);
  std::printf("after transform %.12e\n", gaussdist::pure_fidelity(a, b));
  for (int j = 0; j < modes; ++j) {
    std::printf("  mode %d energy %.10f / %.10f\n", j, gaussdist::mode_energy(a, j),
                gaussdist::mode_energy(b, j));
  }

  const auto sep = gaussdist::separable_product_min(modes, energy);
  std::printf("product pairs: symmetric %.6e, general %.6e\n", sep.symmetric, sep.general);
  return 0;
}
