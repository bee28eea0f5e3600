// Builds the minimum-fidelity pair at a given energy, checks it against the
// Fock-basis oracle, and compares it with the coherent and centered pairs.

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "gaussdist/gaussdist.hpp"

int main(int argc, char** argv) {
  const double energy = argc > 1 ? std::atof(argv[1]) : 0.5;
  const auto pair = gaussdist::optimal_pair(energy);
  std::printf("E = %g: d_c = %.6f, r = %.6f\n", energy, pair.d_c, pair.r);
  std::printf("fidelity      %.12e\n", pair.fidelity);
  std::printf("Helstrom error %.12e\n", pair.p_err);

  // Same quantity through the phase-space formula and the Fock basis.
  const double phase_space = gaussdist::pure_fidelity(pair.gaussian1(), pair.gaussian2());
  const auto [v1, v2] = gaussdist::build_pair(pair.state1, pair.state2);
  const double fock = std::norm(gaussdist::overlap(v1, v2));
  std::printf("phase space   %.12e\nFock (N=%d)  %.12e\n", phase_space, v1.cutoff, fock);
  std::printf("photon numbers %.10f %.10f\n", gaussdist::fock_energy(v1), gaussdist::fock_energy(v2));

  // Suboptimal families at the same energy.
  std::printf("coherent pair %.12e\n", gaussdist::equal_d_fidelity(1.0, energy));
  std::printf("centered pair %.12e\n", gaussdist::centered_minimum(energy).fidelity);

  // Independent check by multi-start descent over all isoenergetic pairs.
  const auto report = gaussdist::numeric_minimize(energy, 0);
  std::printf("numeric       %.12e (relative error %.1e)\n", report.fidelity, report.relative_error);
  return 0;
}
