// Acceptance driver: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gaussdist/gaussdist.hpp"

using namespace gaussdist;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double closed(double e) { return std::exp(-4 * e * e - 4 * e); }

struct Outcome {
  bool passed = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      note << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

template <class Fn>
void criterion(int id, const char* title, Fn&& fn) {
  Outcome o;
  o.note.precision(3);
  o.note << std::scientific;
  const auto t0 = Clock::now();
  try {
    fn(o);
  } catch (const std::exception& e) {
    o.passed = false;
    o.note << " [threw: " << e.what() << "]";
  }
  if (!o.passed) ++failures;
  std::printf("%s criterion %d: %s;%s (%.2f s)\n", o.passed ? "PASS" : "FAIL", id, title,
              o.note.str().c_str(), seconds_since(t0));
  std::fflush(stdout);
}

}  // namespace

int main() {
  criterion(1, "numeric minimum matches exp(-4E^2-4E) within 1e-6 relative, < 10 s per energy",
            [](Outcome& o) {
              for (double e : {0.1, 0.5, 1.0, 2.0, 5.0}) {
                const auto t0 = Clock::now();
                const auto rep = numeric_minimize(e, 1);
                const double dt = seconds_since(t0);
                const double err = std::abs(rep.fidelity - closed(e)) / closed(e);
                o.note << " E=" << e << " rel=" << err << " t=" << dt << "s";
                o.require(err < 1e-6, "relative error at E=" + std::to_string(e));
                o.require(dt < 10.0, "runtime at E=" + std::to_string(e));
              }
            });

  criterion(2, "500 random pairs, |<a|b>|^2 vs phase-space fidelity < 1e-8, < 60 s", [](Outcome& o) {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    const auto t0 = Clock::now();
    for (int i = 0; i < 500; ++i) {
      const auto a = detail::random_params(rng, 4.0);
      const auto b = detail::random_params(rng, 4.0);
      const auto [v1, v2] = build_pair(a, b);
      const double f = std::norm(overlap(v1, v2));
      worst = std::max(worst, std::abs(f - pure_fidelity(state_from_params(a), state_from_params(b))));
    }
    const double dt = seconds_since(t0);
    o.note << " worst=" << worst << " t=" << dt << "s";
    o.require(worst < 1e-8, "fidelity error");
    o.require(dt < 60.0, "runtime");
  });

  criterion(3, "optimal pair in the number basis: energy E +- 1e-8, overlap exp(-4E^2-4E) +- 1e-8",
            [](Outcome& o) {
              for (double e : {0.5, 1.0, 2.0}) {
                const auto p = optimal_pair(e);
                const auto [v1, v2] = build_pair(p.state1, p.state2);
                const double de = std::max(std::abs(fock_energy(v1) - e), std::abs(fock_energy(v2) - e));
                const double df = std::abs(std::norm(overlap(v1, v2)) - closed(e));
                o.note << " E=" << e << " dE=" << de << " dF=" << df;
                o.require(de <= 1e-8 && df <= 1e-8, "E=" + std::to_string(e));
              }
            });

  criterion(4, "E=0.5 polar curves: two intersections in (0, pi/4], |R1-R2| < 1e-10, quartics < 1e-6 scaled",
            [](Outcome& o) {
              const auto rep = find_intersections(0.5);
              o.note << " count=" << rep.intersections.size();
              o.require(rep.intersections.size() == 2, "intersection count");
              for (const auto& x : rep.intersections) {
                o.note << " theta=" << x.theta << " dR=" << x.residual
                       << " g12=" << x.quartic_residual_12 / x.quartic_scale
                       << " g21=" << x.quartic_residual_21 / x.quartic_scale;
                o.require(x.theta > 0.0 && x.theta <= std::numbers::pi / 4, "angle range");
                o.require(x.residual < 1e-10, "radius residual");
                o.require(x.quartic_residual_12 < 1e-6 * x.quartic_scale &&
                              x.quartic_residual_21 < 1e-6 * x.quartic_scale,
                          "quartic residual");
              }
            });

  criterion(5, "finite-difference Hessian determinant at d=2E+1 within 1e-5 relative and positive",
            [](Outcome& o) {
              for (double e : {0.5, 1.0, 2.0}) {
                const double fd = hessian_check(e);
                const double exact = hessian_determinant_closed_form(e);
                const double rel = std::abs(fd - exact) / exact;
                o.note << " E=" << e << " rel=" << rel;
                o.require(fd > 0.0 && rel < 1e-5, "E=" + std::to_string(e));
              }
            });

  criterion(6, "centered minimum 1/(2E+1) +- 1e-8 at w1 = -asinh sqrt(E) +- 1e-6", [](Outcome& o) {
    for (double e : {0.5, 1.0, 5.0}) {
      const auto c = centered_minimum(e);
      const double df = std::abs(c.fidelity - 1.0 / (2 * e + 1));
      const double dw = std::abs(c.w1 + std::asinh(std::sqrt(e)));
      o.note << " E=" << e << " dF=" << df << " dw=" << dw;
      o.require(df <= 1e-8 && dw <= 1e-6, "E=" + std::to_string(e));
    }
  });

  criterion(7, "spectrum minimum l1 = 2ME+1, others 1, fidelity exp(-4M^2E^2-4ME) within 1e-8; all-in pair agrees",
            [](Outcome& o) {
              const std::pair<int, double> cases[] = {{1, 1.0}, {2, 0.5}, {3, 1.0}, {4, 0.25}};
              for (auto [m, e] : cases) {
                const auto s = spectrum_minimize(m, e);
                const double target = multimode_optimal_fidelity(m, e);
                double dl = std::abs(s.numeric_lambdas[0] - (2 * m * e + 1));
                for (std::size_t j = 1; j < s.numeric_lambdas.size(); ++j) {
                  dl = std::max(dl, std::abs(s.numeric_lambdas[j] - 1.0));
                }
                const double rel = std::max(std::abs(s.fidelity - target), std::abs(s.numeric_fidelity - target)) / target;
                const double pair_rel = std::abs(s.pair_fidelity - target) / target;
                o.note << " (" << m << "," << e << ") dl=" << dl << " rel=" << rel << " pair=" << pair_rel;
                o.require(s.stationary_lambdas[0] == 2 * m * e + 1, "stationary spectrum");
                o.require(dl < 1e-6, "numeric spectrum");
                o.require(rel < 1e-8, "fidelity");
                o.require(pair_rel < 1e-8, "all-in pair fidelity");
              }
            });

  criterion(8, "-log p_err of the optimal pair exceeds 4E and the coherent pair for 100 energies in [0.05, 10]",
            [](Outcome& o) {
              double margin = INFINITY;
              for (int k = 0; k < 100; ++k) {
                const double e = 0.05 + (10.0 - 0.05) * k / 99.0;
                const double opt = -std::log(helstrom_error(optimal_fidelity(e)));
                const double coh = -std::log(helstrom_error(std::exp(-4 * e)));
                margin = std::min({margin, opt - 4 * e, opt - coh});
              }
              o.note << " min_margin=" << margin;
              o.require(margin > 0.0, "hierarchy");
            });

  criterion(9, "grid at E=0.5, resolution 64: >= e^-3 - 1e-9, within 1e-3; doubling at least halves the gap",
            [](Outcome& o) {
              const double target = std::exp(-3.0);
              const double g64 = grid_bruteforce(0.5, 64).minimum - target;
              const double g128 = grid_bruteforce(0.5, 128).minimum - target;
              o.note << " gap64=" << g64 << " gap128=" << g128;
              o.require(g64 >= -1e-9 && g128 >= -1e-9, "floor");
              o.require(g64 <= 1e-3, "gap");
              o.require(g128 <= 0.5 * g64, "halving");
            });

  criterion(10, "full property verification passes in < 5 minutes", [](Outcome& o) {
    const auto t0 = Clock::now();
    const auto rep = run_verification(VerifyLevel::full, 1);
    const double dt = seconds_since(t0);
    int failed = 0;
    for (const auto& c : rep.checks) {
      if (!c.passed) {
        ++failed;
        o.note << " " << c.name;
      }
    }
    o.note << " checks=" << rep.checks.size() << " failed=" << failed << " t=" << dt << "s";
    o.require(rep.passed(), "verification");
    o.require(dt < 300.0, "runtime");
  });

  return failures == 0 ? 0 : 1;
}
