#pragma once

// Self-check suite: the Fock oracle against the closed forms, the numerical
// minimizer against the single-mode optimum, polar and Hessian diagnostics,
// and the multimode and phase-space invariants. Each check reports the
// measured worst error next to its tolerance.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gaussdist/errors.hpp"
#include "gaussdist/fidelity.hpp"
#include "gaussdist/fock.hpp"
#include "gaussdist/gaussian_state.hpp"
#include "gaussdist/multimode.hpp"
#include "gaussdist/optimum.hpp"

namespace gaussdist {

enum class VerifyLevel { fast, full };

struct VerifyHooks {
  // Closed form the reproductions are compared against. Replacing it is the
  // negative control: a wrong value must make the suite fail.
  std::function<double(double)> closed_form = [](double e) { return optimal_fidelity(e); };
  unsigned threads = 1;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst observed error (or the tested quantity)
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  VerifyLevel level = VerifyLevel::fast;
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<double> energies;
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

inline std::string format_check(const CheckResult& c) {
  std::ostringstream out;
  out.precision(3);
  out << (c.passed ? "PASS " : "FAIL ") << c.name << ": measured=" << std::scientific << c.measured
      << " tol=" << c.tolerance;
  if (!c.detail.empty()) out << " (" << c.detail << ")";
  return out.str();
}

namespace detail {

// Uniform split of a random energy in [0, max_energy] between displacement
// and squeezing, with uniform phases.
template <class Rng>
PureStateParams random_params(Rng& rng, double max_energy) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double e = max_energy * unit(rng);
  const double f = unit(rng);
  const double a = std::sqrt(e * f);
  const double w = std::asinh(std::sqrt(e * (1.0 - f)));
  return {std::polar(a, 2.0 * std::numbers::pi * unit(rng)), w,
          2.0 * std::numbers::pi * unit(rng)};
}

// Runs body(i) for i in [0, n) on up to `threads` workers.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

class CheckRunner {
public:
  explicit CheckRunner(VerifyReport& report) : report_(report) {}

  // fn returns the measured error; exceptions count as failures.
  template <class Fn>
  void run(const std::string& name, double tolerance, Fn&& fn) {
    CheckResult c;
    c.name = name;
    c.tolerance = tolerance;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.measured = fn(c.detail);
      c.passed = c.measured <= tolerance;
    } catch (const std::exception& e) {
      c.passed = false;
      c.measured = std::numeric_limits<double>::infinity();
      c.detail = std::string("threw: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report_.checks.push_back(std::move(c));
  }

private:
  VerifyReport& report_;
};

inline std::string energy_label(double e) {
  std::ostringstream out;
  out << "E=" << e;
  return out.str();
}

}  // namespace detail

inline VerifyReport run_verification(VerifyLevel level, std::uint64_t seed,
                                     const VerifyHooks& hooks = {}) {
  VerifyReport report;
  report.level = level;
  report.seed = seed;
  const bool full = level == VerifyLevel::full;
  report.samples = full ? 500 : 50;
  report.energies = full ? std::vector<double>{0.1, 0.5, 1.0, 2.0, 5.0}
                         : std::vector<double>{0.1, 0.5, 1.0};
  const auto n = static_cast<std::size_t>(report.samples);
  detail::CheckRunner check(report);
  std::mt19937_64 rng(seed);

  // Fock oracle on random single-mode pairs with energy <= 4.
  {
    std::vector<std::pair<PureStateParams, PureStateParams>> pairs(n);
    for (auto& [a, b] : pairs) {
      a = detail::random_params(rng, 4.0);
      b = detail::random_params(rng, 4.0);
    }
    std::vector<double> fid_err(n), energy_err(n), td_err(n);
    std::vector<std::string> failure(n);
    auto evaluate = [&] {
      detail::parallel_for(n, hooks.threads, [&](std::size_t i) {
        try {
          const auto& [a, b] = pairs[i];
          const auto [v1, v2] = build_pair(a, b);
          const double f = std::norm(overlap(v1, v2));
          fid_err[i] = std::abs(f - pure_fidelity(state_from_params(a), state_from_params(b)));
          energy_err[i] = std::max(std::abs(fock_energy(v1) - energy(state_from_params(a))),
                                   std::abs(fock_energy(v2) - energy(state_from_params(b))));
          td_err[i] = std::abs(trace_distance_pure(v1, v2) - 2.0 * std::sqrt(std::max(0.0, 1.0 - f)));
        } catch (const std::exception& e) {
          failure[i] = e.what();
          fid_err[i] = energy_err[i] = td_err[i] = std::numeric_limits<double>::infinity();
        }
      });
    };
    auto worst = [&](const std::vector<double>& v, bool first) {
      return [&v, &failure, &evaluate, first](std::string& detail) {
        if (first) evaluate();
        const auto it = std::find_if(failure.begin(), failure.end(),
                                     [](const auto& s) { return !s.empty(); });
        if (it != failure.end()) detail = *it;
        return *std::max_element(v.begin(), v.end());
      };
    };
    check.run("oracle_vs_closed_form", 1e-8, worst(fid_err, true));
    check.run("oracle_energy", 1e-8, worst(energy_err, false));
    check.run("oracle_trace_distance_identity", 1e-10, worst(td_err, false));
  }

  // Cutoff ladder N, 2N, 4N: the error never grows beyond round-off.
  check.run("oracle_cutoff_monotone", 1e-12, [&](std::string&) {
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const auto a = detail::random_params(rng, 4.0);
      const auto b = detail::random_params(rng, 4.0);
      const double exact = pure_fidelity(state_from_params(a), state_from_params(b));
      const auto [v1, v2] = build_pair(a, b);
      double prev = std::abs(std::norm(overlap(v1, v2)) - exact);
      for (int cutoff = 2 * v1.cutoff; cutoff <= 4 * v1.cutoff; cutoff *= 2) {
        const double err =
            std::abs(std::norm(overlap(build_state(a, cutoff), build_state(b, cutoff))) - exact);
        worst = std::max(worst, err - prev);
        prev = err;
      }
    }
    return worst;
  });

  check.run("oracle_squeezed_parity", 1e-14, [&](std::string&) {
    double worst = 0.0;
    for (double w : {0.3, 0.8, 1.4}) {
      const auto v = build_state_auto({0.0, w, 0.0});
      for (int k = 1; k <= v.cutoff; k += 2) worst = std::max(worst, std::abs(v.amplitudes(k)));
    }
    return worst;
  });

  for (double e : report.energies) {
    const auto label = detail::energy_label(e);
    const double expected = hooks.closed_form(e);

    check.run("minimizer_reproduces_optimum " + label, 1e-6, [&](std::string& detail) {
      MinimizeConfig config;
      config.threads = hooks.threads;
      const auto r = numeric_minimize(e, seed, config);
      std::ostringstream out;
      out.precision(3);
      out << std::scientific << "|grad|=" << r.gradient_norm << " converged=" << r.converged_starts
          << "/" << r.starts;
      detail = out.str();
      if (!(r.gradient_norm < 1e-8)) return std::numeric_limits<double>::infinity();
      return detail::rel_err(r.fidelity, expected);
    });

    check.run("optimal_pair_oracle " + label, 1e-8, [&](std::string&) {
      const auto pair = optimal_pair(e);
      const auto [v1, v2] = build_pair(pair.state1, pair.state2);
      return std::max({std::abs(fock_energy(v1) - e), std::abs(fock_energy(v2) - e),
                       std::abs(std::norm(overlap(v1, v2)) - expected)});
    });

    check.run("hessian_determinant " + label, 1e-5, [&](std::string&) {
      const double h = hessian_check(e);
      if (!(h > 0.0)) return std::numeric_limits<double>::infinity();
      return detail::rel_err(h, hessian_determinant_closed_form(e));
    });

    const auto polar = find_intersections(e);
    const auto& cuts = polar.intersections;
    check.run("polar_intersection_count " + label, 0.0, [&](std::string& detail) {
      detail = std::to_string(cuts.size()) + " intersections";
      const bool shape = cuts.size() == 2 &&
                         std::abs(cuts.back().theta - std::numbers::pi / 4) < 1e-15 &&
                         std::abs(cuts.front().theta - std::numbers::pi / 4) > 1e-6;
      return shape ? 0.0 : 1.0;
    });
    check.run("polar_residual " + label, 1e-10, [&](std::string&) {
      double worst = 0.0;
      for (const auto& x : cuts) worst = std::max(worst, x.residual);
      return worst;
    });
    check.run("quartic_residual_scaled " + label, 1e-6, [&](std::string&) {
      double worst = 0.0;
      for (const auto& x : cuts) {
        worst = std::max(worst, std::max(x.quartic_residual_12, x.quartic_residual_21) / x.quartic_scale);
      }
      return worst;
    });

    const auto centered = centered_minimum(e);
    check.run("centered_minimizer " + label, 1e-6, [&](std::string&) {
      return std::abs(centered.w1 + std::asinh(std::sqrt(e)));
    });
    check.run("centered_fidelity " + label, 1e-8, [&](std::string&) {
      return std::abs(centered.fidelity - 1.0 / (2.0 * e + 1.0));
    });

    check.run("suboptimal_families_dominate " + label, 0.0, [&](std::string&) {
      const double opt = optimal_fidelity(e);
      const double upper = max_squeeze_parameter(e);
      double violation = 0.0;
      for (int k = 0; k <= 200; ++k) {
        const double x = 1.0 + (upper - 1.0) * k / 200.0;
        violation = std::max(violation, opt - equal_d_fidelity(x, e) - 1e-15 * opt);
        violation = std::max(violation, opt - opposite_phase_squeeze_fidelity(x, e) - 1e-15 * opt);
      }
      violation = std::max(violation, opt - centered.fidelity);
      return std::max(0.0, violation);
    });
  }

  check.run("log_fidelity_gradient", 1e-6, [&](std::string&) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double e = 0.1 + 4.9 * unit(rng);
      const double d1 = 0.3 + 5.0 * unit(rng), d2 = 0.3 + 5.0 * unit(rng);
      const auto g = constrained_log_fidelity_gradient(d1, d2, e);
      for (int k = 0; k < 2; ++k) {
        const double h = 1e-5 * (k == 0 ? d1 : d2);
        auto f = [&](double s) {
          return k == 0 ? constrained_log_fidelity(d1 + s, d2, e)
                        : constrained_log_fidelity(d1, d2 + s, e);
        };
        const double fd = (f(h) - f(-h)) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - g(k)) / std::max(1.0, std::abs(g(k))));
      }
    }
    return worst;
  });

  check.run("scaling_hierarchy", 0.0, [&](std::string&) {
    double violation = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double e = 0.05 + (10.0 - 0.05) * k / 99.0;
      const double opt = -std::log(optimal_fidelity(e));
      const double perr_opt = -std::log(helstrom_error(optimal_fidelity(e)));
      const double perr_coh = -std::log(helstrom_error(std::exp(-4.0 * e)));
      violation = std::max({violation, perr_coh - perr_opt, 4.0 * e - opt,
                            std::log(2.0 * e + 1.0) - opt});
    }
    return std::max(0.0, violation);
  });

  // Phase-space properties on random single-mode states.
  check.run("fidelity_symmetry", 0.0, [&](std::string&) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = state_from_params(detail::random_params(rng, 4.0));
      const auto b = state_from_params(detail::random_params(rng, 4.0));
      worst = std::max(worst, std::abs(pure_fidelity(a, b) - pure_fidelity(b, a)));
    }
    return worst;
  });

  {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    double fid = 0.0, en = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = state_from_params(detail::random_params(rng, 4.0));
      const auto b = state_from_params(detail::random_params(rng, 4.0));
      const double t = angle(rng);
      const auto ra = rotate(a, t), rb = rotate(b, t);
      fid = std::max(fid, std::abs(pure_fidelity(ra, rb) - pure_fidelity(a, b)));
      en = std::max({en, std::abs(energy(ra) - energy(a)), std::abs(energy(rb) - energy(b))});
    }
    check.run("rotation_fidelity_invariance", 1e-10, [&](std::string&) { return fid; });
    check.run("rotation_energy_invariance", 1e-12, [&](std::string&) { return en; });
  }

  check.run("closed_form_consistency", 1e-12, [&](std::string&) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r1 = 2.0 * unit(rng) - 1.0, r2 = 2.0 * unit(rng) - 1.0;
      const double z1 = 1.5 * unit(rng) - 0.75, z2 = 1.5 * unit(rng) - 0.75;
      // D(r) S(z)|0> with real signed z: magnitude |z|, phase 0 or pi.
      auto st = [](double r, double z) {
        return state_from_params({{r, 0.0}, std::abs(z), z < 0.0 ? std::numbers::pi : 0.0});
      };
      const double f = pure_fidelity(st(r1, z1), st(r2, z2));
      worst = std::max(worst, std::abs(f - squeezed_pair_fidelity(r1, r2, std::exp(2.0 * z1),
                                                                  std::exp(2.0 * z2))));
      worst = std::max(worst, std::abs(pure_fidelity(st(0.0, z1), st(0.0, z2)) -
                                       centered_squeezed_fidelity(z1, z2)));
    }
    return worst;
  });

  check.run("multiplicativity", 1e-12, [&](std::string&) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto a1 = state_from_params(detail::random_params(rng, 2.0));
      const auto a2 = state_from_params(detail::random_params(rng, 2.0));
      const auto b1 = state_from_params(detail::random_params(rng, 2.0));
      const auto b2 = state_from_params(detail::random_params(rng, 2.0));
      const double joint = pure_fidelity(tensor_product(a1, a2), tensor_product(b1, b2));
      worst = std::max(worst, std::abs(joint - pure_fidelity(a1, b1) * pure_fidelity(a2, b2)));
    }
    return worst;
  });

  check.run("symplectic_invariants", 1e-9, [&](std::string&) {
    std::uniform_real_distribution<double> sq(0.0, 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int modes = 1 + static_cast<int>(i % 4);
      std::vector<double> r(static_cast<std::size_t>(modes));
      for (auto& v : r) v = sq(rng);
      const auto s = random_symplectic(r, rng);
      const Matrix d = symplectic_form(modes);
      worst = std::max(worst, (s.matrix().transpose() * d * s.matrix() - d).cwiseAbs().maxCoeff());
      worst = std::max(worst, std::abs(s.matrix().determinant() - 1.0));
      // The positive definite S S^T has reciprocal eigenvalue pairs.
      const SymplecticMatrix pd(s.matrix() * s.matrix().transpose());
      worst = std::max(worst, pd.reciprocal_pairing_defect());
      // Conjugation keeps the uncertainty relation.
      const auto state = s.apply(vacuum(modes));
      worst = std::max(worst, std::max(0.0, -state.min_uncertainty_eigenvalue()));
    }
    return worst;
  });

  check.run("passive_invariance", 1e-10, [&](std::string&) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int modes = 1 + static_cast<int>(i % 4);
      const auto [a, b] = random_isocovariant_pair(modes, 0.5, rng);
      const auto u = random_passive(modes, rng);
      const auto ua = u.apply(a), ub = u.apply(b);
      worst = std::max({worst, std::abs(energy(ua) - energy(a)), std::abs(energy(ub) - energy(b)),
                        std::abs(pure_fidelity(ua, ub) - pure_fidelity(a, b))});
    }
    return worst;
  });

  {
    double det_err = 0.0, bound_violation = 0.0, purity_err = 0.0;
    const std::size_t count = full ? 200 : 50;
    std::uniform_real_distribution<double> energy_dist(0.1, 1.5);
    for (std::size_t i = 0; i < count; ++i) {
      const int modes = 1 + static_cast<int>(i % 4);
      const double e = energy_dist(rng);
      const auto [a, b] = random_isocovariant_pair(modes, e, rng);
      det_err = std::max(det_err, std::abs((a.cov() + b.cov()).determinant() - 1.0));
      purity_err = std::max(purity_err, std::abs(a.purity_determinant() - 1.0));
      bound_violation = std::max(bound_violation,
                                 isocovariant_bound(a.cov(), modes, e) - pure_fidelity(a, b));
    }
    check.run("isocovariant_sum_determinant", 1e-9, [&](std::string&) { return det_err; });
    check.run("isocovariant_purity", 1e-9, [&](std::string&) { return purity_err; });
    check.run("isocovariant_lower_bound", 1e-12,
              [&](std::string&) { return std::max(0.0, bound_violation); });
  }

  const std::vector<std::pair<int, double>> multimode_cases{{1, 1.0}, {2, 0.5}, {3, 1.0}, {4, 0.25}};
  for (const auto& [modes, e] : multimode_cases) {
    std::ostringstream label;
    label << "M=" << modes << " E=" << e;
    const auto opt = spectrum_minimize(modes, e);
    const double expected = multimode_optimal_fidelity(modes, e);
    check.run("spectrum_fidelity " + label.str(), 1e-8, [&](std::string&) {
      return std::max(detail::rel_err(opt.fidelity, expected),
                      detail::rel_err(opt.numeric_fidelity, expected));
    });
    check.run("spectrum_lambdas " + label.str(), 1e-6, [&, modes = modes, e = e](std::string&) {
      double worst = std::abs(opt.numeric_lambdas.front() - (2.0 * modes * e + 1.0));
      worst = std::max(worst, std::abs(opt.lambda_spectrum.front() - (2.0 * modes * e + 1.0)));
      for (std::size_t j = 1; j < opt.numeric_lambdas.size(); ++j) {
        worst = std::max(worst, std::abs(opt.numeric_lambdas[j] - 1.0));
      }
      return worst;
    });
    check.run("allin_pair_fidelity " + label.str(), 1e-9,
              [&](std::string&) { return detail::rel_err(opt.pair_fidelity, expected); });
  }

  check.run("symmetric_transform", 1e-10, [&](std::string&) {
    double worst = 0.0;
    for (int modes = 1; modes <= 4; ++modes) {
      const double e = 0.5;
      const auto pair = allin_pair(modes, e);
      const auto [a, b] = symmetric_transform(pair);
      worst = std::max({worst, std::abs(energy(a) - modes * e), std::abs(energy(b) - modes * e)});
      worst = std::max(worst, detail::rel_err(pure_fidelity(a, b),
                                              pure_fidelity(pair.first, pair.second)));
      for (int j = 0; j < modes; ++j) {
        worst = std::max({worst, std::abs(mode_energy(a, j) - e), std::abs(mode_energy(b, j) - e)});
      }
    }
    return worst;
  });

  check.run("grid_bruteforce E=0.5", 1e-3, [&](std::string& detail) {
    const double target = hooks.closed_form(0.5);
    GridOptions opts;
    opts.threads = hooks.threads;
    const double g64 = grid_bruteforce(0.5, 64, opts).minimum - target;
    const double g128 = grid_bruteforce(0.5, 128, opts).minimum - target;
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << "gap64=" << g64 << " gap128=" << g128;
    detail = out.str();
    if (g64 < -1e-9 || g128 < -1e-9 || g128 > 0.5 * g64) return std::numeric_limits<double>::infinity();
    return g64;
  });

  return report;
}

}  // namespace gaussdist
