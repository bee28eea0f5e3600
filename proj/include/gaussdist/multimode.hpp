#pragma once

// M-mode results for isoenergetic, isocovariant pairs: the all-energy-in-one-
// mode construction, the covariance lower bound and its spectral reduction,
// the discrete Fourier passive transform, and separable-product minima.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gaussdist/detail/bfgs.hpp"
#include "gaussdist/errors.hpp"
#include "gaussdist/fidelity.hpp"
#include "gaussdist/gaussian_state.hpp"
#include "gaussdist/optimum.hpp"

namespace gaussdist {

using StatePair = std::pair<GaussianState, GaussianState>;

namespace detail {

inline void require_modes(int modes, const char* where) {
  if (modes < 1) throw invalid_input(std::string(where) + ": modes must be >= 1");
}

}  // namespace detail

// exp(-4 M^2 E^2 - 4 M E).
inline double multimode_optimal_fidelity(int modes, double energy_per_mode) {
  const double total = modes * energy_per_mode;
  return std::exp(-4.0 * total * total - 4.0 * total);
}

// Vacuum on modes 1..M-1 and the single-mode optimal pair at energy M E on
// the last mode.
inline StatePair allin_pair(int modes, double energy_per_mode) {
  detail::require_modes(modes, "allin_pair");
  detail::require_positive_energy(energy_per_mode, "allin_pair");
  const auto single = optimal_pair(modes * energy_per_mode);
  if (modes == 1) return {single.gaussian1(), single.gaussian2()};
  const auto rest = vacuum(modes - 1);
  return {tensor_product(rest, single.gaussian1()), tensor_product(rest, single.gaussian2())};
}

// Operator norm of Sigma^{-1}, i.e. 1 / lambda_min(Sigma).
inline double inverse_operator_norm(const Matrix& cov) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(cov, Eigen::EigenvaluesOnly);
  const double lmin = solver.eigenvalues().minCoeff();
  if (!(lmin > 0.0)) throw invalid_input("covariance is not positive definite");
  return 1.0 / lmin;
}

// exp(-||Sigma^{-1}|| (2ME + M - Tr Sigma)): lower bound on the fidelity of
// any isoenergetic pair sharing the pure covariance Sigma.
inline double isocovariant_bound(const Matrix& cov, int modes, double energy_per_mode) {
  detail::require_modes(modes, "isocovariant_bound");
  if (cov.rows() != 2 * modes || cov.cols() != 2 * modes) {
    throw invalid_input("isocovariant_bound: covariance must be 2M x 2M");
  }
  const GaussianState probe(Vector::Zero(2 * modes), cov);
  if (!probe.is_pure()) throw precondition_error("isocovariant_bound: covariance is not pure");
  const double budget = 2.0 * modes * energy_per_mode + modes - probe.cov().trace();
  if (budget < -1e-12 * (1.0 + std::abs(probe.cov().trace()))) {
    throw infeasible_covariance("isocovariant_bound: Tr Sigma exceeds 2ME + M");
  }
  return std::exp(-inverse_operator_norm(probe.cov()) * std::max(0.0, budget));
}

// Log of the spectral objective exp(-2 l1 (2ME + M - 1/2 sum_j (l_j + 1/l_j)))
// with l1 the designated largest eigenvalue.
inline double spectrum_log_objective(std::span<const double> lambdas, int modes,
                                     double energy_per_mode) {
  double sum = 0.0;
  for (double l : lambdas) sum += l + 1.0 / l;
  return -2.0 * lambdas[0] * (2.0 * modes * energy_per_mode + modes - 0.5 * sum);
}

struct MultimodeOptimum {
  int modes = 1;
  double energy_per_mode = 0.0;
  double fidelity = 1.0;          // closed form at the stationary spectrum
  double numeric_fidelity = 1.0;  // from numerical descent over the spectrum
  std::vector<double> stationary_lambdas;  // l_1 = 2ME + 1, l_{j>1} = 1
  std::vector<double> numeric_lambdas;
  std::vector<double> lambda_spectrum;  // eigenvalues of 2 Sigma at the optimum, descending
  double pair_fidelity = 1.0;           // pure_fidelity on the all-in pair
  StatePair pair;
};

// Minimizes the spectral objective over l_j >= 1 with
// sum_j (l_j + 1/l_j) <= 4ME + 2M, both at the stationary point and by BFGS
// in l_j = 1 + t_j^2. The unconstrained minimum already satisfies the
// inequality, which is checked rather than enforced.
inline MultimodeOptimum spectrum_minimize(int modes, double energy_per_mode) {
  detail::require_modes(modes, "spectrum_minimize");
  detail::require_positive_energy(energy_per_mode, "spectrum_minimize");
  const double m = modes;
  const double e = energy_per_mode;

  MultimodeOptimum out{.modes = modes,
                       .energy_per_mode = e,
                       .stationary_lambdas = {},
                       .numeric_lambdas = {},
                       .lambda_spectrum = {},
                       .pair = allin_pair(modes, e)};
  out.stationary_lambdas.assign(static_cast<std::size_t>(modes), 1.0);
  out.stationary_lambdas[0] = 2.0 * m * e + 1.0;
  out.fidelity = std::exp(spectrum_log_objective(out.stationary_lambdas, modes, e));

  auto objective = [&](const Eigen::VectorXd& t, Eigen::VectorXd& grad) {
    std::vector<double> l(static_cast<std::size_t>(modes));
    for (int j = 0; j < modes; ++j) l[static_cast<std::size_t>(j)] = 1.0 + t(j) * t(j);
    double sum = 0.0;
    for (double v : l) sum += v + 1.0 / v;
    const double bracket = 2.0 * m * e + m - 0.5 * sum;
    grad.resize(modes);
    for (int j = 0; j < modes; ++j) {
      const double lj = l[static_cast<std::size_t>(j)];
      double dl = l[0] * (1.0 - 1.0 / (lj * lj));
      if (j == 0) dl += -2.0 * bracket;
      grad(j) = dl * 2.0 * t(j);
    }
    return -2.0 * l[0] * bracket;
  };

  std::mt19937_64 rng(0x5eed + static_cast<std::uint64_t>(modes));
  std::uniform_real_distribution<double> small(0.05, 0.3);
  Eigen::VectorXd t0(modes);
  t0(0) = 1.0;
  for (int j = 1; j < modes; ++j) t0(j) = small(rng);
  const auto res = detail::bfgs(objective, t0, {1e-12, 10000});
  out.numeric_lambdas.resize(static_cast<std::size_t>(modes));
  double sum = 0.0;
  for (int j = 0; j < modes; ++j) {
    const double l = 1.0 + res.x(j) * res.x(j);
    out.numeric_lambdas[static_cast<std::size_t>(j)] = l;
    sum += l + 1.0 / l;
  }
  if (sum > 4.0 * m * e + 2.0 * m + 1e-12) {
    throw internal_error("spectrum_minimize: descent left the feasible region");
  }
  out.numeric_fidelity = std::exp(res.value);

  Eigen::SelfAdjointEigenSolver<Matrix> solver(2.0 * out.pair.first.cov(), Eigen::EigenvaluesOnly);
  const Vector ev = solver.eigenvalues();
  out.lambda_spectrum.assign(ev.data(), ev.data() + ev.size());
  std::sort(out.lambda_spectrum.begin(), out.lambda_spectrum.end(), std::greater<>());
  out.pair_fidelity = pure_fidelity(out.pair.first, out.pair.second);
  return out;
}

// Passive transform a_j^dagger -> M^{-1/2} sum_l e^{-2 pi i l j / M} a_l^dagger,
// as a real orthogonal symplectic matrix on interleaved quadratures.
inline SymplecticMatrix dft_transform(int modes) {
  detail::require_modes(modes, "dft_transform");
  ComplexMatrix u(modes, modes);
  const double norm = 1.0 / std::sqrt(static_cast<double>(modes));
  // Annihilators pick up the conjugate phases: a_j -> sum_l u_jl a_l.
  for (int j = 0; j < modes; ++j) {
    for (int l = 0; l < modes; ++l) {
      u(j, l) = std::polar(norm, 2.0 * std::numbers::pi * (l + 1) * (j + 1) / modes);
    }
  }
  return SymplecticMatrix::from_unitary(u);
}

inline StatePair symmetric_transform(const StatePair& pair) {
  const auto& [a, b] = pair;
  if (a.modes() != b.modes()) throw invalid_input("symmetric_transform: mode count mismatch");
  const auto t = dft_transform(a.modes());
  return {t.apply(a), t.apply(b)};
}

struct SeparableMinima {
  double symmetric = 1.0;  // |w>^M vs |s>^M, each factor at energy E
  double general = 1.0;    // per-mode energies free, total M E per state
};

// Product pairs: by multiplicativity the fidelity is the product of single-
// mode optima at per-mode energies E_j. The exponent sum_j 4E_j^2 + 4E_j is
// convex in the allocation, so its maximum on the simplex sum_j E_j = ME is
// attained at a vertex; every vertex is evaluated.
inline SeparableMinima separable_product_min(int modes, double energy_per_mode) {
  detail::require_modes(modes, "separable_product_min");
  detail::require_positive_energy(energy_per_mode, "separable_product_min");
  SeparableMinima out;
  out.symmetric = std::pow(optimal_fidelity(energy_per_mode), modes);
  const double total = modes * energy_per_mode;
  double best = 1.0;
  for (int vertex = 0; vertex < modes; ++vertex) {
    double f = 1.0;
    for (int j = 0; j < modes; ++j) f *= j == vertex ? optimal_fidelity(total) : 1.0;
    best = std::min(best, f);
  }
  out.general = best;
  return out;
}

// Random isoenergetic pair with a shared pure covariance S S^T / 2, S in Euler
// form; both means lie on the sphere of radius sqrt(2ME + M - Tr Sigma).
template <class Rng>
StatePair random_isocovariant_pair(int modes, double energy_per_mode, Rng& rng) {
  detail::require_modes(modes, "random_isocovariant_pair");
  const double r_max = 0.5 * std::acosh(2.0 * energy_per_mode + 1.0);
  std::uniform_real_distribution<double> uni(0.0, r_max);
  std::vector<double> r(static_cast<std::size_t>(modes));
  for (auto& v : r) v = uni(rng);
  const auto s = random_symplectic(r, rng);
  const Matrix cov = 0.5 * s.matrix() * s.matrix().transpose();
  const double radius =
      std::sqrt(std::max(0.0, 2.0 * modes * energy_per_mode + modes - cov.trace()));
  std::normal_distribution<double> normal(0.0, 1.0);
  auto sphere = [&] {
    Vector v(2 * modes);
    for (auto& x : v) x = normal(rng);
    return Vector(radius * v / v.norm());
  };
  return {GaussianState(sphere(), cov), GaussianState(sphere(), cov)};
}

}  // namespace gaussdist
