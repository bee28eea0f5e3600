#pragma once

// Single-mode, energy-constrained minimization of the fidelity between two
// pure Gaussian states.
//
// The optimal pair is D(-r) S(z)|0>, D(r) S(z)|0> with d_c = e^{2z} = 2E + 1
// and r = sqrt((E^2 + E) / (2E + 1)); its fidelity is exp(-4E^2 - 4E). This
// header provides the closed forms, the stationarity system in the squeezing
// variables (d1, d2), and an independent multi-start minimizer over the full
// six-dimensional family of isoenergetic pure pairs.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <Eigen/Dense>

#include "gaussdist/detail/bfgs.hpp"
#include "gaussdist/errors.hpp"
#include "gaussdist/fidelity.hpp"
#include "gaussdist/gaussian_state.hpp"

namespace gaussdist {

namespace detail {

inline void require_positive_energy(double energy, const char* where) {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw invalid_input(std::string(where) + ": energy must be finite and > 0");
  }
}

inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

}  // namespace detail

inline double optimal_squeeze_parameter(double energy) { return 2.0 * energy + 1.0; }

inline double optimal_displacement(double energy) {
  return std::sqrt((energy * energy + energy) / (2.0 * energy + 1.0));
}

inline double optimal_fidelity(double energy) {
  return std::exp(-4.0 * energy * energy - 4.0 * energy);
}

struct OptimalPair {
  double energy = 0.0;
  double d_c = 1.0;
  double r = 0.0;
  PureStateParams state1;
  PureStateParams state2;
  double fidelity = 1.0;
  double p_err = 0.5;

  GaussianState gaussian1() const { return state_from_params(state1); }
  GaussianState gaussian2() const { return state_from_params(state2); }
};

inline OptimalPair optimal_pair(double energy) {
  detail::require_positive_energy(energy, "optimal_pair");
  OptimalPair pair;
  pair.energy = energy;
  pair.d_c = optimal_squeeze_parameter(energy);
  pair.r = optimal_displacement(energy);
  const double z = 0.5 * std::log(pair.d_c);
  pair.state1 = PureStateParams{complex(-pair.r, 0.0), z, 0.0};
  pair.state2 = PureStateParams{complex(pair.r, 0.0), z, 0.0};
  pair.fidelity = optimal_fidelity(energy);
  pair.p_err = helstrom_error(pair.fidelity);
  return pair;
}

// Fidelity of the antipodal pair with common squeezing d = e^{2z}, the
// displacement fixed by the energy constraint: exp(d^2 - (4E + 2) d + 1).
inline double equal_d_fidelity(double d, double energy) {
  if (!std::isfinite(energy) || energy < 0.0) {
    throw invalid_input("equal_d_fidelity: energy must be finite and >= 0");
  }
  const double upper = max_squeeze_parameter(energy);
  if (!(d >= 1.0 && d <= upper * (1.0 + 1e-14))) {
    throw invalid_input("equal_d_fidelity: d must lie in [1, " + std::to_string(upper) + "]");
  }
  return std::exp(d * d - (4.0 * energy + 2.0) * d + 1.0);
}

// ---------------------------------------------------------------------------
// Relaxed problem: total energy 2E shared by the two states, antipodal means.

// Quartic whose joint vanishing with its transpose, g(d1,d2) = g(d2,d1) = 0,
// characterizes the critical points of constrained_log_fidelity.
inline double quartic_g(double d1, double d2, double energy) {
  return 2.0 * (d1 * d2 * d2 * d2 + d1 * d1 * d1 * d2) + d2 * d2 - d1 * d1 -
         d1 * d2 * d2 * (16.0 * energy + 8.0) + 4.0 * d1 * d1 * d2 * d2;
}

// Sum of the magnitudes of the terms of quartic_g, for relative residuals.
inline double quartic_g_scale(double d1, double d2, double energy) {
  return std::abs(2.0 * d1 * d2 * d2 * d2) + std::abs(2.0 * d1 * d1 * d1 * d2) + d2 * d2 +
         d1 * d1 + std::abs(d1 * d2 * d2 * (16.0 * energy + 8.0)) + 4.0 * d1 * d1 * d2 * d2;
}

// Squeezing energy shared by the pair: sum_i (d_i - 1)^2 / (4 d_i).
inline double squeeze_energy(double d1, double d2) {
  return 0.25 * ((d1 - 1.0) * (d1 - 1.0) / d1 + (d2 - 1.0) * (d2 - 1.0) / d2);
}

// log of 2 sqrt(d1 d2)/(d1 + d2) exp(-8 d1 d2/(d1 + d2) (E - f/2)).
inline double constrained_log_fidelity(double d1, double d2, double energy) {
  const double s = d1 + d2;
  return std::log(2.0) + 0.5 * std::log(d1 * d2) - std::log(s) -
         8.0 * d1 * d2 / s * (energy - 0.5 * squeeze_energy(d1, d2));
}

inline double constrained_fidelity(double d1, double d2, double energy) {
  return std::exp(constrained_log_fidelity(d1, d2, energy));
}

inline Eigen::Vector2d constrained_log_fidelity_gradient(double d1, double d2, double energy) {
  const double s = d1 + d2;
  const double p = d1 * d2 / s;
  const double budget = energy - 0.5 * squeeze_energy(d1, d2);
  auto partial = [&](double self, double other) {
    const double dp = other * other / (s * s);
    const double dbudget = -(1.0 - 1.0 / (self * self)) / 8.0;
    return 0.5 / self - 1.0 / s - 8.0 * (dp * budget + p * dbudget);
  };
  return {partial(d1, d2), partial(d2, d1)};
}

inline double hessian_determinant_closed_form(double energy) {
  const double e2 = energy * energy;
  const double d = 2.0 * energy + 1.0;
  return std::exp(-8.0 * e2 - 8.0 * energy) * (8.0 * e2 + 8.0 * energy + 1.0) / (2.0 * d * d);
}

// Determinant of the Hessian of constrained_fidelity in (d1, d2) at
// d1 = d2 = 2E + 1, by central differences with step 1e-4 (2E + 1).
inline double hessian_check(double energy) {
  detail::require_positive_energy(energy, "hessian_check");
  const double d = optimal_squeeze_parameter(energy);
  const double h = 1e-4 * d;
  auto f = [energy](double a, double b) { return constrained_fidelity(a, b, energy); };
  const double f0 = f(d, d);
  const double f11 = (f(d + h, d) - 2.0 * f0 + f(d - h, d)) / (h * h);
  const double f22 = (f(d, d + h) - 2.0 * f0 + f(d, d - h)) / (h * h);
  const double f12 =
      (f(d + h, d + h) - f(d + h, d - h) - f(d - h, d + h) + f(d - h, d - h)) / (4.0 * h * h);
  return f11 * f22 - f12 * f12;
}

enum class CriticalKind { minimum, maximum, saddle, degenerate };

inline const char* to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::minimum: return "minimum";
    case CriticalKind::maximum: return "maximum";
    case CriticalKind::saddle: return "saddle";
    case CriticalKind::degenerate: return "degenerate";
  }
  return "unknown";
}

// Classifies a critical point of constrained_log_fidelity from the
// eigenvalues of its Hessian (central differences of the analytic gradient).
inline CriticalKind classify_critical_point(double d1, double d2, double energy) {
  const double h1 = 1e-6 * std::max(1.0, d1);
  const double h2 = 1e-6 * std::max(1.0, d2);
  const Eigen::Vector2d c1 = (constrained_log_fidelity_gradient(d1 + h1, d2, energy) -
                              constrained_log_fidelity_gradient(d1 - h1, d2, energy)) /
                             (2.0 * h1);
  const Eigen::Vector2d c2 = (constrained_log_fidelity_gradient(d1, d2 + h2, energy) -
                              constrained_log_fidelity_gradient(d1, d2 - h2, energy)) /
                             (2.0 * h2);
  Eigen::Matrix2d hess;
  hess << c1(0), 0.5 * (c1(1) + c2(0)), 0.5 * (c1(1) + c2(0)), c2(1);
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(hess).eigenvalues();
  const double tol = 1e-7 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev(0) > tol) return CriticalKind::minimum;
  if (ev(1) < -tol) return CriticalKind::maximum;
  if (ev(0) < -tol && ev(1) > tol) return CriticalKind::saddle;
  return CriticalKind::degenerate;
}

// ---------------------------------------------------------------------------
// Polar form of the stationarity system: d1 = R cos t, d2 = R sin t.

// Each radius is empty where its radicand is negative. R1 is defined on
// (0, pi/2 - fold] and R2 on [fold, pi/2), mirror images under d1 <-> d2.
struct PolarPoint {
  std::optional<double> r1;
  std::optional<double> r2;
};

namespace detail {

struct PolarTerms {
  double lead1, lead2, rad1, rad2, denom;
};

inline PolarTerms polar_terms(double energy, double theta) {
  const double s2 = std::sin(2.0 * theta);
  const double denom = s2 + s2 * s2;
  const double k = 8.0 * energy + 4.0;
  const double cross = 4.0 * std::cos(2.0 * theta) * denom;
  const double st = std::sin(theta) * s2;
  const double ct = std::cos(theta) * s2;
  return {(4.0 * energy + 2.0) * st, (4.0 * energy + 2.0) * ct, k * k * st * st + cross,
          k * k * ct * ct - cross, denom};
}

}  // namespace detail

// R1 solves g(d1, d2) = 0 and R2 solves g(d2, d1) = 0 along the ray at angle
// theta (larger root of each quadratic in R).
inline PolarPoint polar_curves(double energy, double theta) {
  if (!(theta > 0.0 && theta < 0.5 * std::numbers::pi)) {
    throw invalid_input("polar_curves: theta must lie in (0, pi/2)");
  }
  if (!std::isfinite(energy) || energy < 0.0) throw invalid_input("polar_curves: energy must be >= 0");
  const auto t = detail::polar_terms(energy, theta);
  PolarPoint p;
  if (t.rad1 >= 0.0) p.r1 = (t.lead1 + 0.5 * std::sqrt(t.rad1)) / t.denom;
  if (t.rad2 >= 0.0) p.r2 = (t.lead2 + 0.5 * std::sqrt(t.rad2)) / t.denom;
  return p;
}

// Smallest angle in (0, pi/4) at which R2 becomes defined.
inline double polar_fold_angle(double energy) {
  double lo = 0.0;
  double hi = 0.25 * std::numbers::pi;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (detail::polar_terms(energy, mid).rad2 >= 0.0 ? hi : lo) = mid;
  }
  return hi;
}

struct PolarIntersection {
  double theta = 0.0;
  double radius = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double residual = 0.0;  // |R1 - R2|
  double quartic_residual_12 = 0.0;  // |g(d1, d2)|
  double quartic_residual_21 = 0.0;  // |g(d2, d1)|
  double quartic_scale = 1.0;
  bool feasible = false;  // 2E - f(d1, d2) >= 0, i.e. the displacement is real
  CriticalKind kind = CriticalKind::degenerate;
};

struct PolarSolveReport {
  double energy = 0.0;
  double fold_angle = 0.0;
  std::vector<PolarIntersection> intersections;  // ascending theta, last is pi/4

  bool has_second_intersection() const { return intersections.size() >= 2; }
};

namespace detail {

inline PolarIntersection make_intersection(double energy, double theta) {
  PolarIntersection x;
  x.theta = theta;
  const auto t = polar_terms(energy, theta);
  const double r1 = (t.lead1 + 0.5 * std::sqrt(std::max(0.0, t.rad1))) / t.denom;
  const double r2 = (t.lead2 + 0.5 * std::sqrt(std::max(0.0, t.rad2))) / t.denom;
  x.radius = 0.5 * (r1 + r2);
  x.residual = std::abs(r1 - r2);
  x.d1 = x.radius * std::cos(theta);
  x.d2 = x.radius * std::sin(theta);
  x.quartic_residual_12 = std::abs(quartic_g(x.d1, x.d2, energy));
  x.quartic_residual_21 = std::abs(quartic_g(x.d2, x.d1, energy));
  x.quartic_scale = std::max({1.0, quartic_g_scale(x.d1, x.d2, energy),
                              quartic_g_scale(x.d2, x.d1, energy)});
  x.feasible = 2.0 * energy - squeeze_energy(x.d1, x.d2) >= 0.0;
  x.kind = classify_critical_point(x.d1, x.d2, energy);
  return x;
}

}  // namespace detail

// Scans (0, pi/4] on a uniform grid for sign changes of R1 - R2 and refines
// each by bisection. R2 starts at a fold where its radicand vanishes and the
// second root can sit arbitrarily close to it, so the fold angle is added as
// a sample point. theta = pi/4 is always reported.
inline PolarSolveReport find_intersections(double energy, int grid_points = 2048) {
  detail::require_positive_energy(energy, "find_intersections");
  if (grid_points < 64) throw invalid_input("find_intersections: grid_points must be >= 64");
  constexpr double quarter = 0.25 * std::numbers::pi;

  PolarSolveReport report;
  report.energy = energy;
  report.fold_angle = polar_fold_angle(energy);

  auto diff = [energy](double theta) {
    const auto t = detail::polar_terms(energy, theta);
    const double r1 = (t.lead1 + 0.5 * std::sqrt(std::max(0.0, t.rad1))) / t.denom;
    const double r2 = (t.lead2 + 0.5 * std::sqrt(std::max(0.0, t.rad2))) / t.denom;
    return r1 - r2;
  };

  std::vector<double> samples{report.fold_angle};
  for (int k = 1; k < grid_points; ++k) {
    const double theta = quarter * k / grid_points;
    if (theta > report.fold_angle) samples.push_back(theta);
  }

  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    double lo = samples[i];
    double hi = samples[i + 1];
    double flo = diff(lo);
    const double fhi = diff(hi);
    if (flo == 0.0) {
      report.intersections.push_back(detail::make_intersection(energy, lo));
      continue;
    }
    if ((flo > 0.0) == (fhi > 0.0) || fhi == 0.0) continue;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      mid = 0.5 * (lo + hi);
      const double fm = diff(mid);
      if (std::abs(fm) < 1e-12 || mid <= lo || mid >= hi) break;
      if ((fm > 0.0) == (flo > 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    report.intersections.push_back(detail::make_intersection(energy, mid));
  }
  report.intersections.push_back(detail::make_intersection(energy, quarter));
  return report;
}

// ---------------------------------------------------------------------------
// Independent numerical minimization over all isoenergetic pure pairs.

enum class PairFamily {
  full,      // displacement magnitude, displacement phase and squeeze phase per state
  coherent,  // no squeezing; only the displacement phases vary
};

struct MinimizeConfig {
  int starts = 32;
  PairFamily family = PairFamily::full;
  unsigned threads = 1;
  double gradient_tolerance = 1e-10;
  double accept_gradient = 1e-8;
};

struct OptimumReport {
  double energy = 0.0;
  double fidelity = 1.0;
  double log_fidelity = 0.0;
  double closed_form_fidelity = 1.0;
  double relative_error = 0.0;
  double gradient_norm = 0.0;
  PureStateParams state1;
  PureStateParams state2;
  // Squeeze phase minus twice the displacement phase, per state, in
  // (-pi, pi]. Invariant under joint rotations; 0 for the optimal pair.
  std::array<double, 2> relative_squeeze_angles{0.0, 0.0};
  int starts = 0;
  int converged_starts = 0;
  int best_start = -1;
  std::vector<std::string> trace;
};

// Coordinates x = (u1, phi1, theta1, u2, phi2, theta2) with
//   alpha_j = sqrt(E) sin(u_j) e^{i phi_j},  z_j = asinh(sqrt(E) cos(u_j)) e^{i theta_j},
// so |alpha_j|^2 + sinh^2|z_j| = E for every x.
class IsoenergeticPairObjective {
public:
  explicit IsoenergeticPairObjective(double energy) : energy_(energy), root_e_(std::sqrt(energy)) {}

  double energy() const { return energy_; }

  PureStateParams params(const Eigen::VectorXd& x, int which) const {
    const int o = 3 * which;
    const double s = root_e_ * std::sin(x(o));
    const double w = std::asinh(root_e_ * std::cos(x(o)));
    return PureStateParams::from_complex(std::polar(1.0, x(o + 1)) * s,
                                         std::polar(1.0, x(o + 2)) * w);
  }

  // log fidelity and its gradient.
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const {
    std::array<Local, 2> st{local(x, 0), local(x, 1)};
    const Eigen::Vector2d delta = st[0].m - st[1].m;
    const Eigen::Matrix2d a = st[0].cov + st[1].cov;
    const Eigen::Matrix2d a_inv = a.inverse();
    const Eigen::Vector2d v = a_inv * delta;
    grad.resize(6);
    for (int j = 0; j < 2; ++j) {
      const double sign = j == 0 ? 1.0 : -1.0;
      const auto& s = st[static_cast<std::size_t>(j)];
      grad(3 * j) = -sign * v.dot(s.dm_du) + 0.5 * v.dot(s.dcov_du * v) -
                    0.5 * (a_inv * s.dcov_du).trace();
      grad(3 * j + 1) = -sign * v.dot(s.dm_dphi);
      grad(3 * j + 2) = 0.5 * v.dot(s.dcov_dtheta * v) - 0.5 * (a_inv * s.dcov_dtheta).trace();
    }
    return -0.5 * delta.dot(v) - 0.5 * std::log(a.determinant());
  }

private:
  struct Local {
    Eigen::Vector2d m, dm_du, dm_dphi;
    Eigen::Matrix2d cov, dcov_du, dcov_dtheta;
  };

  Local local(const Eigen::VectorXd& x, int which) const {
    const int o = 3 * which;
    const double u = x(o), phi = x(o + 1), theta = x(o + 2);
    const double cu = std::cos(u), su = std::sin(u);
    const double w = std::asinh(root_e_ * cu);
    const double dw_du = -root_e_ * su / std::sqrt(1.0 + energy_ * cu * cu);
    const double ch = std::cosh(2.0 * w), sh = std::sinh(2.0 * w);
    const Eigen::Vector2d dir(std::cos(phi), std::sin(phi));
    const Eigen::Vector2d ortho(-std::sin(phi), std::cos(phi));
    Eigen::Matrix2d k, dk;
    k << std::cos(theta), std::sin(theta), std::sin(theta), -std::cos(theta);
    dk << -std::sin(theta), std::cos(theta), std::cos(theta), std::sin(theta);
    const double scale = std::numbers::sqrt2 * root_e_;
    Local l;
    l.m = scale * su * dir;
    l.dm_du = scale * cu * dir;
    l.dm_dphi = scale * su * ortho;
    l.cov = 0.5 * (ch * Eigen::Matrix2d::Identity() - sh * k);
    l.dcov_du = (sh * Eigen::Matrix2d::Identity() - ch * k) * dw_du;
    l.dcov_dtheta = -0.5 * sh * dk;
    return l;
  }

  double energy_;
  double root_e_;
};

namespace detail {

inline double relative_squeeze_angle(const PureStateParams& p) {
  return wrap_angle(p.squeeze_phase - 2.0 * std::arg(p.displacement));
}

}  // namespace detail

// Minimizes log fidelity over isoenergetic pure pairs from `config.starts`
// seeded starting points. Starts run on up to `config.threads` workers and
// are merged by minimum value with ties broken by start index, so the result
// does not depend on the worker count.
inline OptimumReport numeric_minimize(double energy, std::uint64_t seed,
                                      const MinimizeConfig& config = {}) {
  detail::require_positive_energy(energy, "numeric_minimize");
  if (config.starts < 1) throw invalid_input("numeric_minimize: need at least one start");

  const IsoenergeticPairObjective objective(energy);
  const bool coherent = config.family == PairFamily::coherent;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u_dist(-0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
  std::vector<Eigen::VectorXd> x0(static_cast<std::size_t>(config.starts));
  for (auto& x : x0) {
    x.resize(6);
    for (int j = 0; j < 2; ++j) {
      x(3 * j) = u_dist(rng);
      x(3 * j + 1) = phase_dist(rng);
      x(3 * j + 2) = phase_dist(rng);
    }
  }

  // Coherent family: u = pi/2 (no squeezing), theta irrelevant, phases free.
  auto expand = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& base) {
    if (!coherent) return y;
    Eigen::VectorXd x = base;
    x(0) = x(3) = 0.5 * std::numbers::pi;
    x(2) = x(5) = 0.0;
    x(1) = y(0);
    x(4) = y(1);
    return x;
  };
  auto reduced = [&](const Eigen::VectorXd& y, Eigen::VectorXd& g, const Eigen::VectorXd& base) {
    Eigen::VectorXd full_grad;
    const double f = objective(expand(y, base), full_grad);
    if (coherent) {
      g.resize(2);
      g << full_grad(1), full_grad(4);
    } else {
      g = full_grad;
    }
    return f;
  };

  std::vector<detail::BfgsResult> results(x0.size());
  auto run = [&](std::size_t i) {
    Eigen::VectorXd y = x0[i];
    if (coherent) {
      y.resize(2);
      y << x0[i](1), x0[i](4);
    }
    const auto& base = x0[i];
    results[i] = detail::bfgs(
        [&](const Eigen::VectorXd& v, Eigen::VectorXd& g) { return reduced(v, g, base); }, y,
        {config.gradient_tolerance, 5000});
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, results.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < results.size(); ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < results.size(); i += workers) run(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  OptimumReport report;
  report.energy = energy;
  report.starts = config.starts;
  report.closed_form_fidelity =
      coherent ? std::exp(-4.0 * energy) : optimal_fidelity(energy);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const bool ok = r.gradient_norm < config.accept_gradient && std::isfinite(r.value);
    std::ostringstream line;
    line.precision(17);
    line << "start " << i << ": logF=" << r.value << " |grad|=" << r.gradient_norm
         << " iterations=" << r.iterations << " (" << r.status << ")";
    report.trace.push_back(line.str());
    if (!ok) continue;
    ++report.converged_starts;
    if (report.best_start < 0 || r.value < results[static_cast<std::size_t>(report.best_start)].value) {
      report.best_start = static_cast<int>(i);
    }
  }
  if (report.best_start < 0) {
    throw convergence_error("numeric_minimize: no start converged for E=" + std::to_string(energy),
                            report.trace);
  }

  const auto& best = results[static_cast<std::size_t>(report.best_start)];
  const Eigen::VectorXd x = expand(best.x, x0[static_cast<std::size_t>(report.best_start)]);
  report.log_fidelity = best.value;
  report.fidelity = std::exp(best.value);
  report.gradient_norm = best.gradient_norm;
  report.relative_error =
      std::abs(report.fidelity - report.closed_form_fidelity) / report.closed_form_fidelity;
  report.state1 = objective.params(x, 0);
  report.state2 = objective.params(x, 1);
  report.relative_squeeze_angles = {detail::relative_squeeze_angle(report.state1),
                                    detail::relative_squeeze_angle(report.state2)};
  return report;
}

// ---------------------------------------------------------------------------
// Centered states: all of the energy 2E goes into squeezing.

struct CenteredMinimum {
  double w1 = 0.0;
  double fidelity = 1.0;
};

// 1 / cosh(asinh sqrt(2E - sinh^2 w1) - w1), the fidelity of S(w1)|0> and
// S(w2)|0> once w2 >= 0 is eliminated by sinh^2 w1 + sinh^2 w2 = 2E.
inline double centered_pair_fidelity(double w1, double energy) {
  const double s = std::sinh(w1);
  const double rest = std::max(0.0, 2.0 * energy - s * s);
  return centered_squeezed_fidelity(w1, std::asinh(std::sqrt(rest)));
}

// Coarse scan of the admissible w1 interval, then Brent refinement around
// the best sample. The interval carries a second, boundary local minimum.
inline CenteredMinimum centered_minimum(double energy) {
  detail::require_positive_energy(energy, "centered_minimum");
  const double edge = std::asinh(std::sqrt(2.0 * energy));
  auto f = [energy](double w) { return centered_pair_fidelity(w, energy); };
  constexpr int samples = 400;
  const double step = 2.0 * edge / samples;
  int best = 0;
  for (int i = 1; i <= samples; ++i) {
    if (f(-edge + i * step) < f(-edge + best * step)) best = i;
  }
  const double lo = std::max(-edge, -edge + (best - 1) * step);
  const double hi = std::min(edge, -edge + (best + 1) * step);
  const auto [w, value] = boost::math::tools::brent_find_minima(f, lo, hi, 52);
  return {w, value};
}

}  // namespace gaussdist
