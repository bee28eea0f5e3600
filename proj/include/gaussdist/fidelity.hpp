#pragma once

// Fidelity, trace distance and Helstrom error for pure Gaussian states.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <string>

#include <Eigen/Dense>

#include "gaussdist/errors.hpp"
#include "gaussdist/gaussian_state.hpp"

namespace gaussdist {

// Receives numerical warnings (e.g. fidelity clamping). Defaults to stderr;
// replace it to silence or capture. Not synchronized: set it before spawning
// worker threads.
inline std::function<void(const std::string&)>& warning_handler() {
  static std::function<void(const std::string&)> handler = [](const std::string& msg) {
    std::cerr << "gaussdist warning: " << msg << '\n';
  };
  return handler;
}

namespace detail {

inline double clamp_fidelity(double f) {
  if (f < -1e-9 || f > 1.0 + 1e-9) {
    warning_handler()("fidelity " + std::to_string(f) + " clamped to [0, 1]");
  }
  return std::clamp(f, 0.0, 1.0);
}

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw invalid_input(std::string(what) + " must be finite");
}

}  // namespace detail

// 2 sqrt(1 - F), the trace norm of the difference of two pure states.
inline double trace_distance_from_fidelity(double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
    throw invalid_input("fidelity must lie in [0, 1]");
  }
  return 2.0 * std::sqrt(1.0 - fidelity);
}

// Minimal error for discriminating two equiprobable pure states,
// (1 - sqrt(1 - F)) / 2. Uses F / (2 (1 + sqrt(1 - F))) for tiny F.
inline double helstrom_error(double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
    throw invalid_input("helstrom_error: fidelity must lie in [0, 1], got " +
                        std::to_string(fidelity));
  }
  const double root = std::sqrt(1.0 - fidelity);
  if (fidelity < 1e-8) return fidelity / (2.0 * (1.0 + root));
  return 0.5 * (1.0 - root);
}

struct DiscriminationResult {
  double fidelity = 1.0;
  double trace_distance = 0.0;
  double p_err = 0.5;

  static DiscriminationResult from_fidelity(double fidelity) {
    DiscriminationResult r;
    r.fidelity = fidelity;
    r.trace_distance = trace_distance_from_fidelity(fidelity);
    r.p_err = helstrom_error(fidelity);
    return r;
  }

  // Max deviation from trace_distance = 2 sqrt(1-F) and p_err = 1/2 - T/4.
  double identity_defect() const {
    return std::max(std::abs(trace_distance - 2.0 * std::sqrt(1.0 - fidelity)),
                    std::abs(p_err - (0.5 - 0.25 * trace_distance)));
  }
};

/// |<phi_1|phi_2>|^2 for pure Gaussian states:
///   exp(-1/2 dm^T (S1+S2)^{-1} dm) / sqrt(det(S1+S2)).
/// Single-mode uses the closed 2x2 inverse; multimode an LU factorization.
inline double pure_fidelity(const GaussianState& s1, const GaussianState& s2) {
  if (s1.modes() != s2.modes()) {
    throw invalid_input("pure_fidelity: mode count mismatch (" + std::to_string(s1.modes()) +
                        " vs " + std::to_string(s2.modes()) + ")");
  }
  if (!s1.is_pure() || !s2.is_pure()) {
    throw precondition_error("pure_fidelity: both states must be pure (det(2 Sigma) = 1)");
  }
  const Vector dm = s1.mean() - s2.mean();
  const Matrix sum = s1.cov() + s2.cov();
  double quad = 0.0;
  double det = 0.0;
  if (s1.modes() == 1) {
    const double a = sum(0, 0), b = sum(0, 1), d = sum(1, 1);
    det = a * d - b * b;
    if (!(det > 0.0)) throw internal_error("pure_fidelity: singular covariance sum");
    quad = (d * dm(0) * dm(0) - 2.0 * b * dm(0) * dm(1) + a * dm(1) * dm(1)) / det;
  } else {
    Eigen::PartialPivLU<Matrix> lu(sum);
    det = lu.determinant();
    if (!(det > 0.0)) throw internal_error("pure_fidelity: singular covariance sum");
    quad = dm.dot(lu.solve(dm));
  }
  return detail::clamp_fidelity(std::exp(-0.5 * quad) / std::sqrt(det));
}

inline DiscriminationResult discriminate(const GaussianState& s1, const GaussianState& s2) {
  return DiscriminationResult::from_fidelity(pure_fidelity(s1, s2));
}

// Fidelity of D(r1)S(z1)|0> and D(r2)S(z2)|0> with real r_j and d_j = e^{2 z_j}.
inline double squeezed_pair_fidelity(double r1, double r2, double d1, double d2) {
  detail::require_finite(r1, "r1");
  detail::require_finite(r2, "r2");
  if (!(d1 > 0.0) || !(d2 > 0.0) || !std::isfinite(d1) || !std::isfinite(d2)) {
    throw invalid_input("squeezed_pair_fidelity: d1 and d2 must be positive");
  }
  const double s = d1 + d2;
  const double dr = r2 - r1;
  return 2.0 * std::sqrt(d1 * d2) / s * std::exp(-2.0 * d1 * d2 / s * dr * dr);
}

// Largest b = e^{2x} for which the displacement of an energy-E state squeezed
// by x is real: 2E + 1 + 2 sqrt(E^2 + E).
inline double max_squeeze_parameter(double energy) {
  return 2.0 * energy + 1.0 + 2.0 * std::sqrt(energy * energy + energy);
}

// Fidelity of the pair squeezed in conjugate quadratures (angles (pi, 0)),
// equal squeezing b = e^{2x} and antipodal displacements.
inline double opposite_phase_squeeze_fidelity(double b, double energy) {
  detail::require_finite(energy, "energy");
  if (energy < 0.0) throw invalid_input("opposite_phase_squeeze_fidelity: energy must be >= 0");
  const double upper = max_squeeze_parameter(energy);
  if (!(b >= 1.0 && b <= upper * (1.0 + 1e-14))) {
    throw invalid_input("opposite_phase_squeeze_fidelity: b must lie in [1, " +
                        std::to_string(upper) + "]");
  }
  const double q = 1.0 + b * b;
  const double budget = std::max(0.0, energy - 0.25 * (b - 1.0) * (b - 1.0) / b);
  return 2.0 * b / q * std::exp(-8.0 * b / q * budget);
}

// Fidelity of two centered squeezed vacua S(w1)|0>, S(w2)|0>, real w.
inline double centered_squeezed_fidelity(double w1, double w2) {
  detail::require_finite(w1, "w1");
  detail::require_finite(w2, "w2");
  return 1.0 / std::cosh(w1 - w2);
}

}  // namespace gaussdist
