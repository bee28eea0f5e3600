#pragma once

// Brute-force oracle in a truncated number basis. States are built by
// exponentiating the truncated squeeze and displacement generators on the
// vacuum; nothing here uses the phase-space formulas.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "gaussdist/errors.hpp"
#include "gaussdist/gaussian_state.hpp"

namespace gaussdist {

using ComplexVector = Eigen::VectorXcd;

namespace fock_tolerance {
inline constexpr double tail_mass = 1e-8;    // mass above 0.9 N for an accepted cutoff
inline constexpr double tail_energy = 1e-8;  // sum_{n > 0.9 N} n |c_n|^2 for an accepted cutoff
}

/// Amplitudes c_0..c_N of a state truncated at photon number N.
struct FockVector {
  int cutoff = 0;
  ComplexVector amplitudes;
  double tail_mass = 0.0;     // sum_{n > 0.9 N} |c_n|^2
  double tail_energy = 0.0;   // sum_{n > 0.9 N} n |c_n|^2
  bool renormalized = false;

  double norm() const { return amplitudes.norm(); }

  FockVector renormalized_copy() const {
    FockVector v = *this;
    v.amplitudes /= v.amplitudes.norm();
    v.renormalized = true;
    return v;
  }
};

// sum_{n > 0.9 N} n^power |c_n|^2.
inline double tail_moment(const ComplexVector& amplitudes, int power) {
  const auto cutoff = amplitudes.size() - 1;
  double mass = 0.0;
  for (Eigen::Index n = 0; n <= cutoff; ++n) {
    if (static_cast<double>(n) > 0.9 * static_cast<double>(cutoff)) {
      mass += (power == 0 ? 1.0 : static_cast<double>(n)) * std::norm(amplitudes(n));
    }
  }
  return mass;
}

inline double tail_mass(const ComplexVector& amplitudes) { return tail_moment(amplitudes, 0); }

// max(32, ceil(8 (E + sqrt E) + 16)).
inline int cutoff_heuristic(double energy) {
  const double e = std::max(0.0, energy);
  return std::max(32, static_cast<int>(std::ceil(8.0 * (e + std::sqrt(e)) + 16.0)));
}

inline FockVector fock_basis_state(int n, int cutoff) {
  if (cutoff < 1 || n < 0 || n > cutoff) throw invalid_input("fock_basis_state: n out of range");
  FockVector v;
  v.cutoff = cutoff;
  v.amplitudes = ComplexVector::Zero(cutoff + 1);
  v.amplitudes(n) = 1.0;
  return v;
}

namespace detail {

// y = (conj(z) a^2 - z a^dag^2) x / 2 on the truncated space.
inline void apply_squeeze_generator(complex z, const ComplexVector& x, ComplexVector& y) {
  const auto top = x.size() - 1;
  for (Eigen::Index n = 0; n <= top; ++n) {
    complex acc = 0.0;
    if (n + 2 <= top) acc += std::conj(z) * std::sqrt(double(n + 1) * double(n + 2)) * x(n + 2);
    if (n >= 2) acc -= z * std::sqrt(double(n) * double(n - 1)) * x(n - 2);
    y(n) = 0.5 * acc;
  }
}

// y = (alpha a^dag - conj(alpha) a) x on the truncated space.
inline void apply_displacement_generator(complex alpha, const ComplexVector& x, ComplexVector& y) {
  const auto top = x.size() - 1;
  for (Eigen::Index n = 0; n <= top; ++n) {
    complex acc = 0.0;
    if (n >= 1) acc += alpha * std::sqrt(double(n)) * x(n - 1);
    if (n + 1 <= top) acc -= std::conj(alpha) * std::sqrt(double(n + 1)) * x(n + 1);
    y(n) = acc;
  }
}

// exp(G) v as (exp(G / s))^s v with each factor a Taylor series truncated at
// machine precision; norm_bound bounds ||G||_1 and fixes s.
template <class Apply>
ComplexVector expmv(Apply&& apply, double norm_bound, ComplexVector v) {
  const int steps = std::max(1, static_cast<int>(std::ceil(norm_bound)));
  const double scale = 1.0 / steps;
  ComplexVector term(v.size()), next(v.size());
  for (int s = 0; s < steps; ++s) {
    ComplexVector sum = v;
    term = v;
    for (int k = 1; k < 80; ++k) {
      apply(term, next);
      term = next * (scale / k);
      sum += term;
      if (term.cwiseAbs().maxCoeff() <= 1e-18 * sum.cwiseAbs().maxCoeff()) break;
    }
    v = std::move(sum);
  }
  return v;
}

}  // namespace detail

// D(alpha) S(z) |0> at the given cutoff: S is applied first, then D.
inline FockVector build_state(const PureStateParams& params, int cutoff) {
  if (cutoff < 2) throw invalid_input("build_state: cutoff must be >= 2");
  if (!std::isfinite(params.displacement.real()) || !std::isfinite(params.displacement.imag()) ||
      !std::isfinite(params.squeeze_magnitude) || !std::isfinite(params.squeeze_phase)) {
    throw invalid_input("build_state: non-finite parameters");
  }
  ComplexVector v = ComplexVector::Zero(cutoff + 1);
  v(0) = 1.0;
  const complex z = params.squeeze();
  if (std::abs(z) > 0.0) {
    v = detail::expmv([z](const ComplexVector& x, ComplexVector& y) {
          detail::apply_squeeze_generator(z, x, y);
        }, std::abs(z) * (cutoff + 1), std::move(v));
  }
  const complex alpha = params.displacement;
  if (std::abs(alpha) > 0.0) {
    v = detail::expmv([alpha](const ComplexVector& x, ComplexVector& y) {
          detail::apply_displacement_generator(alpha, x, y);
        }, 2.0 * std::abs(alpha) * std::sqrt(cutoff + 1.0), std::move(v));
  }
  FockVector out;
  out.cutoff = cutoff;
  out.tail_mass = tail_mass(v);
  out.tail_energy = tail_moment(v, 1);
  out.amplitudes = std::move(v);
  // Truncation artifacts live at the top of the basis; energies weight them
  // by n, so the n-weighted tail is bounded too.
  if (!(out.tail_mass < fock_tolerance::tail_mass) ||
      !(out.tail_energy < fock_tolerance::tail_energy)) {
    throw cutoff_too_small(cutoff, out.tail_mass);
  }
  return out;
}

// Starts from cutoff_heuristic(energy) (at least `min_cutoff`) and doubles
// until the tail check passes.
inline FockVector build_state_auto(const PureStateParams& params, int min_cutoff = 0,
                                   int max_cutoff = 8192) {
  int cutoff = std::max(min_cutoff, cutoff_heuristic(params.energy()));
  for (;;) {
    try {
      return build_state(params, cutoff);
    } catch (const cutoff_too_small& e) {
      if (2 * cutoff > max_cutoff) throw;
      cutoff *= 2;
    }
  }
}

// Both states at a common cutoff large enough for each.
inline std::pair<FockVector, FockVector> build_pair(const PureStateParams& a, const PureStateParams& b) {
  auto first = build_state_auto(a, cutoff_heuristic(b.energy()));
  auto second = build_state_auto(b, first.cutoff);
  if (second.cutoff != first.cutoff) first = build_state(a, second.cutoff);
  return {std::move(first), std::move(second)};
}

inline void require_same_cutoff(const FockVector& a, const FockVector& b, const char* where) {
  if (a.cutoff != b.cutoff || a.amplitudes.size() != b.amplitudes.size()) {
    throw invalid_input(std::string(where) + ": cutoff mismatch (" + std::to_string(a.cutoff) +
                        " vs " + std::to_string(b.cutoff) + ")");
  }
}

// <v1|v2>.
inline complex overlap(const FockVector& v1, const FockVector& v2) {
  require_same_cutoff(v1, v2, "overlap");
  return v1.amplitudes.dot(v2.amplitudes);  // Eigen conjugates the left operand
}

inline double fock_energy(const FockVector& v) {
  double e = 0.0;
  for (Eigen::Index n = 0; n < v.amplitudes.size(); ++n) e += double(n) * std::norm(v.amplitudes(n));
  return e;
}

// Trace norm of |v1><v1| - |v2><v2| from the eigenvalues of its restriction
// to span{v1, v2} in an orthonormal (Gram-Schmidt) basis.
inline double trace_distance_pure(const FockVector& v1, const FockVector& v2) {
  require_same_cutoff(v1, v2, "trace_distance_pure");
  const ComplexVector e1 = v1.amplitudes / v1.amplitudes.norm();
  const ComplexVector u2 = v2.amplitudes / v2.amplitudes.norm();
  const complex c = e1.dot(u2);
  ComplexVector rest = u2 - c * e1;
  const double rest_norm = rest.norm();
  // Components of u2 in the basis {e1, e2}; v2 parallel to v1 gives zero.
  complex b1 = c, b2 = 0.0;
  if (rest_norm > 1e-15) b2 = rest.dot(u2) / rest_norm;
  Eigen::Matrix2cd diff;
  diff << 1.0 - b1 * std::conj(b1), -b1 * std::conj(b2),
          -b2 * std::conj(b1), -b2 * std::conj(b2);
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(diff).eigenvalues();
  return std::abs(ev(0)) + std::abs(ev(1));
}

// ---------------------------------------------------------------------------

enum class GridAngles {
  critical_plus_coarse,  // squeeze phases on the 8 multiples of pi/4 (contains 0 and pi)
  full,                  // `resolution` equally spaced squeeze phases
};

struct GridOptions {
  GridAngles angles = GridAngles::critical_plus_coarse;
  unsigned threads = 1;
};

struct GridResult {
  double minimum = 1.0;
  double r1 = 0.0, r2 = 0.0;
  double theta1 = 0.0, theta2 = 0.0;
  int cutoff = 0;
  long long pairs = 0;
};

// Minimum of |<phi_1|phi_2>|^2 over a grid of isoenergetic states
// D(r) S(|z| e^{i theta}) |0> with real r. The constraint r^2 + sinh^2|z| = E
// is walked by an angle u in [-pi/2, pi/2]: r = sqrt(E) sin u,
// sinh|z| = sqrt(E) cos u, sampled at u_k = -pi/2 + k pi / resolution so that
// doubling the resolution refines the previous grid.
inline GridResult grid_bruteforce(double energy, int resolution, const GridOptions& opts = {}) {
  if (!(energy > 0.0) || !std::isfinite(energy)) throw invalid_input("grid_bruteforce: energy must be > 0");
  if (resolution < 32) throw invalid_input("grid_bruteforce: resolution must be >= 32");

  const int n_angles = opts.angles == GridAngles::full ? resolution : 8;
  const double root_e = std::sqrt(energy);
  struct Node {
    double r, theta;
    PureStateParams params;
  };
  std::vector<Node> nodes;
  for (int k = 0; k <= resolution; ++k) {
    const double u = -0.5 * std::numbers::pi + std::numbers::pi * k / resolution;
    const double r = root_e * std::sin(u);
    const double mag = std::asinh(root_e * std::max(0.0, std::cos(u)));
    for (int a = 0; a < n_angles; ++a) {
      const double theta = 2.0 * std::numbers::pi * a / n_angles;
      nodes.push_back({r, theta, PureStateParams{complex(r, 0.0), mag, theta}});
    }
  }

  int cutoff = cutoff_heuristic(energy);
  Eigen::MatrixXcd states;
  for (bool done = false; !done;) {
    states.resize(cutoff + 1, static_cast<Eigen::Index>(nodes.size()));
    done = true;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      try {
        states.col(static_cast<Eigen::Index>(i)) = build_state(nodes[i].params, cutoff).amplitudes;
      } catch (const cutoff_too_small&) {
        if (cutoff > 8192) throw;
        cutoff *= 2;
        done = false;
        break;
      }
    }
  }

  // Row blocks per worker; merge by (value, i, j) for a worker-independent result.
  const auto count = static_cast<Eigen::Index>(nodes.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(count)));
  using Best = std::tuple<double, Eigen::Index, Eigen::Index>;
  std::vector<Best> best(workers, {std::numeric_limits<double>::infinity(), -1, -1});
  auto work = [&](unsigned w) {
    const Eigen::Index begin = count * w / workers;
    const Eigen::Index end = count * (w + 1) / workers;
    if (begin == end) return;
    const Eigen::MatrixXcd gram = states.middleCols(begin, end - begin).adjoint() * states;
    for (Eigen::Index i = begin; i < end; ++i) {
      for (Eigen::Index j = i + 1; j < count; ++j) {
        const Best cand{std::norm(gram(i - begin, j)), i, j};
        if (cand < best[w]) best[w] = cand;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  const Best overall = *std::min_element(best.begin(), best.end());

  GridResult out;
  out.minimum = std::get<0>(overall);
  const auto& a = nodes[static_cast<std::size_t>(std::get<1>(overall))];
  const auto& b = nodes[static_cast<std::size_t>(std::get<2>(overall))];
  out.r1 = a.r;
  out.r2 = b.r;
  out.theta1 = a.theta;
  out.theta2 = b.theta;
  out.cutoff = cutoff;
  out.pairs = static_cast<long long>(count) * (count - 1) / 2;
  return out;
}

}  // namespace gaussdist
