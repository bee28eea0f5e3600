#pragma once

// Phase-space representation of bosonic Gaussian states.
//
// Conventions: hbar = 1, quadratures interleaved per mode as
// (q_1, p_1, ..., q_M, p_M), vacuum covariance diag(1/2, 1/2). The
// symplectic form is the direct sum of [[0, 1], [-1, 0]] over modes.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gaussdist/errors.hpp"

namespace gaussdist {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using complex = std::complex<double>;

namespace tolerance {
inline constexpr double uncertainty = 1e-10;  // min eigenvalue of Sigma + (i/2) Delta
inline constexpr double purity = 1e-9;        // |det(2 Sigma) - 1|
inline constexpr double symplectic = 1e-10;   // entrywise |S^T Delta S - Delta|
inline constexpr double symplectic_det = 1e-9;
}  // namespace tolerance

inline Matrix symplectic_form(int modes) {
  Matrix delta = Matrix::Zero(2 * modes, 2 * modes);
  for (int j = 0; j < modes; ++j) {
    delta(2 * j, 2 * j + 1) = 1.0;
    delta(2 * j + 1, 2 * j) = -1.0;
  }
  return delta;
}

inline Eigen::Matrix2d rotation_matrix(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

/// Mean vector and covariance matrix of an M-mode Gaussian state.
///
/// Construction symmetrizes the covariance and rejects matrices violating
/// the uncertainty relation Sigma + (i/2) Delta >= 0.
class GaussianState {
public:
  GaussianState(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    const auto n = mean_.size();
    if (n == 0 || n % 2 != 0) {
      throw invalid_input("mean vector must have positive even length, got " + std::to_string(n));
    }
    if (cov_.rows() != n || cov_.cols() != n) {
      throw invalid_input("covariance must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (!mean_.allFinite() || !cov_.allFinite()) {
      throw invalid_input("non-finite entry in mean or covariance");
    }
    cov_ = (0.5 * (cov_ + cov_.transpose())).eval();
    if (min_uncertainty_eigenvalue() < -tolerance::uncertainty) {
      throw invalid_input("covariance violates the uncertainty relation");
    }
  }

  int modes() const { return static_cast<int>(mean_.size() / 2); }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

  // Smallest eigenvalue of the Hermitian matrix Sigma + (i/2) Delta.
  double min_uncertainty_eigenvalue() const {
    const ComplexMatrix h =
        cov_.cast<complex>() + complex(0.0, 0.5) * symplectic_form(modes()).cast<complex>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  double purity_determinant() const { return (2.0 * cov_).determinant(); }

  // With the uncertainty relation in force, det(2 Sigma) = 1 iff every
  // symplectic eigenvalue equals 1/2.
  bool is_pure(double tol = tolerance::purity) const {
    return std::abs(purity_determinant() - 1.0) <= tol;
  }

  friend bool operator==(const GaussianState&, const GaussianState&) = default;

private:
  Vector mean_;
  Matrix cov_;
};

/// Parameters of D(alpha) S(z) |0> for a single mode, z = |z| e^{i theta}.
struct PureStateParams {
  complex displacement{0.0, 0.0};
  double squeeze_magnitude = 0.0;
  double squeeze_phase = 0.0;

  complex squeeze() const { return std::polar(squeeze_magnitude, squeeze_phase); }

  // Photon number |alpha|^2 + sinh^2 |z|.
  double energy() const {
    const double s = std::sinh(squeeze_magnitude);
    return std::norm(displacement) + s * s;
  }

  // Builds params from a complex squeeze z, normalizing the phase to [0, 2pi).
  static PureStateParams from_complex(complex alpha, complex z) {
    PureStateParams p;
    p.displacement = alpha;
    p.squeeze_magnitude = std::abs(z);
    p.squeeze_phase = p.squeeze_magnitude > 0.0 ? std::arg(z) : 0.0;
    if (p.squeeze_phase < 0.0) p.squeeze_phase += 2.0 * std::numbers::pi;
    return p;
  }
};

inline Eigen::Matrix2d squeezed_covariance(double magnitude, double phase) {
  const double c = std::cosh(2.0 * magnitude);
  const double s = std::sinh(2.0 * magnitude);
  Eigen::Matrix2d cov;
  cov << c - std::cos(phase) * s, -std::sin(phase) * s,
         -std::sin(phase) * s, c + std::cos(phase) * s;
  return 0.5 * cov;
}

inline GaussianState state_from_params(std::span<const PureStateParams> params) {
  if (params.empty()) throw invalid_input("state_from_params: empty parameter list");
  const auto modes = static_cast<Eigen::Index>(params.size());
  Vector mean(2 * modes);
  Matrix cov = Matrix::Zero(2 * modes, 2 * modes);
  for (Eigen::Index j = 0; j < modes; ++j) {
    const auto& p = params[static_cast<std::size_t>(j)];
    if (!std::isfinite(p.displacement.real()) || !std::isfinite(p.displacement.imag()) ||
        !std::isfinite(p.squeeze_magnitude) || !std::isfinite(p.squeeze_phase)) {
      throw invalid_input("state_from_params: non-finite parameter in mode " + std::to_string(j));
    }
    if (p.squeeze_magnitude < 0.0) {
      throw invalid_input("state_from_params: negative squeeze magnitude");
    }
    mean(2 * j) = std::numbers::sqrt2 * p.displacement.real();
    mean(2 * j + 1) = std::numbers::sqrt2 * p.displacement.imag();
    cov.block<2, 2>(2 * j, 2 * j) = squeezed_covariance(p.squeeze_magnitude, p.squeeze_phase);
  }
  return GaussianState(std::move(mean), std::move(cov));
}

inline GaussianState state_from_params(const PureStateParams& params) {
  return state_from_params(std::span<const PureStateParams>(&params, 1));
}

inline GaussianState vacuum(int modes) {
  if (modes < 1) throw invalid_input("vacuum: modes must be >= 1");
  return GaussianState(Vector::Zero(2 * modes), 0.5 * Matrix::Identity(2 * modes, 2 * modes));
}

// Mean photon number: -M/2 + Tr(Sigma)/2 + |m|^2/2.
inline double energy(const GaussianState& state) {
  return -0.5 * state.modes() + 0.5 * state.cov().trace() + 0.5 * state.mean().squaredNorm();
}

inline double mode_energy(const GaussianState& state, int mode) {
  if (mode < 0 || mode >= state.modes()) throw invalid_input("mode_energy: mode out of range");
  const auto block = state.cov().block<2, 2>(2 * mode, 2 * mode);
  return -0.5 + 0.5 * block.trace() + 0.5 * state.mean().segment<2>(2 * mode).squaredNorm();
}

// Tensor product of two Gaussian states (direct sum in phase space).
inline GaussianState tensor_product(const GaussianState& a, const GaussianState& b) {
  const auto na = a.mean().size();
  const auto nb = b.mean().size();
  Vector mean(na + nb);
  mean << a.mean(), b.mean();
  Matrix cov = Matrix::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  return GaussianState(std::move(mean), std::move(cov));
}

/// Element of Sp(2M, R); validated on construction.
class SymplecticMatrix {
public:
  explicit SymplecticMatrix(Matrix s) : s_(std::move(s)) {
    if (s_.rows() != s_.cols() || s_.rows() == 0 || s_.rows() % 2 != 0) {
      throw invalid_input("symplectic matrix must be square with even dimension");
    }
    if (!s_.allFinite()) throw invalid_input("symplectic matrix has non-finite entries");
    const Matrix delta = symplectic_form(modes());
    const double defect = (s_.transpose() * delta * s_ - delta).cwiseAbs().maxCoeff();
    if (defect > tolerance::symplectic) {
      throw invalid_input("matrix is not symplectic: max |S^T D S - D| = " + std::to_string(defect));
    }
    if (std::abs(s_.determinant() - 1.0) > tolerance::symplectic_det) {
      throw invalid_input("symplectic matrix determinant differs from 1");
    }
  }

  int modes() const { return static_cast<int>(s_.rows() / 2); }
  int dim() const { return static_cast<int>(s_.rows()); }
  const Matrix& matrix() const { return s_; }

  SymplecticMatrix operator*(const SymplecticMatrix& other) const {
    return SymplecticMatrix(s_ * other.s_);
  }

  bool is_orthogonal(double tol = 1e-10) const {
    return (s_.transpose() * s_ - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff() <= tol;
  }

  // m -> S m, Sigma -> S Sigma S^T.
  GaussianState apply(const GaussianState& state) const {
    if (state.mean().size() != s_.rows()) {
      throw invalid_input("symplectic dimension does not match state");
    }
    return GaussianState(s_ * state.mean(), s_ * state.cov() * s_.transpose());
  }

  // Largest |lambda_i * lambda_{2M-1-i} - 1| over the sorted spectrum of a
  // positive definite symplectic matrix. Throws if S is not positive definite.
  double reciprocal_pairing_defect() const {
    if ((s_ - s_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw precondition_error("spectral pairing requires a symmetric matrix");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(s_, Eigen::EigenvaluesOnly);
    const Vector ev = solver.eigenvalues();
    if (ev.minCoeff() <= 0.0) throw precondition_error("matrix is not positive definite");
    double defect = 0.0;
    const auto n = ev.size();
    for (Eigen::Index i = 0; i < n / 2; ++i) {
      defect = std::max(defect, std::abs(ev(i) * ev(n - 1 - i) - 1.0));
    }
    return defect;
  }

  static SymplecticMatrix identity(int modes) {
    return SymplecticMatrix(Matrix::Identity(2 * modes, 2 * modes));
  }

  // Passive (orthogonal) symplectic matrix of a unitary acting on the mode
  // operators, a_j -> sum_k U_jk a_k. Each entry u maps to the 2x2 block
  // [[Re u, -Im u], [Im u, Re u]].
  static SymplecticMatrix from_unitary(const ComplexMatrix& u) {
    if (u.rows() != u.cols() || u.rows() == 0) throw invalid_input("unitary must be square");
    const auto m = u.rows();
    if ((u.adjoint() * u - ComplexMatrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10) {
      throw invalid_input("matrix is not unitary");
    }
    Matrix s(2 * m, 2 * m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index k = 0; k < m; ++k) {
        const complex v = u(j, k);
        s.block<2, 2>(2 * j, 2 * k) << v.real(), -v.imag(), v.imag(), v.real();
      }
    }
    return SymplecticMatrix(std::move(s));
  }

  // Independent single-mode squeezers: diag(e^{-r_j}, e^{r_j}) per mode.
  static SymplecticMatrix squeezers(std::span<const double> r) {
    const auto m = static_cast<Eigen::Index>(r.size());
    Matrix s = Matrix::Zero(2 * m, 2 * m);
    for (Eigen::Index j = 0; j < m; ++j) {
      s(2 * j, 2 * j) = std::exp(-r[static_cast<std::size_t>(j)]);
      s(2 * j + 1, 2 * j + 1) = std::exp(r[static_cast<std::size_t>(j)]);
    }
    return SymplecticMatrix(std::move(s));
  }

  static SymplecticMatrix rotations(std::span<const double> angles) {
    const auto m = static_cast<Eigen::Index>(angles.size());
    Matrix s = Matrix::Zero(2 * m, 2 * m);
    for (Eigen::Index j = 0; j < m; ++j) {
      s.block<2, 2>(2 * j, 2 * j) = rotation_matrix(angles[static_cast<std::size_t>(j)]);
    }
    return SymplecticMatrix(std::move(s));
  }

private:
  Matrix s_;
};

// Phase rotation of every mode by its own angle. The mean is rotated by the
// 2x2 rotation of angle theta_j (alpha_j -> alpha_j e^{i theta_j}) and the
// covariance is conjugated by it, so a squeeze phase shifts by 2 theta_j.
inline GaussianState rotate(const GaussianState& state, std::span<const double> angles) {
  if (static_cast<int>(angles.size()) != state.modes()) {
    throw invalid_input("rotate: need one angle per mode");
  }
  return SymplecticMatrix::rotations(angles).apply(state);
}

inline GaussianState rotate(const GaussianState& state, double theta) {
  const std::vector<double> angles(static_cast<std::size_t>(state.modes()), theta);
  return rotate(state, angles);
}

// exp(-z^T Sigma z / 2 + i m^T z).
inline complex characteristic_function(const GaussianState& state, const Vector& point) {
  if (point.size() != state.mean().size()) {
    throw invalid_input("characteristic_function: point has dimension " +
                        std::to_string(point.size()) + ", state has " +
                        std::to_string(state.mean().size()));
  }
  const double quad = point.dot(state.cov() * point);
  return std::exp(complex(-0.5 * quad, state.mean().dot(point)));
}

// Haar-random M x M unitary (QR of a complex Ginibre matrix with phase fix).
template <class Rng>
ComplexMatrix random_unitary(int modes, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(modes, modes);
  for (int i = 0; i < modes; ++i) {
    for (int j = 0; j < modes; ++j) g(i, j) = complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(modes, modes);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < modes; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

template <class Rng>
SymplecticMatrix random_passive(int modes, Rng& rng) {
  return SymplecticMatrix::from_unitary(random_unitary(modes, rng));
}

// Euler (Bloch-Messiah) form O1 * squeezers(r) * O2 with random passive O1, O2.
template <class Rng>
SymplecticMatrix random_symplectic(std::span<const double> squeeze, Rng& rng) {
  const int modes = static_cast<int>(squeeze.size());
  return random_passive(modes, rng) * SymplecticMatrix::squeezers(squeeze) *
         random_passive(modes, rng);
}

}  // namespace gaussdist
