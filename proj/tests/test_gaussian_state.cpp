#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gaussdist/gaussian_state.hpp"

using namespace gaussdist;

namespace {

constexpr double pi = std::numbers::pi;

PureStateParams coherent(double re, double im = 0.0) { return {{re, im}, 0.0, 0.0}; }

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST(StateFromParams, VacuumHasUnitVarianceHalf) {
  const auto s = state_from_params(PureStateParams{});
  EXPECT_EQ(s.modes(), 1);
  EXPECT_EQ(s.mean(), Vector::Zero(2));
  EXPECT_TRUE(s.cov().isApprox(diag2(0.5, 0.5), 0.0));
  EXPECT_TRUE(s.is_pure());
}

TEST(StateFromParams, RealSqueezeIsDiagonal) {
  for (double x : {0.1, 0.7, 2.0}) {
    const auto s = state_from_params({{0.0, 0.0}, x, 0.0});
    EXPECT_NEAR(s.cov()(0, 0), std::exp(-2 * x) / 2, 1e-15 * std::exp(2 * x));
    EXPECT_NEAR(s.cov()(1, 1), std::exp(2 * x) / 2, 1e-15 * std::exp(2 * x));
    EXPECT_NEAR(s.cov()(0, 1), 0.0, 1e-15);
  }
}

TEST(StateFromParams, CoherentMeanIsScaledDisplacement) {
  const auto s = state_from_params(coherent(1.0));
  EXPECT_NEAR(s.mean()(0), std::numbers::sqrt2, 1e-15);
  EXPECT_EQ(s.mean()(1), 0.0);
  EXPECT_TRUE(s.cov().isApprox(diag2(0.5, 0.5)));
}

TEST(StateFromParams, RejectsNonFinite) {
  EXPECT_THROW(state_from_params({{0.0, 0.0}, std::nan(""), 0.0}), invalid_input);
  EXPECT_THROW(state_from_params({{INFINITY, 0.0}, 0.1, 0.0}), invalid_input);
}

TEST(StateFromParams, MultimodeIsBlockDiagonal) {
  const std::vector<PureStateParams> p{coherent(0.5, -0.25), {{0.0, 0.0}, 0.4, 1.0}};
  const auto s = state_from_params(p);
  EXPECT_EQ(s.modes(), 2);
  EXPECT_TRUE(s.cov().block(0, 2, 2, 2).isZero(0.0));
  EXPECT_TRUE(s.cov().block(2, 2, 2, 2).isApprox(squeezed_covariance(0.4, 1.0)));
  EXPECT_NEAR(s.mean()(1), -0.25 * std::numbers::sqrt2, 1e-15);
}

TEST(StateFromParams, SqueezePhasePiSwapsQuadratures) {
  const auto a = squeezed_covariance(0.6, 0.0);
  const auto b = squeezed_covariance(0.6, pi);
  EXPECT_NEAR(a(0, 0), b(1, 1), 1e-14);
  EXPECT_NEAR(a(1, 1), b(0, 0), 1e-14);
}

TEST(GaussianState, SymmetrizesOnConstruction) {
  Matrix cov = diag2(0.5, 0.5);
  cov(0, 1) = 1e-13;
  const GaussianState s(Vector::Zero(2), cov);
  EXPECT_EQ(s.cov()(0, 1), s.cov()(1, 0));
}

TEST(GaussianState, RejectsUncertaintyViolation) {
  EXPECT_THROW(GaussianState(Vector::Zero(2), diag2(0.25, 0.5)), invalid_input);
  EXPECT_THROW(GaussianState(Vector::Zero(3), Matrix::Identity(3, 3)), invalid_input);
  EXPECT_THROW(GaussianState(Vector::Zero(2), Matrix::Identity(4, 4)), invalid_input);
}

TEST(GaussianState, ThermalStateIsMixed) {
  const GaussianState s(Vector::Zero(2), diag2(1.0, 1.0));
  EXPECT_FALSE(s.is_pure());
  EXPECT_NEAR(s.purity_determinant(), 4.0, 1e-14);
}

TEST(Energy, Examples) {
  EXPECT_NEAR(energy(vacuum(1)), 0.0, 1e-15);
  EXPECT_NEAR(energy(state_from_params(coherent(1.0))), 1.0, 1e-14);
  EXPECT_NEAR(energy(state_from_params({{0.0, 0.0}, std::asinh(1.0), 0.0})), 1.0, 1e-14);
}

TEST(Energy, MatchesParameterFormula) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const PureStateParams p{std::polar(2.0 * u(rng), 2 * pi * u(rng)), 1.5 * u(rng), 2 * pi * u(rng)};
    EXPECT_NEAR(energy(state_from_params(p)), p.energy(), 1e-12);
  }
}

TEST(Rotate, ParityAndIdentity) {
  const auto c = state_from_params(coherent(1.0));
  const auto r = rotate(c, pi);
  EXPECT_NEAR(r.mean()(0), -std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(r.mean()(1), 0.0, 1e-15);
  const auto s = state_from_params({{0.3, -0.2}, 0.5, 1.1});
  EXPECT_EQ(rotate(s, 0.0), s);
}

TEST(Rotate, QuarterTurnSwapsSqueezedVariances) {
  const auto s = state_from_params({{0.0, 0.0}, 0.8, 0.0});
  const auto r = rotate(s, pi / 2);
  EXPECT_NEAR(r.cov()(0, 0), s.cov()(1, 1), 1e-14);
  EXPECT_NEAR(r.cov()(1, 1), s.cov()(0, 0), 1e-14);
}

TEST(Rotate, ActsAsPhaseOnParameters) {
  // alpha -> alpha e^{i t}, squeeze phase -> phase + 2t.
  const PureStateParams p{{0.4, 0.3}, 0.7, 0.9};
  const double t = 0.37;
  const auto r = rotate(state_from_params(p), t);
  const PureStateParams q{p.displacement * std::polar(1.0, t), p.squeeze_magnitude,
                          p.squeeze_phase + 2 * t};
  const auto expected = state_from_params(q);
  EXPECT_TRUE(r.mean().isApprox(expected.mean(), 1e-14));
  EXPECT_TRUE(r.cov().isApprox(expected.cov(), 1e-14));
}

TEST(Rotate, PreservesEnergy) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto s = state_from_params({std::polar(2.0 * u(rng), 2 * pi * u(rng)), u(rng), 2 * pi * u(rng)});
    EXPECT_NEAR(energy(rotate(s, 2 * pi * u(rng))), energy(s), 1e-12);
  }
}

TEST(CharacteristicFunction, Examples) {
  const auto v = vacuum(1);
  EXPECT_NEAR(std::abs(characteristic_function(v, Vector::Zero(2)) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(characteristic_function(v, Vector::Unit(2, 0) * 2.0) - std::exp(-1.0)), 0.0,
              1e-15);
  const auto c = state_from_params(coherent(1.0));
  EXPECT_NEAR(std::abs(characteristic_function(c, Vector::Unit(2, 1)) - std::exp(-0.25)), 0.0, 1e-15);
  EXPECT_THROW(characteristic_function(v, Vector::Zero(4)), invalid_input);
}

TEST(CharacteristicFunction, PhaseFromMean) {
  const auto c = state_from_params(coherent(1.0));
  const Vector z = Vector::Unit(2, 0);
  const auto value = characteristic_function(c, z);
  EXPECT_NEAR(std::arg(value), std::numbers::sqrt2, 1e-14);
}

TEST(Symplectic, ValidatesForm) {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 2.0;
  EXPECT_THROW(SymplecticMatrix{bad}, invalid_input);
  EXPECT_NO_THROW(SymplecticMatrix::identity(3));
}

TEST(Symplectic, RandomMatricesSatisfyInvariants) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.2);
  for (int modes = 1; modes <= 5; ++modes) {
    std::vector<double> r(static_cast<std::size_t>(modes));
    for (auto& v : r) v = u(rng);
    const auto s = random_symplectic(r, rng);
    const Matrix d = symplectic_form(modes);
    EXPECT_LT((s.matrix().transpose() * d * s.matrix() - d).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(s.matrix().determinant(), 1.0, 1e-9);
    const SymplecticMatrix pd(s.matrix() * s.matrix().transpose());
    EXPECT_LT(pd.reciprocal_pairing_defect(), 1e-9);
  }
}

TEST(Symplectic, ConjugationKeepsUncertainty) {
  std::mt19937_64 rng(12);
  for (int modes = 1; modes <= 4; ++modes) {
    const std::vector<double> r(static_cast<std::size_t>(modes), 0.9);
    const auto s = random_symplectic(r, rng);
    const auto state = s.apply(vacuum(modes));
    EXPECT_GE(state.min_uncertainty_eigenvalue(), -1e-10);
    EXPECT_TRUE(state.is_pure());
  }
}

TEST(Symplectic, PassiveTransformsAreOrthogonal) {
  std::mt19937_64 rng(13);
  for (int modes = 1; modes <= 4; ++modes) {
    EXPECT_TRUE(random_passive(modes, rng).is_orthogonal());
  }
}

TEST(Symplectic, SqueezersHaveReciprocalSpectrum) {
  const std::vector<double> r{0.2, 0.9};
  const auto s = SymplecticMatrix::squeezers(r);
  EXPECT_LT(s.reciprocal_pairing_defect(), 1e-12);
  EXPECT_NEAR(s.matrix()(0, 0) * s.matrix()(1, 1), 1.0, 1e-15);
}

TEST(TensorProduct, ConcatenatesModes) {
  const auto a = state_from_params(coherent(0.5));
  const auto b = state_from_params({{0.0, 0.0}, 0.3, 0.0});
  const auto ab = tensor_product(a, b);
  EXPECT_EQ(ab.modes(), 2);
  EXPECT_NEAR(energy(ab), energy(a) + energy(b), 1e-14);
  EXPECT_NEAR(mode_energy(ab, 1), energy(b), 1e-14);
}
