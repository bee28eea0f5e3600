#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "gaussdist/optimum.hpp"

using namespace gaussdist;

namespace {

constexpr double pi = std::numbers::pi;

double closed(double e) { return std::exp(-4 * e * e - 4 * e); }

}  // namespace

TEST(OptimalPair, HalfPhoton) {
  const auto p = optimal_pair(0.5);
  EXPECT_EQ(p.d_c, 2.0);
  EXPECT_NEAR(p.r, std::sqrt(0.375), 1e-15);
  EXPECT_NEAR(p.fidelity / std::exp(-3.0), 1.0, 1e-14);
  EXPECT_NEAR(p.p_err, 0.012605670008324764206, 1e-16);
}

TEST(OptimalPair, OnePhoton) {
  const auto p = optimal_pair(1.0);
  EXPECT_EQ(p.d_c, 3.0);
  EXPECT_NEAR(p.r, std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(p.fidelity / std::exp(-8.0), 1.0, 1e-14);
}

TEST(OptimalPair, Invariants) {
  for (double e : {1e-6, 0.1, 0.5, 1.0, 2.0, 5.0, 12.0}) {
    const auto p = optimal_pair(e);
    EXPECT_EQ(p.d_c, 2 * e + 1);
    EXPECT_NEAR(p.r, std::sqrt((e * e + e) / (2 * e + 1)), 1e-12);
    EXPECT_NEAR(energy(p.gaussian1()), e, 1e-10);
    EXPECT_NEAR(energy(p.gaussian2()), e, 1e-10);
    EXPECT_NEAR(pure_fidelity(p.gaussian1(), p.gaussian2()) / closed(e), 1.0, 1e-10);
    EXPECT_NEAR(p.fidelity / closed(e), 1.0, 1e-10);
  }
}

TEST(OptimalPair, SmallEnergyLimitAndRejection) {
  EXPECT_GT(optimal_pair(1e-9).fidelity, 1.0 - 1e-8);
  EXPECT_THROW(optimal_pair(0.0), invalid_input);
  EXPECT_THROW(optimal_pair(-1.0), invalid_input);
  EXPECT_THROW(optimal_pair(std::nan("")), invalid_input);
}

TEST(OptimalPair, SqueezeToDisplacementRatioApproachesFour) {
  const double e = 1e3;
  const double r = optimal_displacement(e);
  EXPECT_NEAR(optimal_squeeze_parameter(e) / (r * r), 4.0, 0.04);
}

TEST(EqualD, Examples) {
  for (double e : {0.1, 0.5, 2.0}) {
    EXPECT_NEAR(equal_d_fidelity(1.0, e), std::exp(-4 * e), 1e-15);
    EXPECT_NEAR(equal_d_fidelity(2 * e + 1, e) / closed(e), 1.0, 1e-13);
  }
  EXPECT_NEAR(equal_d_fidelity(1.0, 0.0), 1.0, 1e-15);
  EXPECT_THROW(equal_d_fidelity(0.5, 1.0), invalid_input);
  EXPECT_THROW(equal_d_fidelity(max_squeeze_parameter(1.0) + 0.1, 1.0), invalid_input);
}

TEST(EqualD, LogConvexWithMinimumAtOptimum) {
  for (double e : {0.2, 1.0, 3.0}) {
    const double upper = max_squeeze_parameter(e);
    const double h = 1e-3;
    for (double d = 1.0 + 2 * h; d + h < upper; d += 0.05) {
      const double second = std::log(equal_d_fidelity(d + h, e)) - 2 * std::log(equal_d_fidelity(d, e)) +
                            std::log(equal_d_fidelity(d - h, e));
      EXPECT_NEAR(second / (h * h), 2.0, 1e-5);
      EXPECT_GE(equal_d_fidelity(d, e), closed(e) * (1 - 1e-14));
    }
  }
}

TEST(Quartic, VanishesOnTheDiagonalCriticalPoint) {
  EXPECT_EQ(quartic_g(2.0, 2.0, 0.5), 0.0);
  for (double e : {0.1, 1.0, 5.0}) {
    const double d = 2 * e + 1;
    EXPECT_NEAR(quartic_g(d, d, e), 0.0, 1e-12 * quartic_g_scale(d, d, e));
  }
  EXPECT_EQ(quartic_g(1.0, 1.0, 0.0), 0.0);
}

TEST(Quartic, ZeroSetIsStationarySetOfRelaxedObjective) {
  // At d1 = d2 = 2E + 1 the gradient vanishes.
  for (double e : {0.1, 0.5, 2.0}) {
    const double d = 2 * e + 1;
    EXPECT_LT(constrained_log_fidelity_gradient(d, d, e).norm(), 1e-12);
  }
}

TEST(Quartic, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double e = 0.1 + 4.9 * u(rng);
    const double d1 = 0.2 + 6 * u(rng), d2 = 0.2 + 6 * u(rng);
    const auto g = constrained_log_fidelity_gradient(d1, d2, e);
    const double h1 = 1e-5 * d1, h2 = 1e-5 * d2;
    const double fd1 = (constrained_log_fidelity(d1 + h1, d2, e) - constrained_log_fidelity(d1 - h1, d2, e)) / (2 * h1);
    const double fd2 = (constrained_log_fidelity(d1, d2 + h2, e) - constrained_log_fidelity(d1, d2 - h2, e)) / (2 * h2);
    EXPECT_NEAR(fd1, g(0), 1e-6 * std::max(1.0, std::abs(g(0))));
    EXPECT_NEAR(fd2, g(1), 1e-6 * std::max(1.0, std::abs(g(1))));
  }
}

TEST(Polar, DiagonalGivesEqualRadii) {
  const auto p = polar_curves(0.5, pi / 4);
  ASSERT_TRUE(p.r1.has_value() && p.r2.has_value());
  EXPECT_NEAR(*p.r1, 2 * std::numbers::sqrt2, 1e-13);
  EXPECT_NEAR(*p.r2, 2 * std::numbers::sqrt2, 1e-13);
  EXPECT_NEAR(*p.r1 * std::cos(pi / 4), 2.0, 1e-13);
  for (double e : {0.01, 0.3, 7.0}) {
    const auto q = polar_curves(e, pi / 4);
    EXPECT_NEAR(*q.r1, *q.r2, 1e-12 * *q.r1);
    EXPECT_NEAR(*q.r1, (4 * e + 2) / std::numbers::sqrt2, 1e-12 * *q.r1);
  }
}

TEST(Polar, CurvesReconstructQuarticRoots) {
  for (double e : {0.1, 0.5, 2.0}) {
    for (double t = 0.01; t < pi / 2; t += 0.01) {
      const auto p = polar_curves(e, t);
      EXPECT_EQ(p.r1.has_value(), t <= pi / 2 - polar_fold_angle(e)) << t;
      EXPECT_EQ(p.r2.has_value(), t >= polar_fold_angle(e)) << t;
      if (p.r1) {
        const double a = *p.r1 * std::cos(t), b = *p.r1 * std::sin(t);
        EXPECT_LT(std::abs(quartic_g(a, b, e)), 1e-8 * std::max(1.0, quartic_g_scale(a, b, e)));
      }
      if (p.r2) {
        const double c = *p.r2 * std::cos(t), d = *p.r2 * std::sin(t);
        EXPECT_LT(std::abs(quartic_g(d, c, e)), 1e-8 * std::max(1.0, quartic_g_scale(d, c, e)));
      }
    }
  }
}

TEST(Polar, CurvesAreMirrorImages) {
  for (double e : {0.1, 0.5, 3.0}) {
    for (double t = 0.02; t < pi / 2; t += 0.02) {
      const auto a = polar_curves(e, t);
      const auto b = polar_curves(e, pi / 2 - t);
      ASSERT_EQ(a.r2.has_value(), b.r1.has_value());
      if (a.r2) EXPECT_NEAR(*a.r2, *b.r1, 1e-12 * *a.r2);
    }
  }
}

TEST(Polar, LargeEnergyLimitOfFirstCurve) {
  const double e = 1e7;
  for (double t : {0.2, 0.5, 0.9, 1.3}) {
    const double s2 = std::sin(2 * t);
    const double limit = 8 * e * std::sin(t) * s2 / (s2 + s2 * s2);
    EXPECT_NEAR(*polar_curves(e, t).r1 / limit, 1.0, 1e-6);
  }
}

TEST(Polar, UndefinedRadiiAreReportedNotThrown) {
  const auto p = polar_curves(0.5, 0.001);
  EXPECT_FALSE(p.r2.has_value());
  EXPECT_TRUE(p.r1.has_value());
  const auto q = polar_curves(0.5, pi / 2 - 0.001);
  EXPECT_FALSE(q.r1.has_value());
  EXPECT_TRUE(q.r2.has_value());
  EXPECT_THROW(polar_curves(0.5, 0.0), invalid_input);
  EXPECT_THROW(polar_curves(0.5, pi / 2), invalid_input);
}

TEST(Intersections, HalfPhotonHasTwo) {
  const auto rep = find_intersections(0.5);
  ASSERT_EQ(rep.intersections.size(), 2u);
  const auto& diag = rep.intersections.back();
  EXPECT_NEAR(diag.theta, pi / 4, 1e-15);
  EXPECT_LT(diag.residual, 1e-10);
  EXPECT_EQ(diag.kind, CriticalKind::minimum);
  EXPECT_TRUE(diag.feasible);
  // Off-diagonal root from an independent high-precision solve of the
  // two-quartic system.
  const auto& off = rep.intersections.front();
  EXPECT_NEAR(off.theta, 0.033358074205112629773, 1e-10);
  EXPECT_NEAR(off.radius, 3.8729833462074168852, 1e-9);
  EXPECT_NEAR(off.d1, 3.87082869338697069, 1e-9);
  EXPECT_NEAR(off.d2, 0.129171306613029307, 1e-9);
  EXPECT_LT(off.residual, 1e-10);
}

TEST(Intersections, OffDiagonalRootIsInfeasibleSaddle) {
  // The off-diagonal root satisfies d1 + d2 = 4E + 2, d1 d2 = 1/2 and lies
  // outside the energy budget by E + 1/2.
  for (double e : {0.1, 0.5, 1.0, 5.0}) {
    const auto rep = find_intersections(e);
    ASSERT_EQ(rep.intersections.size(), 2u) << "E=" << e;
    const auto& off = rep.intersections.front();
    EXPECT_GT(std::abs(off.theta - pi / 4), 1e-3);
    EXPECT_NEAR(off.d1 + off.d2, 4 * e + 2, 1e-9 * (4 * e + 2));
    EXPECT_NEAR(off.d1 * off.d2, 0.5, 1e-8);
    EXPECT_NEAR(2 * e - squeeze_energy(off.d1, off.d2), -(e + 0.5), 1e-7 * (e + 1));
    EXPECT_FALSE(off.feasible);
    EXPECT_EQ(off.kind, CriticalKind::saddle);
  }
}

TEST(Intersections, ResidualsAndQuarticsSmall) {
  for (double e : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    for (const auto& x : find_intersections(e).intersections) {
      EXPECT_LT(x.residual, 1e-9);
      EXPECT_LT(x.quartic_residual_12, 1e-6 * x.quartic_scale);
      EXPECT_LT(x.quartic_residual_21, 1e-6 * x.quartic_scale);
    }
  }
}

TEST(Intersections, InsensitiveToGridSize) {
  const auto a = find_intersections(1.0, 64);
  const auto b = find_intersections(1.0, 8192);
  ASSERT_EQ(a.intersections.size(), b.intersections.size());
  for (std::size_t i = 0; i < a.intersections.size(); ++i) {
    EXPECT_NEAR(a.intersections[i].theta, b.intersections[i].theta, 1e-11);
  }
  EXPECT_THROW(find_intersections(1.0, 63), invalid_input);
}

TEST(Hessian, MatchesClosedForm) {
  EXPECT_NEAR(hessian_determinant_closed_form(0.5), std::exp(-6.0) * 7.0 / 8.0, 1e-18);
  EXPECT_NEAR(hessian_determinant_closed_form(1.0) / (std::exp(-16.0) * 17.0 / 18.0), 1.0, 1e-14);
  for (double e : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double h = hessian_check(e);
    EXPECT_GT(h, 0.0);
    EXPECT_NEAR(h / hessian_determinant_closed_form(e), 1.0, 1e-5) << "E=" << e;
  }
}

TEST(NumericMinimize, ReproducesClosedForm) {
  for (double e : {0.1, 0.5, 1.0}) {
    const auto r = numeric_minimize(e, 0);
    EXPECT_NEAR(r.fidelity / closed(e), 1.0, 1e-6);
    EXPECT_LT(r.gradient_norm, 1e-8);
    EXPECT_NEAR(r.state1.energy(), e, 1e-12);
    EXPECT_NEAR(r.state2.energy(), e, 1e-12);
    // Squeeze axes aligned with the displacement (critical angles (0, 0) up
    // to a common rotation).
    EXPECT_NEAR(r.relative_squeeze_angles[0], 0.0, 1e-4);
    EXPECT_NEAR(r.relative_squeeze_angles[1], 0.0, 1e-4);
  }
}

TEST(NumericMinimize, CoherentFamily) {
  MinimizeConfig config;
  config.family = PairFamily::coherent;
  const auto r = numeric_minimize(0.5, 0, config);
  EXPECT_NEAR(r.fidelity / std::exp(-2.0), 1.0, 1e-10);
  EXPECT_LT(r.state1.squeeze_magnitude, 1e-15);
}

TEST(NumericMinimize, IndependentOfThreadCount) {
  MinimizeConfig one;
  MinimizeConfig four;
  four.threads = 4;
  const auto a = numeric_minimize(0.7, 42, one);
  const auto b = numeric_minimize(0.7, 42, four);
  EXPECT_EQ(a.fidelity, b.fidelity);
  EXPECT_EQ(a.best_start, b.best_start);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(NumericMinimize, ReportsConvergenceFailureWithTrace) {
  MinimizeConfig config;
  config.starts = 3;
  config.accept_gradient = 0.0;  // unreachable
  try {
    numeric_minimize(0.5, 0, config);
    FAIL();
  } catch (const convergence_error& e) {
    EXPECT_EQ(e.trace().size(), 3u);
  }
  EXPECT_THROW(numeric_minimize(0.0, 0), invalid_input);
}

TEST(NumericMinimize, ObjectiveGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (double e : {0.3, 2.0}) {
    const IsoenergeticPairObjective f(e);
    for (int i = 0; i < 50; ++i) {
      Eigen::VectorXd x(6), g, scratch;
      for (int k = 0; k < 6; ++k) x(k) = u(rng);
      f(x, g);
      for (int k = 0; k < 6; ++k) {
        Eigen::VectorXd xp = x, xm = x;
        xp(k) += 1e-5;
        xm(k) -= 1e-5;
        const double fd = (f(xp, scratch) - f(xm, scratch)) / 2e-5;
        EXPECT_NEAR(fd, g(k), 1e-6 * std::max(1.0, std::abs(g(k))));
      }
    }
  }
}

TEST(CenteredMinimum, Examples) {
  for (double e : {0.5, 1.0, 5.0}) {
    const auto c = centered_minimum(e);
    EXPECT_NEAR(c.w1, -std::asinh(std::sqrt(e)), 1e-6);
    EXPECT_NEAR(c.fidelity, 1.0 / (2 * e + 1), 1e-8);
    EXPECT_GE(c.fidelity, closed(e));
  }
}

TEST(SuboptimalFamilies, NeverBeatTheOptimum) {
  for (double e : {0.05, 0.3, 1.0, 4.0}) {
    const double opt = closed(e);
    const double upper = max_squeeze_parameter(e);
    for (int k = 0; k <= 100; ++k) {
      const double x = 1.0 + (upper - 1.0) * k / 100.0;
      EXPECT_GE(equal_d_fidelity(x, e), opt * (1 - 1e-14));
      EXPECT_GE(opposite_phase_squeeze_fidelity(x, e), opt * (1 - 1e-14));
    }
    EXPECT_LT(-std::log(std::exp(-4 * e)), -std::log(opt));
    EXPECT_LT(std::log(2 * e + 1), -std::log(opt));
  }
}
