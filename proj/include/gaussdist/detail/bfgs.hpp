#pragma once

// Dense BFGS with Armijo backtracking, for the small smooth problems in this
// library (a handful of variables).

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace gaussdist::detail {

struct BfgsOptions {
  double gradient_tolerance = 1e-10;
  int max_iterations = 5000;
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = std::numeric_limits<double>::infinity();
  double gradient_norm = std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::string status;
};

// fn(x, grad) returns f(x) and writes the gradient into grad.
template <class Objective>
BfgsResult bfgs(Objective&& fn, Eigen::VectorXd x, const BfgsOptions& opts = {}) {
  const auto n = x.size();
  Eigen::VectorXd g(n), g_new(n), x_new(n);
  double f = fn(x, g);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);

  BfgsResult out;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (!std::isfinite(f) || !g.allFinite()) {
      out.status = "non-finite objective";
      break;
    }
    if (g.norm() < opts.gradient_tolerance) {
      out.status = "gradient tolerance reached";
      break;
    }
    Eigen::VectorXd p = -h * g;
    if (p.dot(g) >= 0.0) {
      h.setIdentity();
      p = -g;
    }

    constexpr double c1 = 1e-4;
    double step = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, step *= 0.5) {
      x_new = x + step * p;
      f_new = fn(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + c1 * step * p.dot(g)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Near the optimum f stops resolving descent; fall back to accepting the
      // full quasi-Newton step if it shrinks the gradient.
      x_new = x + p;
      f_new = fn(x_new, g_new);
      if (!(std::isfinite(f_new) && g_new.norm() < g.norm())) {
        out.status = "line search failed";
        break;
      }
      step = 1.0;
    }

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
      h = (id - rho * s * y.transpose()) * h * (id - rho * y * s.transpose()) +
          rho * s * s.transpose();
    }
    x = x_new;
    f = f_new;
    g = g_new;
  }
  if (out.status.empty()) out.status = "iteration limit";
  out.x = std::move(x);
  out.value = f;
  out.gradient_norm = g.norm();
  out.iterations = it;
  return out;
}

}  // namespace gaussdist::detail
