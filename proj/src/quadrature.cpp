#include "fracldg/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracldg/errors.hpp"

namespace fracldg {

namespace {

// P_n(x) and P_n'(x) for the standard (unnormalized) Legendre polynomial.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1), valid strictly inside (-1, 1).
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1) {
    throw InvalidArgument("gauss_legendre: need n >= 1, got " + std::to_string(n));
  }
  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::legendre;
  rule.exact_degree = 2 * n - 1;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton to 1e-15.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    const auto [p, dp] = legendre_with_derivative(n, x);
    (void)p;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) {
    throw InvalidArgument("gauss_jacobi: need n >= 1, got " + std::to_string(n));
  }
  if (!(a > -1.0) || !(b > -1.0)) {
    throw InvalidArgument("gauss_jacobi: weight exponents must exceed -1");
  }
  // Recurrence coefficients of the monic Jacobi polynomials.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  const double ab = a + b;
  diag(0) = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    diag(k) = (b * b - a * a) / (t * (t + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double t = 2.0 * k + ab;
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0));
    }
    off(k - 1) = std::sqrt(beta);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));

  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::jacobi;
  rule.a = a;
  rule.b = b;
  rule.exact_degree = 2 * n - 1;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

LegendreValues legendre_eval(int order, double x) {
  if (order < 0) throw InvalidArgument("legendre_eval: negative order");
  if (std::abs(x) > 1.0 + 1e-12) {
    throw InvalidArgument("legendre_eval: x outside [-1, 1]");
  }
  LegendreValues out;
  out.values.resize(order + 1);
  out.derivatives.resize(order + 1);
  double p0 = 1.0, d0 = 0.0;
  double p1 = x, d1 = 1.0;
  for (int n = 0; n <= order; ++n) {
    double p, d;
    if (n == 0) {
      p = p0;
      d = d0;
    } else if (n == 1) {
      p = p1;
      d = d1;
    } else {
      const int k = n - 1;
      p = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
      d = d0 + (2 * k + 1) * p1;
      p0 = p1;
      d0 = d1;
      p1 = p;
      d1 = d;
    }
    const double scale = std::sqrt((2.0 * n + 1.0) / 2.0);
    out.values[n] = scale * p;
    out.derivatives[n] = scale * d;
  }
  return out;
}

LegendreBasis::LegendreBasis(int order) : order_(order) {
  if (order < 0) throw InvalidArgument("LegendreBasis: negative order");
  const int m = order + 1;
  right_.resize(m);
  left_.resize(m);
  for (int n = 0; n < m; ++n) {
    right_[n] = std::sqrt((2.0 * n + 1.0) / 2.0);
    left_[n] = (n % 2 == 0) ? right_[n] : -right_[n];
  }
  stiffness_.assign(m * m, 0.0);
  const QuadratureRule rule = gauss_legendre(m);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const LegendreValues lv = legendre_eval(order, rule.nodes[q]);
    for (int n = 0; n < m; ++n) {
      for (int k = 0; k < m; ++k) {
        stiffness_[n * m + k] += rule.weights[q] * lv.values[n] * lv.derivatives[k];
      }
    }
  }
}

double LegendreBasis::evaluate(const double* coeffs, double x) const {
  const LegendreValues lv = legendre_eval(order_, x);
  double sum = 0.0;
  for (int n = 0; n <= order_; ++n) sum += coeffs[n] * lv.values[n];
  return sum;
}

}  // namespace fracldg
