#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracldg/errors.hpp"
#include "fracldg/quadrature.hpp"

using namespace fracldg;

namespace {

double apply_rule(const QuadratureRule& r, auto f) {
  double sum = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) sum += r.weights[q] * f(r.nodes[q]);
  return sum;
}

double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// int (1 - x)^a (1 + x)^b x^m dx over [-1, 1] through x = 2t - 1 and the Beta function.
double jacobi_moment(double a, double b, int m, double* scale) {
  double sum = 0.0, abs_sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    const double term = binom * std::pow(2.0, j) * ((m - j) % 2 == 0 ? 1.0 : -1.0) *
                        beta_fn(b + j + 1.0, a + 1.0);
    sum += term;
    abs_sum += std::abs(term);
    binom = binom * (m - j) / (j + 1.0);
  }
  const double factor = std::pow(2.0, a + b + 1.0);
  *scale = factor * abs_sum;
  return factor * sum;
}

}  // namespace

TEST(GaussLegendre, OnePointIsMidpointRule) {
  const QuadratureRule r = gauss_legendre(1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r.nodes[0], 0.0, 1e-15);
  EXPECT_NEAR(r.weights[0], 2.0, 1e-15);
}

TEST(GaussLegendre, TwoPointNodesAreRootsOfP2) {
  const QuadratureRule r = gauss_legendre(2);
  EXPECT_NEAR(r.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
  EXPECT_NEAR(r.weights[1], 1.0, 1e-15);
}

TEST(GaussLegendre, ThreePointRuleIntegratesQuartic) {
  EXPECT_NEAR(apply_rule(gauss_legendre(3), [](double x) { return std::pow(x, 4); }), 0.4, 1e-15);
}

TEST(GaussLegendre, ZeroPointsRejected) { EXPECT_THROW(gauss_legendre(0), InvalidArgument); }

TEST(GaussLegendre, ExactForAllMonomialsUpToExactDegree) {
  for (int n = 1; n <= 40; ++n) {
    const QuadratureRule r = gauss_legendre(n);
    ASSERT_EQ(r.exact_degree, 2 * n - 1);
    for (int m = 0; m <= r.exact_degree; ++m) {
      const double exact = (m % 2 == 1) ? 0.0 : 2.0 / (m + 1.0);
      const double got = apply_rule(r, [m](double x) { return std::pow(x, m); });
      EXPECT_NEAR(got, exact, 1e-12 * std::max(1.0, std::abs(exact))) << "n=" << n << " m=" << m;
    }
  }
}

TEST(GaussJacobi, UnitWeightMatchesLegendre) {
  for (int n = 1; n <= 20; ++n) {
    const QuadratureRule j = gauss_jacobi(n, 0.0, 0.0);
    const QuadratureRule l = gauss_legendre(n);
    for (int q = 0; q < n; ++q) {
      EXPECT_NEAR(j.nodes[q], l.nodes[q], 1e-13);
      EXPECT_NEAR(j.weights[q], l.weights[q], 1e-13);
    }
  }
}

TEST(GaussJacobi, OnePointWeightSum) {
  const QuadratureRule r = gauss_jacobi(1, -0.5, 0.0);
  EXPECT_NEAR(apply_rule(r, [](double) { return 1.0; }), 2.0 * std::numbers::sqrt2, 1e-13);
}

TEST(GaussJacobi, OnePointLinearMoment) {
  const QuadratureRule r = gauss_jacobi(1, -0.5, 0.0);
  EXPECT_NEAR(apply_rule(r, [](double x) { return 1.0 + x; }), 8.0 / 3.0 * std::numbers::sqrt2,
              1e-13);
}

TEST(GaussJacobi, ExactForAllMonomialsUpToExactDegree) {
  const double exps[] = {-0.8, -0.5, -0.2, 0.0, 0.3, 0.5, 1.0, 2.0, 3.0};
  for (double a : exps) {
    for (double b : exps) {
      for (int n = 1; n <= 8; ++n) {
        const QuadratureRule r = gauss_jacobi(n, a, b);
        ASSERT_EQ(r.exact_degree, 2 * n - 1);
        for (int m = 0; m <= r.exact_degree; ++m) {
          double scale = 0.0;
          const double exact = jacobi_moment(a, b, m, &scale);
          const double got = apply_rule(r, [m](double x) { return std::pow(x, m); });
          EXPECT_NEAR(got, exact, 1e-12 * scale) << "a=" << a << " b=" << b << " n=" << n;
        }
      }
    }
  }
}

TEST(GaussJacobi, NonIntegrableWeightRejected) {
  EXPECT_THROW(gauss_jacobi(3, -1.0, 0.0), InvalidArgument);
  EXPECT_THROW(gauss_jacobi(3, 0.0, -1.5), InvalidArgument);
  EXPECT_THROW(gauss_jacobi(0, 0.0, 0.0), InvalidArgument);
}

TEST(GaussJacobi, NodesIncreasingWeightsPositive) {
  const QuadratureRule r = gauss_jacobi(12, -0.7, 0.4);
  for (std::size_t q = 0; q < r.size(); ++q) {
    EXPECT_GT(r.weights[q], 0.0);
    EXPECT_GT(r.nodes[q], -1.0);
    EXPECT_LT(r.nodes[q], 1.0);
    if (q > 0) {
      EXPECT_LT(r.nodes[q - 1], r.nodes[q]);
    }
  }
}

TEST(LegendreEval, ConstantMode) {
  for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    EXPECT_NEAR(legendre_eval(0, x).values[0], 1.0 / std::numbers::sqrt2, 1e-15);
  }
}

TEST(LegendreEval, SecondModeAtHalf) {
  EXPECT_NEAR(legendre_eval(2, 0.5).values[2], -0.125 * std::sqrt(2.5), 1e-15);
}

TEST(LegendreEval, EndpointValues) {
  const LegendreValues v = legendre_eval(10, 1.0);
  const LegendreValues w = legendre_eval(10, -1.0);
  for (int n = 0; n <= 10; ++n) {
    EXPECT_NEAR(v.values[n], std::sqrt((2.0 * n + 1.0) / 2.0), 1e-13);
    EXPECT_NEAR(w.values[n], (n % 2 ? -1.0 : 1.0) * std::sqrt((2.0 * n + 1.0) / 2.0), 1e-13);
  }
}

TEST(LegendreEval, DerivativesMatchFiniteDifferences) {
  const double h = 1e-6;
  for (double x : {-0.9, -0.2, 0.35, 0.8}) {
    const LegendreValues v = legendre_eval(6, x);
    const LegendreValues up = legendre_eval(6, x + h);
    const LegendreValues dn = legendre_eval(6, x - h);
    for (int n = 0; n <= 6; ++n) {
      EXPECT_NEAR(v.derivatives[n], (up.values[n] - dn.values[n]) / (2 * h), 1e-7);
    }
  }
}

TEST(LegendreEval, OutsideReferenceElementRejected) {
  EXPECT_THROW(legendre_eval(3, 1.001), InvalidArgument);
  EXPECT_NO_THROW(legendre_eval(3, 1.0 + 1e-14));
}

TEST(LegendreBasis, GramMatrixIsIdentity) {
  for (int k = 0; k <= 10; ++k) {
    const QuadratureRule r = gauss_legendre(k + 1);
    for (int m = 0; m <= k; ++m) {
      for (int n = 0; n <= k; ++n) {
        double g = 0.0;
        for (std::size_t q = 0; q < r.size(); ++q) {
          const LegendreValues v = legendre_eval(k, r.nodes[q]);
          g += r.weights[q] * v.values[m] * v.values[n];
        }
        EXPECT_NEAR(g, m == n ? 1.0 : 0.0, 1e-13);
      }
    }
  }
}

TEST(LegendreBasis, StiffnessAndEndpoints) {
  const int k = 5;
  const LegendreBasis basis(k);
  const QuadratureRule r = gauss_legendre(k + 2);
  for (int n = 0; n <= k; ++n) {
    EXPECT_NEAR(basis.right_value(n), std::sqrt((2.0 * n + 1.0) / 2.0), 1e-14);
    EXPECT_NEAR(basis.left_value(n), (n % 2 ? -1.0 : 1.0) * basis.right_value(n), 1e-14);
    for (int m = 0; m <= k; ++m) {
      double s = 0.0;
      for (std::size_t q = 0; q < r.size(); ++q) {
        const LegendreValues v = legendre_eval(k, r.nodes[q]);
        s += r.weights[q] * v.values[n] * v.derivatives[m];
      }
      EXPECT_NEAR(basis.stiffness(n, m), s, 1e-13);
    }
  }
}
