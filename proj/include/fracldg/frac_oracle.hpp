#pragma once

// Closed-form fractional calculus on compactly supported piecewise
// polynomials. Everything here is exact up to rounding: pieces are split into
// shifted monomials and the Riemann-Liouville rules for powers are applied
// term by term. This is the reference the discrete operators are tested
// against, so it shares no code with them.

#include <vector>

namespace fracldg {

/// Gamma function (Lanczos, g = 7, reflection below 1/2).
double gamma_fn(double x);

enum class Side { left, right };

/// Orders of the fractional Laplacian (alpha) and of the associated Riesz
/// potential (s = 2 - alpha) with their normalizing constants.
struct FracParams {
  double alpha;
  double s;
  double riesz_coefficient_derivative;  // -1 / (2 cos(alpha pi / 2))
  double riesz_coefficient_integral;    //  1 / (2 cos(s pi / 2))

  static FracParams from_alpha(double alpha);
};

namespace poly {

/// Coefficients c_q of p(t) = sum_q c_q (t - (c + delta))^q given p in powers of (t - c).
std::vector<double> taylor_shift(const std::vector<double>& coeffs, double delta);
std::vector<double> multiply(const std::vector<double>& lhs, const std::vector<double>& rhs);
std::vector<double> derivative(const std::vector<double>& coeffs);
/// Horner evaluation of sum_p c_p y^p.
double horner(const std::vector<double>& coeffs, double y);

}  // namespace poly

/// Function that is a polynomial on each [c_i, c_{i+1}] and zero outside
/// [c_0, c_M]. Each piece stores monomial coefficients about its left end.
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  PiecewisePoly(std::vector<double> breakpoints, std::vector<std::vector<double>> pieces);

  /// Polynomial sum_p coeffs[p] (x - lo)^p on [lo, hi], zero elsewhere.
  static PiecewisePoly single(double lo, double hi, std::vector<double> coeffs_about_lo);

  /// Global polynomial given in powers of x, restricted to [lo, hi].
  static PiecewisePoly restrict_global(const std::vector<double>& coeffs, double lo, double hi);

  bool empty() const { return pieces_.empty(); }
  int piece_count() const { return static_cast<int>(pieces_.size()); }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& piece(int i) const { return pieces_[i]; }
  /// Coefficients of piece i about its right end.
  const std::vector<double>& piece_about_right(int i) const { return right_[i]; }
  double support_lo() const { return breaks_.front(); }
  double support_hi() const { return breaks_.back(); }

  /// Right-continuous inside the support (the last piece closes at c_M).
  double operator()(double x) const;

  /// Classical piecewise derivative (jumps contribute nothing).
  PiecewisePoly derivative() const;
  /// Mirror image y -> c_0 + c_M - y, so the support is unchanged.
  PiecewisePoly reflected() const;
  PiecewisePoly scaled(double factor) const;

  friend PiecewisePoly operator+(const PiecewisePoly& lhs, const PiecewisePoly& rhs);
  friend PiecewisePoly operator*(const PiecewisePoly& lhs, const PiecewisePoly& rhs);

 private:
  PiecewisePoly refined(const std::vector<double>& breaks) const;

  std::vector<double> breaks_;
  std::vector<std::vector<double>> pieces_;
  std::vector<std::vector<double>> right_;
};

/// Left-sided Riemann-Liouville operator of general order mu applied to P at x:
/// mu in (0, 1] is the fractional integral I^mu, mu in (-2, 0) the
/// derivative of order -mu (mu = -1 excluded).
double left_fractional(double mu, const PiecewisePoly& P, double x);

/// I^s_L or I^s_R of P at x, s in (0, 1]; the lower (upper) limit is the
/// support edge since P vanishes outside it.
double frac_integral_piecewise(Side side, double s, const PiecewisePoly& P, double x);

/// phi_n = sqrt((2n+1)/2) P_n mapped affinely onto [lo, hi], zero elsewhere.
PiecewisePoly legendre_mode(double lo, double hi, int n);

/// I^s_side of legendre_mode(lo, hi, n) at x, s in (0, 1). When x lies at
/// least (hi - lo) / 8 outside the support, n integrations by parts of the
/// Rodrigues form leave a kernel with positive series coefficients, so the
/// value keeps full relative accuracy even where it is many orders of
/// magnitude below the mode's scale. Elsewhere the monomial route is used.
double legendre_mode_integral(Side side, double s, double lo, double hi, int n, double x);

/// Left or right RL derivative of order alpha in (1, 2).
double rl_derivative_piecewise(Side side, double alpha, const PiecewisePoly& P, double x);

/// -(-Delta)^{alpha/2} P (x) = -(D_L^alpha P + D_R^alpha P) / (2 cos(alpha pi / 2)).
double riesz_frac_laplacian_piecewise(double alpha, const PiecewisePoly& P, double x);

/// (I_L^s P + I_R^s P) / (2 cos(s pi / 2)), s in (0, 1).
double riesz_integral_piecewise(double s, const PiecewisePoly& P, double x);

/// Finite sum of truncated powers c (x - shift)_+^exponent. Closed under
/// left fractional integration, which makes the semigroup law checkable
/// without quadrature.
class PowerSum {
 public:
  struct Term {
    double coef;
    double shift;
    double exponent;
  };

  PowerSum() = default;
  explicit PowerSum(std::vector<Term> terms) : terms_(std::move(terms)) {}

  /// Truncation identity: each piece becomes powers starting at its left end
  /// minus the re-expanded tail starting at its right end.
  static PowerSum from_piecewise(const PiecewisePoly& P);

  double operator()(double x) const;
  /// Left RL integral of order mu > 0, term by term.
  PowerSum integrated(double mu) const;
  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
};

}  // namespace fracldg
