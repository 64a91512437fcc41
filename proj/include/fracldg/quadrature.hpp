#pragma once

#include <vector>

namespace fracldg {

/// Gauss rule on the reference interval [-1, 1] for the weight
/// (1 - x)^a (1 + x)^b. The Legendre case is a = b = 0.
struct QuadratureRule {
  enum class Kind { legendre, jacobi };

  std::vector<double> nodes;    // strictly increasing, inside (-1, 1)
  std::vector<double> weights;  // positive
  Kind kind = Kind::legendre;
  double a = 0.0;
  double b = 0.0;
  int exact_degree = 1;  // 2n - 1

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule (Newton iteration on the three-term recurrence).
QuadratureRule gauss_legendre(int n);

/// n-point Gauss-Jacobi rule for the weight (1 - x)^a (1 + x)^b (Golub-Welsch).
QuadratureRule gauss_jacobi(int n, double a, double b);

/// Values and first derivatives of the orthonormal Legendre functions
/// phi_n = sqrt((2n+1)/2) P_n, n = 0..order, at a point of [-1, 1].
struct LegendreValues {
  std::vector<double> values;
  std::vector<double> derivatives;
};

LegendreValues legendre_eval(int order, double x);

/// Orthonormal modal basis on the reference element.
class LegendreBasis {
 public:
  explicit LegendreBasis(int order);

  int order() const { return order_; }
  int size() const { return order_ + 1; }

  /// phi_n(+1) = sqrt((2n+1)/2); phi_n(-1) = (-1)^n phi_n(+1).
  double right_value(int n) const { return right_[n]; }
  double left_value(int n) const { return left_[n]; }

  /// stiffness(n, m) = integral over [-1,1] of phi_n * phi_m'.
  double stiffness(int n, int m) const { return stiffness_[n * size() + m]; }

  /// Sum_n c_n phi_n(x).
  double evaluate(const double* coeffs, double x) const;

 private:
  int order_;
  std::vector<double> right_;
  std::vector<double> left_;
  std::vector<double> stiffness_;
};

}  // namespace fracldg
