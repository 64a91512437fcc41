#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracldg/problems.hpp"
#include "fracldg/riesz_operator.hpp"

namespace fracldg {

/// Outcome of one property check: passed iff measured <= tolerance, except
/// for order checks where the bound is a floor (see `floor`).
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  bool floor = false;  // measured >= tolerance is required
  std::string detail;
};

std::string format_check(const CheckResult& r);

/// max |right - left^T| / max |left|.
CheckResult check_adjoint(const Eigen::MatrixXd& left, const Eigen::MatrixXd& right,
                          const std::string& name);

/// Worst of min_v (v^T G v) / (|G|_2 |v|^2) over `samples` random vectors and
/// the smallest eigenvalue of the symmetric part relative to |G|_2; the
/// floor is -1e-10.
CheckResult check_positivity(const RieszOperator& op, std::uint64_t seed, int samples = 200);

/// Block-Toeplitz assembly against full assembly on a uniform mesh.
CheckResult check_toeplitz(int elements, int order, double s);

/// Left operator on a reflected random non-uniform mesh, conjugated by the
/// element reversal and the (-1)^n mode parity, against the right operator.
CheckResult check_reflection(int elements, int order, double s, std::uint64_t seed);

/// I^{s1} I^{s2} P = I^{s1 + s2} P through PowerSum against the piecewise
/// route, 20 random points per pair, s1, s2 in {0.2, 0.3, 0.5}, s1 + s2 < 1.
CheckResult check_semigroup(std::uint64_t seed);

/// Pointwise I^s of every basis function at every outer quadrature node,
/// block path against the oracle, worst relative deviation.
CheckResult check_oracle_exactness(int elements, int order, double s);

/// Riesz Laplacian of x^6 (1 - x)^6 at x = 1/2, alpha = 1.5, against the
/// value of the hypersingular integral computed to 20 digits.
CheckResult check_bruteforce_spot();
inline constexpr double kBruteForceSpotValue = -0.0038901242563085975;

/// |u_t + f(u)_x + eps (-Delta)^{alpha/2} u - g| at 30 random (x, t); the
/// fractional Laplacian is taken as -I_Riesz^{2-alpha} u0'', a route the
/// source term does not use.
CheckResult check_pde_residual(ExampleId id, double alpha, std::uint64_t seed);

/// LSERK on u' = -u, T = 1, dt in {0.2, 0.1, 0.05, 0.025}: minimum observed order.
CheckResult check_temporal_order();

/// Example 3 (g = 0): worst per-step relative growth of the L2 norm, which
/// must stay <= 1e-8; fails outright on instability.
CheckResult check_stability(double alpha, int elements = 80, int order = 2, double final_time = 1.0);

/// Dense against FFT application on random fields.
CheckResult check_fast_apply(int elements, int order, double s, int fields, std::uint64_t seed);

/// |I_Riesz^s (u - Pi_k u)|_{L2(0,1)} for u = x^6 (1 - x)^6, evaluated with
/// the oracle at Gauss points.
double operator_projection_error(int elements, int order, double s);
/// Minimum observed order of operator_projection_error over K in {10, 20, 40};
/// the floor is order + 0.8.
CheckResult check_operator_order(int order, double s = 0.5);

/// Runs a fast subset of every property suite. Prints one line per check.
std::vector<CheckResult> run_selftest(std::uint64_t seed, std::ostream& out);

}  // namespace fracldg
