#pragma once

#include <Eigen/Core>

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "fracldg/field.hpp"
#include "fracldg/frac_oracle.hpp"
#include "fracldg/mesh.hpp"
#include "fracldg/quadrature.hpp"

namespace fracldg {

/// One-sided RL integrals of order s of single DG basis functions, and the
/// weak-form blocks built from them.
///
/// The kernel (x - t)^{s-1} is never sampled at x = t. Inside the source
/// element, and on the element adjacent to it, the integral is split at the
/// singular point and evaluated with Gauss-Jacobi rules whose weight absorbs
/// the kernel, so the remaining integrand is a polynomial. Far from the source
/// the kernel is smooth and Gauss-Legendre is used with a point count chosen
/// from the distance to the singularity.
class BasisIntegrals {
 public:
  BasisIntegrals(MeshPtr mesh, int order, double s);

  const Mesh1D& mesh() const { return *mesh_; }
  int order() const { return order_; }
  double s() const { return s_; }

  /// I^s_side[phi_{source, n}](x) for n = 0..order.
  Eigen::VectorXd pointwise(Side side, int source, double x) const;

  /// Weak-form block: out(m, n) = int_{I_target} phi_{target,m} I^s_side[phi_{source,n}] dx.
  Eigen::MatrixXd block(Side side, int target, int source) const;

  /// Samples of I^s_side[phi_{source, n}] at every outer node the block uses,
  /// computed along the same path as block(). values(q, n).
  struct OuterSamples {
    std::vector<double> x;
    Eigen::MatrixXd values;
  };
  OuterSamples outer_samples(Side side, int target, int source) const;

 private:
  // Unrestricted orthonormal Legendre values (the argument may leave [-1, 1]).
  void basis_at(double xi, double* out) const;
  // (1/Gamma(s)) int over [from, x] (left) or [x, to] (right) of the extended
  // source polynomial against the kernel, for all modes.
  Eigen::VectorXd partial(Side side, int source, double x, double edge) const;
  Eigen::VectorXd far(Side side, int source, double x) const;
  const QuadratureRule& legendre_rule(int n) const;
  // Gauss-Jacobi rule with weight (1 - xi^2)^mode, built on first use.
  const QuadratureRule& rodrigues_rule(int mode, int points) const;
  int smooth_points(double distance, double half_width) const;
  // Target-element rule in reference coordinates; weights include the
  // panel-to-element scaling, jacobi is the singular weight to divide out.
  struct PanelRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> jacobi;
  };
  // u is the distance from the target's end nearest the source.
  double reference_coordinate(Side side, int target, double u) const;
  // Gauss-Legendre panels on u in [start, end] for an integrand singular at
  // u = -distance; panel lengths never exceed the distance to that point.
  PanelRule smooth_rule(Side side, int target, double distance, double start, double end) const;
  // Gauss-Jacobi rule on u in [0, extent] for (u)^s times a smooth function.
  PanelRule singular_rule(Side side, int target, double extent) const;

  MeshPtr mesh_;
  int order_;
  double s_;
  double inv_gamma_s_;
  QuadratureRule inner_left_;   // weight (1 - tau)^{s-1}
  QuadratureRule inner_right_;  // weight (1 + tau)^{s-1}
  QuadratureRule outer_left_;   // weight (1 + xi)^s
  QuadratureRule outer_right_;  // weight (1 - xi)^s
  std::vector<QuadratureRule> legendre_;
  mutable std::map<std::pair<int, int>, QuadratureRule> rodrigues_;
  mutable std::mutex rodrigues_mutex_;
};

struct AssemblyOptions {
  /// On uniform meshes compute one block per diagonal and copy it.
  bool exploit_toeplitz = true;
};

class FastApplyPlan;

/// Discrete Riesz potential on a DG space: q = Pi_h Delta_{-s/2} p_h.
///
/// left()/right() hold the entries (phi_a, I^s_{L/R} phi_b) premultiplied by
/// the inverse element mass matrix (2 / h_i), so a matrix-vector product
/// returns modal coefficients of the L2 projection. combined() is
/// (left + right) / (2 cos(s pi / 2)).
class RieszOperator {
 public:
  static RieszOperator assemble(MeshPtr mesh, int order, double s, AssemblyOptions opts = {});

  const Mesh1D& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  int order() const { return order_; }
  double s() const { return s_; }
  int dofs() const { return static_cast<int>(combined_.rows()); }

  const Eigen::MatrixXd& left() const { return left_; }
  const Eigen::MatrixXd& right() const { return right_; }
  const Eigen::MatrixXd& combined() const { return combined_; }

  /// Unscaled weak-form matrices (mass matrix times left()/right()).
  Eigen::MatrixXd weak_left() const;
  Eigen::MatrixXd weak_right() const;
  Eigen::MatrixXd weak_combined() const;

  DgField apply(const DgField& p) const;
  /// Same result through circulant embedding and FFTs; uniform meshes only.
  DgField fast_apply_uniform(const DgField& p) const;
  bool has_fast_path() const { return static_cast<bool>(fast_); }

 private:
  RieszOperator() = default;
  void check_space(const DgField& p) const;

  MeshPtr mesh_;
  int order_ = 0;
  double s_ = 0.0;
  Eigen::MatrixXd left_;
  Eigen::MatrixXd right_;
  Eigen::MatrixXd combined_;
  std::shared_ptr<const FastApplyPlan> fast_;
};

RieszOperator assemble_riesz_operator(MeshPtr mesh, int order, double s,
                                      AssemblyOptions opts = {});

/// Builds the FFT plan from the diagonal blocks of a uniform-mesh operator:
/// blocks[d + K - 1] is the (i, j) block with i - j = d.
std::shared_ptr<const FastApplyPlan> make_fast_apply_plan(
    int elements, int modes, const std::vector<Eigen::MatrixXd>& blocks);
Eigen::VectorXd fast_apply(const FastApplyPlan& plan, const Eigen::VectorXd& p);

/// phi_{j,n} as a piecewise polynomial supported on element j.
PiecewisePoly basis_as_piecewise(const Mesh1D& mesh, int j, int n);
/// u_h as a piecewise polynomial over the whole mesh (one piece per element).
PiecewisePoly field_as_piecewise(const DgField& u);

/// Writes a matrix as CSV, row-major, 17 significant digits.
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);

}  // namespace fracldg
