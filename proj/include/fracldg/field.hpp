#pragma once

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <string>

#include "fracldg/mesh.hpp"
#include "fracldg/quadrature.hpp"

namespace fracldg {

enum class TraceSide { left, right, interior };

/// Piecewise polynomial of degree <= k per element, stored as orthonormal
/// Legendre coefficients, element-major: coeffs[j * (k + 1) + n].
class DgField {
 public:
  DgField(MeshPtr mesh, int order);
  DgField(MeshPtr mesh, int order, Eigen::VectorXd coeffs);

  const MeshPtr& mesh_ptr() const { return mesh_; }
  const Mesh1D& mesh() const { return *mesh_; }
  int order() const { return order_; }
  int modes() const { return order_ + 1; }
  int elements() const { return mesh_->size(); }

  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::VectorXd& coeffs() { return coeffs_; }
  double coeff(int j, int n) const { return coeffs_[j * modes() + n]; }
  double& coeff(int j, int n) { return coeffs_[j * modes() + n]; }

  /// u^- (right end) and u^+ (left end) traces of element j.
  double right_trace(int j) const;
  double left_trace(int j) const;

  /// Value at reference coordinate xi on element j.
  double value(int j, double xi) const;

  bool finite() const { return coeffs_.allFinite(); }
  bool same_space(const DgField& other) const;

 private:
  MeshPtr mesh_;
  int order_;
  Eigen::VectorXd coeffs_;
};

using ScalarFunction = std::function<double(double)>;

/// Element-wise L2 projection; `points` Gauss points per element
/// (0 selects the default k + 5).
DgField l2_project(const ScalarFunction& f, const MeshPtr& mesh, int order, int points = 0);

/// Point evaluation; at element boundaries `side` picks u^- (left) or u^+ (right).
double eval_field(const DgField& u, double x, TraceSide side = TraceSide::interior);

/// sqrt(sum_j int_{I_j} (u - ref)^2), 2k + 4 Gauss points per element unless given.
double l2_error(const DgField& u, const ScalarFunction& ref, int points = 0);
double l2_error(const DgField& u, const DgField& ref);

/// Exact discrete L2 norm from the modal coefficients.
double l2_norm(const DgField& u);

/// Snapshot as CSV (`x,u`, 17 significant digits) sampled at the Gauss
/// points of each element (k + 5 per element), increasing in x.
void write_snapshot_csv(const DgField& u, std::ostream& out);
void write_snapshot_csv(const DgField& u, const std::string& path);

/// Sample points used by the snapshot writer.
std::vector<std::pair<double, double>> snapshot_samples(const DgField& u);

/// Formats a double with 17 significant digits.
std::string format_real(double v);

}  // namespace fracldg
