#include "fracldg/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "fracldg/errors.hpp"

namespace fracldg {

DgField::DgField(MeshPtr mesh, int order)
    : mesh_(std::move(mesh)), order_(order) {
  if (!mesh_) throw InvalidArgument("DgField: null mesh");
  if (order_ < 0) throw InvalidArgument("DgField: negative order");
  coeffs_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh_->size()) * modes());
}

DgField::DgField(MeshPtr mesh, int order, Eigen::VectorXd coeffs)
    : DgField(std::move(mesh), order) {
  if (coeffs.size() != coeffs_.size()) {
    throw InvalidArgument("DgField: coefficient vector has wrong length");
  }
  if (!coeffs.allFinite()) throw InvalidArgument("DgField: non-finite coefficients");
  coeffs_ = std::move(coeffs);
}

double DgField::right_trace(int j) const {
  double sum = 0.0;
  for (int n = 0; n <= order_; ++n) sum += coeff(j, n) * std::sqrt((2.0 * n + 1.0) / 2.0);
  return sum;
}

double DgField::left_trace(int j) const {
  double sum = 0.0;
  for (int n = 0; n <= order_; ++n) {
    const double e = std::sqrt((2.0 * n + 1.0) / 2.0);
    sum += coeff(j, n) * ((n % 2 == 0) ? e : -e);
  }
  return sum;
}

double DgField::value(int j, double xi) const {
  const LegendreValues lv = legendre_eval(order_, xi);
  double sum = 0.0;
  for (int n = 0; n <= order_; ++n) sum += coeff(j, n) * lv.values[n];
  return sum;
}

bool DgField::same_space(const DgField& other) const {
  return order_ == other.order_ &&
         (mesh_ == other.mesh_ || mesh_->boundaries() == other.mesh_->boundaries());
}

DgField l2_project(const ScalarFunction& f, const MeshPtr& mesh, int order, int points) {
  DgField out(mesh, order);
  const QuadratureRule rule = gauss_legendre(points > 0 ? points : order + 5);
  std::vector<LegendreValues> basis;
  basis.reserve(rule.size());
  for (double xi : rule.nodes) basis.push_back(legendre_eval(order, xi));
  for (int j = 0; j < mesh->size(); ++j) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double fx = f(mesh->to_physical(j, rule.nodes[q]));
      // Mass matrix is (h/2) I, so c_n = int_{-1}^{1} f phi_n dxi.
      for (int n = 0; n <= order; ++n) {
        out.coeff(j, n) += rule.weights[q] * fx * basis[q].values[n];
      }
    }
  }
  return out;
}

double eval_field(const DgField& u, double x, TraceSide side) {
  const Mesh1D& mesh = u.mesh();
  const double tol = 1e-14 * (mesh.b() - mesh.a());
  if (x < mesh.a() - tol || x > mesh.b() + tol) {
    throw InvalidArgument("eval_field: x outside the mesh");
  }
  const int j = mesh.locate(x, side != TraceSide::right);
  const double xi = std::clamp(mesh.to_reference(j, x), -1.0, 1.0);
  if (xi == 1.0) return u.right_trace(j);
  if (xi == -1.0) return u.left_trace(j);
  return u.value(j, xi);
}

double l2_error(const DgField& u, const ScalarFunction& ref, int points) {
  const QuadratureRule rule = gauss_legendre(points > 0 ? points : 2 * u.order() + 4);
  const Mesh1D& mesh = u.mesh();
  double sum = 0.0;
  for (int j = 0; j < mesh.size(); ++j) {
    double local = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double e = u.value(j, rule.nodes[q]) - ref(mesh.to_physical(j, rule.nodes[q]));
      local += rule.weights[q] * e * e;
    }
    sum += 0.5 * mesh.width(j) * local;
  }
  return std::sqrt(sum);
}

double l2_error(const DgField& u, const DgField& ref) {
  if (!u.same_space(ref)) throw InvalidArgument("l2_error: fields live on different spaces");
  DgField diff(u.mesh_ptr(), u.order(), u.coeffs() - ref.coeffs());
  return l2_norm(diff);
}

double l2_norm(const DgField& u) {
  const Mesh1D& mesh = u.mesh();
  double sum = 0.0;
  for (int j = 0; j < mesh.size(); ++j) {
    double local = 0.0;
    for (int n = 0; n < u.modes(); ++n) local += u.coeff(j, n) * u.coeff(j, n);
    sum += 0.5 * mesh.width(j) * local;
  }
  return std::sqrt(sum);
}

std::vector<std::pair<double, double>> snapshot_samples(const DgField& u) {
  const QuadratureRule rule = gauss_legendre(u.order() + 5);
  std::vector<std::pair<double, double>> out;
  out.reserve(rule.size() * u.elements());
  for (int j = 0; j < u.elements(); ++j) {
    for (double xi : rule.nodes) out.emplace_back(u.mesh().to_physical(j, xi), u.value(j, xi));
  }
  return out;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_snapshot_csv(const DgField& u, std::ostream& out) {
  out << "x,u\n";
  for (const auto& [x, v] : snapshot_samples(u)) out << format_real(x) << ',' << format_real(v) << '\n';
}

void write_snapshot_csv(const DgField& u, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  write_snapshot_csv(u, file);
}

}  // namespace fracldg
