#include "fracldg/riesz_operator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "fracldg/errors.hpp"

namespace fracldg {

namespace {

constexpr int kMaxSmoothPoints = 64;

}  // namespace

BasisIntegrals::BasisIntegrals(MeshPtr mesh, int order, double s)
    : mesh_(std::move(mesh)), order_(order), s_(s) {
  if (!mesh_) throw InvalidArgument("BasisIntegrals: null mesh");
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgument("Riesz operator: s must lie in (0, 1)");
  if (order < 0) throw InvalidArgument("Riesz operator: negative order");
  inv_gamma_s_ = 1.0 / std::tgamma(s);
  inner_left_ = gauss_jacobi(order + 1, s - 1.0, 0.0);
  inner_right_ = gauss_jacobi(order + 1, 0.0, s - 1.0);
  outer_left_ = gauss_jacobi(order + 1, 0.0, s);
  outer_right_ = gauss_jacobi(order + 1, s, 0.0);
  legendre_.reserve(kMaxSmoothPoints);
  for (int n = 1; n <= kMaxSmoothPoints; ++n) legendre_.push_back(gauss_legendre(n));
}

void BasisIntegrals::basis_at(double xi, double* out) const {
  double p0 = 1.0, p1 = xi;
  for (int n = 0; n <= order_; ++n) {
    double p;
    if (n == 0) {
      p = 1.0;
    } else if (n == 1) {
      p = xi;
    } else {
      const int k = n - 1;
      p = ((2 * k + 1) * xi * p1 - k * p0) / (k + 1);
      p0 = p1;
      p1 = p;
    }
    out[n] = std::sqrt((2.0 * n + 1.0) / 2.0) * p;
  }
}

const QuadratureRule& BasisIntegrals::legendre_rule(int n) const {
  return legendre_[std::clamp(n, 1, kMaxSmoothPoints) - 1];
}

int BasisIntegrals::smooth_points(double distance, double half_width) const {
  // Gauss-Legendre error for an integrand analytic inside the Bernstein
  // ellipse through the nearest singularity decays like rho^{-2n}.
  const double x0 = 1.0 + std::max(distance, 0.0) / half_width;
  const double rho = x0 + std::sqrt(std::max(x0 * x0 - 1.0, 0.0));
  if (rho <= 1.0 + 1e-12) return kMaxSmoothPoints;
  const int n = static_cast<int>(std::ceil(20.0 / std::log(rho))) + order_ + 1;
  return std::min(n, kMaxSmoothPoints);
}

double BasisIntegrals::reference_coordinate(Side side, int target, double u) const {
  // Left side: the source lies to the left, so the near end is xi = -1.
  const double t = 2.0 * u / mesh_->width(target);
  return side == Side::left ? -1.0 + t : 1.0 - t;
}

BasisIntegrals::PanelRule BasisIntegrals::smooth_rule(Side side, int target, double distance,
                                                      double start, double end) const {
  const double width = mesh_->width(target);
  PanelRule out;
  double u0 = start;
  while (u0 < end) {
    const double reach = distance + u0;
    const double u1 = reach >= end - u0 ? end : std::min(end, u0 + reach);
    const QuadratureRule& rule = legendre_rule(smooth_points(reach, 0.5 * (u1 - u0)));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      out.nodes.push_back(reference_coordinate(side, target, 0.5 * (u0 + u1) + 0.5 * (u1 - u0) * rule.nodes[q]));
      out.weights.push_back(rule.weights[q] * (u1 - u0) / width);
      out.jacobi.push_back(1.0);
    }
    u0 = u1;
  }
  return out;
}

BasisIntegrals::PanelRule BasisIntegrals::singular_rule(Side side, int target, double extent) const {
  const QuadratureRule& rule = side == Side::left ? outer_left_ : outer_right_;
  const double width = mesh_->width(target);
  PanelRule out;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double xi = rule.nodes[q];
    const double distance_weight = side == Side::left ? 1.0 + xi : 1.0 - xi;
    out.nodes.push_back(reference_coordinate(side, target, 0.5 * extent * distance_weight));
    out.weights.push_back(rule.weights[q] * extent / width);
    out.jacobi.push_back(std::pow(distance_weight, s_));
  }
  return out;
}

Eigen::VectorXd BasisIntegrals::partial(Side side, int source, double x, double edge) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(order_ + 1);
  const double len = side == Side::left ? x - edge : edge - x;
  if (!(len > 0.0)) return out;
  const QuadratureRule& rule = side == Side::left ? inner_left_ : inner_right_;
  std::vector<double> phi(order_ + 1);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double t = side == Side::left ? edge + 0.5 * len * (1.0 + rule.nodes[q])
                                        : x + 0.5 * len * (1.0 + rule.nodes[q]);
    basis_at(mesh_->to_reference(source, t), phi.data());
    for (int n = 0; n <= order_; ++n) out[n] += rule.weights[q] * phi[n];
  }
  return out * (std::pow(0.5 * len, s_) * inv_gamma_s_);
}

const QuadratureRule& BasisIntegrals::rodrigues_rule(int mode, int points) const {
  std::lock_guard<std::mutex> lock(rodrigues_mutex_);
  auto key = std::make_pair(mode, points);
  auto it = rodrigues_.find(key);
  if (it == rodrigues_.end()) {
    it = rodrigues_.emplace(key, gauss_jacobi(points, mode, mode)).first;
  }
  return it->second;
}

// Far from the source, n integrations by parts of the Rodrigues form move all
// derivatives onto the kernel: the remaining integrand (1 - xi^2)^n (D -+ a xi)^{s-1-n}
// is positive, so the sum has no cancellation even when the result is tiny.
Eigen::VectorXd BasisIntegrals::far(Side side, int source, double x) const {
  const double a = 0.5 * mesh_->width(source);
  const double D = side == Side::left ? x - mesh_->center(source) : mesh_->center(source) - x;
  const double sign = side == Side::left ? -1.0 : 1.0;
  const int points = smooth_points(D - a, a);
  Eigen::VectorXd out(order_ + 1);
  double prefactor = 1.0;  // (1-s)_n a^n / (2^n n!)
  for (int n = 0; n <= order_; ++n) {
    if (n > 0) prefactor *= (n - s_) * a / (2.0 * n);
    const QuadratureRule& rule = rodrigues_rule(n, points);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      sum += rule.weights[q] * std::pow(D + sign * a * rule.nodes[q], s_ - 1.0 - n);
    }
    const double parity = side == Side::right && n % 2 == 1 ? -1.0 : 1.0;
    out[n] = parity * prefactor * std::sqrt((2.0 * n + 1.0) / 2.0) * sum;
  }
  return out * (a * inv_gamma_s_);
}

Eigen::VectorXd BasisIntegrals::pointwise(Side side, int source, double x) const {
  const double l = mesh_->left(source), r = mesh_->right(source), h = mesh_->width(source);
  if (side == Side::left) {
    if (x <= l) return Eigen::VectorXd::Zero(order_ + 1);
    if (x <= r) return partial(side, source, x, l);
    if (x - r < 0.5 * h) return partial(side, source, x, l) - partial(side, source, x, r);
    return far(side, source, x);
  }
  if (x >= r) return Eigen::VectorXd::Zero(order_ + 1);
  if (x >= l) return partial(side, source, x, r);
  if (l - x < 0.5 * h) return partial(side, source, x, r) - partial(side, source, x, l);
  return far(side, source, x);
}

namespace {

enum class BlockKind { none, self, adjacent, far };

BlockKind classify(Side side, int target, int source) {
  const int d = side == Side::left ? target - source : source - target;
  if (d < 0) return BlockKind::none;
  if (d == 0) return BlockKind::self;
  if (d == 1) return BlockKind::adjacent;
  return BlockKind::far;
}

}  // namespace

Eigen::MatrixXd BasisIntegrals::block(Side side, int target, int source) const {
  const int M = order_ + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(M, M);
  const BlockKind kind = classify(side, target, source);
  if (kind == BlockKind::none) return out;

  const double hi = mesh_->width(target);
  std::vector<double> phi(M);
  // Accumulates sign * sum_q w_q phi_m(xi_q) v_n(x_q) / jacobi_q.
  auto add = [&](const PanelRule& rule, double sign, auto&& values) {
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double xi = rule.nodes[q];
      const Eigen::VectorXd v = values(mesh_->to_physical(target, xi));
      basis_at(xi, phi.data());
      const double w = sign * rule.weights[q] / rule.jacobi[q];
      for (int m = 0; m < M; ++m) {
        for (int n = 0; n < M; ++n) out(m, n) += w * phi[m] * v[n];
      }
    }
  };

  const double near_edge = side == Side::left ? mesh_->left(source) : mesh_->right(source);
  const double far_edge = side == Side::left ? mesh_->right(source) : mesh_->left(source);
  const double hs = mesh_->width(source);
  switch (kind) {
    case BlockKind::self:
      add(singular_rule(side, target, hi), 1.0, [&](double x) { return partial(side, source, x, near_edge); });
      break;
    case BlockKind::adjacent: {
      // Within one source width of the shared node, v = A - B: A extends the
      // source polynomial from its near end and is smooth there, B carries
      // the singularity at the shared node. Further out the extension would
      // be evaluated far outside its element, so v is sampled directly.
      const double split = std::min(hs, hi);
      add(smooth_rule(side, target, hs, 0.0, split), 1.0,
          [&](double x) { return partial(side, source, x, near_edge); });
      add(singular_rule(side, target, split), -1.0, [&](double x) { return partial(side, source, x, far_edge); });
      if (split < hi) {
        add(smooth_rule(side, target, 0.0, split, hi), 1.0, [&](double x) { return pointwise(side, source, x); });
      }
      break;
    }
    case BlockKind::far: {
      const double gap = side == Side::left ? mesh_->left(target) - mesh_->right(source)
                                            : mesh_->left(source) - mesh_->right(target);
      add(smooth_rule(side, target, gap, 0.0, hi), 1.0, [&](double x) { return pointwise(side, source, x); });
      break;
    }
    case BlockKind::none:
      break;
  }
  return out * (0.5 * hi);
}

BasisIntegrals::OuterSamples BasisIntegrals::outer_samples(Side side, int target,
                                                           int source) const {
  OuterSamples out;
  const BlockKind kind = classify(side, target, source);
  std::vector<double> xs;
  auto take = [&](const PanelRule& rule) {
    for (double xi : rule.nodes) xs.push_back(mesh_->to_physical(target, xi));
  };
  const double hi = mesh_->width(target), hs = mesh_->width(source);
  if (kind == BlockKind::self) take(singular_rule(side, target, hi));
  if (kind == BlockKind::adjacent) {
    const double split = std::min(hs, hi);
    take(singular_rule(side, target, split));
    take(smooth_rule(side, target, hs, 0.0, split));
    if (split < hi) take(smooth_rule(side, target, 0.0, split, hi));
  }
  if (kind == BlockKind::far) {
    const double gap = side == Side::left ? mesh_->left(target) - mesh_->right(source)
                                          : mesh_->left(source) - mesh_->right(target);
    take(smooth_rule(side, target, gap, 0.0, hi));
  }
  out.x = xs;
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(xs.size()), order_ + 1);
  for (std::size_t q = 0; q < xs.size(); ++q) {
    out.values.row(static_cast<Eigen::Index>(q)) = pointwise(side, source, xs[q]).transpose();
  }
  return out;
}

RieszOperator RieszOperator::assemble(MeshPtr mesh, int order, double s, AssemblyOptions opts) {
  const BasisIntegrals integrals(mesh, order, s);
  RieszOperator op;
  op.mesh_ = std::move(mesh);
  op.order_ = order;
  op.s_ = s;
  const int K = op.mesh_->size();
  const int M = order + 1;
  const Eigen::Index N = static_cast<Eigen::Index>(K) * M;
  op.left_ = Eigen::MatrixXd::Zero(N, N);
  op.right_ = Eigen::MatrixXd::Zero(N, N);

  if (op.mesh_->uniform() && opts.exploit_toeplitz) {
    const double scale = 2.0 / op.mesh_->width(0);
    for (int d = 0; d < K; ++d) {
      const Eigen::MatrixXd lb = scale * integrals.block(Side::left, d, 0);
      const Eigen::MatrixXd rb = scale * integrals.block(Side::right, 0, d);
      for (int j = 0; j + d < K; ++j) {
        op.left_.block((j + d) * M, j * M, M, M) = lb;
        op.right_.block(j * M, (j + d) * M, M, M) = rb;
      }
    }
  } else {
    for (int i = 0; i < K; ++i) {
      const double scale = 2.0 / op.mesh_->width(i);
      for (int j = 0; j <= i; ++j) {
        op.left_.block(i * M, j * M, M, M) = scale * integrals.block(Side::left, i, j);
      }
      for (int j = i; j < K; ++j) {
        op.right_.block(i * M, j * M, M, M) = scale * integrals.block(Side::right, i, j);
      }
    }
  }
  const double coef = 1.0 / (2.0 * std::cos(s * std::numbers::pi / 2.0));
  op.combined_ = coef * (op.left_ + op.right_);

  if (op.mesh_->uniform()) {
    std::vector<Eigen::MatrixXd> blocks(2 * K - 1);
    for (int d = -(K - 1); d < K; ++d) {
      blocks[d + K - 1] = d >= 0 ? Eigen::MatrixXd(op.combined_.block(d * M, 0, M, M))
                                 : Eigen::MatrixXd(op.combined_.block(0, -d * M, M, M));
    }
    op.fast_ = make_fast_apply_plan(K, M, blocks);
  }
  return op;
}

RieszOperator assemble_riesz_operator(MeshPtr mesh, int order, double s, AssemblyOptions opts) {
  return RieszOperator::assemble(std::move(mesh), order, s, opts);
}

namespace {

Eigen::VectorXd mass_diagonal(const Mesh1D& mesh, int modes) {
  Eigen::VectorXd m(static_cast<Eigen::Index>(mesh.size()) * modes);
  for (int j = 0; j < mesh.size(); ++j) m.segment(j * modes, modes).setConstant(0.5 * mesh.width(j));
  return m;
}

}  // namespace

Eigen::MatrixXd RieszOperator::weak_left() const {
  return mass_diagonal(*mesh_, order_ + 1).asDiagonal() * left_;
}

Eigen::MatrixXd RieszOperator::weak_right() const {
  return mass_diagonal(*mesh_, order_ + 1).asDiagonal() * right_;
}

Eigen::MatrixXd RieszOperator::weak_combined() const {
  return mass_diagonal(*mesh_, order_ + 1).asDiagonal() * combined_;
}

void RieszOperator::check_space(const DgField& p) const {
  if (p.order() != order_ || p.mesh().boundaries() != mesh_->boundaries()) {
    throw InvalidArgument("RieszOperator: field does not live on the operator's space");
  }
}

DgField RieszOperator::apply(const DgField& p) const {
  check_space(p);
  return DgField(mesh_, order_, combined_ * p.coeffs());
}

DgField RieszOperator::fast_apply_uniform(const DgField& p) const {
  if (!mesh_->uniform() || !fast_) {
    throw UnsupportedMesh("fast_apply_uniform: operator mesh is not uniform");
  }
  check_space(p);
  return DgField(mesh_, order_, fast_apply(*fast_, p.coeffs()));
}

PiecewisePoly basis_as_piecewise(const Mesh1D& mesh, int j, int n) {
  return legendre_mode(mesh.left(j), mesh.right(j), n);
}

PiecewisePoly field_as_piecewise(const DgField& u) {
  const Mesh1D& mesh = u.mesh();
  std::vector<std::vector<double>> pieces;
  for (int j = 0; j < mesh.size(); ++j) {
    std::vector<double> piece(u.modes(), 0.0);
    for (int n = 0; n < u.modes(); ++n) {
      const std::vector<double> mode = legendre_mode(mesh.left(j), mesh.right(j), n).piece(0);
      for (int i = 0; i <= n; ++i) piece[i] += u.coeff(j, n) * mode[i];
    }
    pieces.push_back(std::move(piece));
  }
  return PiecewisePoly(mesh.boundaries(), std::move(pieces));
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_real(m(i, j));
    }
    out << '\n';
  }
}

}  // namespace fracldg
