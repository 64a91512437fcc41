#include "fracldg/selftest.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "fracldg/errors.hpp"
#include "fracldg/harness.hpp"
#include "fracldg/lserk.hpp"

namespace fracldg {

namespace {

CheckResult ceiling_check(std::string name, double measured, double tolerance,
                          std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.measured = measured;
  r.tolerance = tolerance;
  r.passed = std::isfinite(measured) && measured <= tolerance;
  r.detail = std::move(detail);
  return r;
}

CheckResult floor_check(std::string name, double measured, double floor_value,
                        std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.measured = measured;
  r.tolerance = floor_value;
  r.floor = true;
  r.passed = std::isfinite(measured) && measured >= floor_value;
  r.detail = std::move(detail);
  return r;
}

double spectral_norm(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.transpose() * g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

PiecewisePoly example1_u0() { return make_example(ExampleId::example1, 1.5).u0; }

}  // namespace

std::string format_check(const CheckResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %-44s measured %.3e %s %.3e", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.measured, r.floor ? ">=" : "<=", r.tolerance);
  std::string line = buf;
  if (!r.detail.empty()) line += "  (" + r.detail + ")";
  return line;
}

CheckResult check_adjoint(const Eigen::MatrixXd& left, const Eigen::MatrixXd& right,
                          const std::string& name) {
  if (left.rows() != right.cols() || left.cols() != right.rows()) {
    return ceiling_check(name, std::numeric_limits<double>::infinity(), 1e-12, "shape mismatch");
  }
  const double scale = left.cwiseAbs().maxCoeff();
  const double dev = (right - left.transpose()).cwiseAbs().maxCoeff() / scale;
  return ceiling_check(name, dev, 1e-12);
}

CheckResult check_positivity(const RieszOperator& op, std::uint64_t seed, int samples) {
  const Eigen::MatrixXd g = op.weak_combined();
  const double norm = spectral_norm(g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    Eigen::VectorXd v(g.rows());
    for (Eigen::Index r = 0; r < v.size(); ++r) v[r] = normal(rng);
    worst = std::min(worst, v.dot(g * v) / (norm * v.squaredNorm()));
  }
  const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  worst = std::min(worst, es.eigenvalues().minCoeff() / norm);
  char detail[64];
  std::snprintf(detail, sizeof detail, "K=%d k=%d s=%.2f", op.mesh().size(), op.order(), op.s());
  return floor_check("positivity", worst, -1e-10, detail);
}

CheckResult check_toeplitz(int elements, int order, double s) {
  const MeshPtr mesh = make_mesh(0.0, 1.0, elements);
  AssemblyOptions full;
  full.exploit_toeplitz = false;
  const Eigen::MatrixXd toeplitz = RieszOperator::assemble(mesh, order, s).left();
  const Eigen::MatrixXd direct = RieszOperator::assemble(mesh, order, s, full).left();
  const double dev = (toeplitz - direct).cwiseAbs().maxCoeff() / direct.cwiseAbs().maxCoeff();
  char detail[64];
  std::snprintf(detail, sizeof detail, "K=%d k=%d s=%.2f", elements, order, s);
  return ceiling_check("toeplitz", dev, 1e-12, detail);
}

CheckResult check_reflection(int elements, int order, double s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> width(0.5, 1.5);
  std::vector<double> breaks{0.0};
  for (int j = 0; j < elements; ++j) breaks.push_back(breaks.back() + width(rng));
  for (double& x : breaks) x /= breaks.back();
  std::vector<double> mirrored;
  for (auto it = breaks.rbegin(); it != breaks.rend(); ++it) mirrored.push_back(1.0 - *it);
  mirrored.front() = 0.0;
  mirrored.back() = 1.0;

  const auto mesh = std::make_shared<const Mesh1D>(breaks);
  const auto mirror = std::make_shared<const Mesh1D>(mirrored);
  const Eigen::MatrixXd right = RieszOperator::assemble(mesh, order, s).weak_right();
  const Eigen::MatrixXd left = RieszOperator::assemble(mirror, order, s).weak_left();

  // (P v)[j, n] = (-1)^n v[K - 1 - j, n].
  const int modes = order + 1;
  const int n_dofs = elements * modes;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n_dofs, n_dofs);
  for (int j = 0; j < elements; ++j) {
    for (int n = 0; n < modes; ++n) {
      p(j * modes + n, (elements - 1 - j) * modes + n) = (n % 2 == 0) ? 1.0 : -1.0;
    }
  }
  const Eigen::MatrixXd conjugated = p * left * p.transpose();
  const double dev = (conjugated - right).cwiseAbs().maxCoeff() / right.cwiseAbs().maxCoeff();
  char detail[64];
  std::snprintf(detail, sizeof detail, "non-uniform K=%d k=%d s=%.2f", elements, order, s);
  return ceiling_check("reflection", dev, 1e-12, detail);
}

CheckResult check_semigroup(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double worst = 0.0;
  const double orders[] = {0.2, 0.3, 0.5};
  for (double s1 : orders) {
    for (double s2 : orders) {
      if (s1 + s2 >= 1.0) continue;
      std::vector<double> c(5);
      for (double& v : c) v = coef(rng);
      const double lo = -0.5 + 0.2 * coef(rng);
      const double hi = lo + 0.6 + 0.2 * coef(rng);
      const PiecewisePoly piece = PiecewisePoly::single(lo, hi, c);
      const PowerSum twice = PowerSum::from_piecewise(piece).integrated(s2).integrated(s1);
      std::uniform_real_distribution<double> xs(lo + 1e-3, hi + 1.0);
      for (int i = 0; i < 20; ++i) {
        const double x = xs(rng);
        const double once = frac_integral_piecewise(Side::left, s1 + s2, piece, x);
        const double rel = std::abs(twice(x) - once) / std::max(std::abs(once), 1e-300);
        worst = std::max(worst, rel);
      }
    }
  }
  return ceiling_check("oracle semigroup", worst, 1e-11);
}

CheckResult check_oracle_exactness(int elements, int order, double s) {
  const MeshPtr mesh = make_mesh(0.0, 1.0, elements);
  const BasisIntegrals integrals(mesh, order, s);
  double worst = 0.0;
  for (Side side : {Side::left, Side::right}) {
    for (int i = 0; i < elements; ++i) {
      for (int j = 0; j < elements; ++j) {
        const auto samples = integrals.outer_samples(side, i, j);
        for (std::size_t q = 0; q < samples.x.size(); ++q) {
          for (int n = 0; n <= order; ++n) {
            const double ref =
                legendre_mode_integral(side, s, mesh->left(j), mesh->right(j), n, samples.x[q]);
            const double got = samples.values(q, n);
            if (ref == 0.0 && got == 0.0) continue;
            worst = std::max(worst, std::abs(got - ref) / std::abs(ref));
          }
        }
      }
    }
  }
  char detail[64];
  std::snprintf(detail, sizeof detail, "K=%d k=%d s=%.2f", elements, order, s);
  return ceiling_check("oracle exactness", worst, 1e-10, detail);
}

CheckResult check_bruteforce_spot() {
  const double v = riesz_frac_laplacian_piecewise(1.5, example1_u0(), 0.5);
  return ceiling_check("oracle vs hypersingular integral",
                       std::abs(v - kBruteForceSpotValue) / std::abs(kBruteForceSpotValue), 1e-8);
}

CheckResult check_pde_residual(ExampleId id, double alpha, std::uint64_t seed) {
  const BuiltinProblem prob = make_example(id, alpha);
  const PiecewisePoly d1 = prob.u0.derivative();
  const PiecewisePoly d2 = d1.derivative();
  const double s = 2.0 - alpha;
  const ProblemSpec& spec = prob.spec;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xs(spec.a, spec.b);
  std::uniform_real_distribution<double> ts(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const double x = xs(rng);
    const double t = ts(rng);
    const double decay = std::exp(-t);
    const double u = decay * prob.u0(x);
    const double u_x = decay * d1(x);
    const double frac = -decay * riesz_integral_piecewise(s, d2, x);
    const double residual =
        -u + spec.flux.df(u) * u_x + spec.epsilon * frac - spec.source_value(x, t);
    worst = std::max(worst, std::abs(residual));
  }
  char name[64];
  std::snprintf(name, sizeof name, "PDE residual %s alpha=%.2f", to_string(id).c_str(), alpha);
  return ceiling_check(name, worst, 1e-10);
}

CheckResult check_temporal_order() {
  const auto rhs = [](double u, double) { return -u; };
  std::vector<double> errors;
  for (double dt : {0.2, 0.1, 0.05, 0.025}) {
    double u = 1.0;
    const int steps = static_cast<int>(std::lround(1.0 / dt));
    for (int n = 0; n < steps; ++n) u = lserk_step(rhs, u, n * dt, dt);
    errors.push_back(std::abs(u - std::exp(-1.0)));
  }
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < errors.size(); ++i) {
    worst = std::min(worst, std::log2(errors[i - 1] / errors[i]));
  }
  return floor_check("LSERK temporal order", worst, 3.7);
}

CheckResult check_stability(double alpha, int elements, int order, double final_time) {
  char name[64];
  std::snprintf(name, sizeof name, "stability example3 alpha=%.2f", alpha);
  const BuiltinProblem prob = make_example(ExampleId::example3, alpha);
  const MeshPtr mesh = make_mesh(prob.spec.a, prob.spec.b, elements);
  const SemiDiscrete scheme(prob.spec, FluxSpec{}, mesh, order);
  StepControl ctrl;
  ctrl.cfl = default_cfl(order);
  ctrl.h_min = mesh->min_width();
  ctrl.alpha = alpha;
  ctrl.final_time = final_time;
  const IntegrationResult result = integrate(scheme, ctrl);
  if (!result.completed) {
    return ceiling_check(name, std::numeric_limits<double>::infinity(), 1e-8,
                         "instability: " + result.failure);
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < result.log.size(); ++i) {
    worst = std::max(worst, (result.log[i].l2_norm - result.log[i - 1].l2_norm) /
                                result.log[i - 1].l2_norm);
  }
  char detail[64];
  std::snprintf(detail, sizeof detail, "%zu steps, worst relative change per step",
                result.log.size() - 1);
  return ceiling_check(name, worst, 1e-8, detail);
}

CheckResult check_fast_apply(int elements, int order, double s, int fields, std::uint64_t seed) {
  const RieszOperator op = RieszOperator::assemble(make_mesh(0.0, 1.0, elements), order, s);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double worst = 0.0;
  for (int f = 0; f < fields; ++f) {
    Eigen::VectorXd c(op.dofs());
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = coef(rng);
    const DgField p(op.mesh_ptr(), order, c);
    worst = std::max(worst,
                     (op.apply(p).coeffs() - op.fast_apply_uniform(p).coeffs()).cwiseAbs().maxCoeff());
  }
  char detail[64];
  std::snprintf(detail, sizeof detail, "K=%d k=%d s=%.2f, %d fields", elements, order, s, fields);
  return ceiling_check("fast apply equivalence", worst, 1e-12, detail);
}

double operator_projection_error(int elements, int order, double s) {
  const PiecewisePoly u = example1_u0();
  const MeshPtr mesh = make_mesh(0.0, 1.0, elements);
  const DgField projected = l2_project([&u](double x) { return u(x); }, mesh, order, order + 8);
  const PiecewisePoly error = u + field_as_piecewise(projected).scaled(-1.0);
  // I^s of the element-wise jumps behaves like |x - x_j|^s near every
  // breakpoint, so each element is split into geometrically graded pieces
  // towards both ends.
  const QuadratureRule rule = gauss_legendre(12);
  double sum = 0.0;
  for (int j = 0; j < elements; ++j) {
    std::vector<double> cuts{0.0};
    for (int g = 8; g >= 1; --g) cuts.push_back(0.5 * std::pow(0.25, g));
    cuts.push_back(0.5);
    const std::size_t half = cuts.size();
    for (std::size_t g = half - 1; g-- > 0;) cuts.push_back(1.0 - cuts[g]);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double lo = mesh->left(j) + cuts[c] * mesh->width(j);
      const double hi = mesh->left(j) + cuts[c + 1] * mesh->width(j);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q];
        const double v = riesz_integral_piecewise(s, error, x);
        sum += 0.5 * (hi - lo) * rule.weights[q] * v * v;
      }
    }
  }
  return std::sqrt(sum);
}

CheckResult check_operator_order(int order, double s) {
  const int grid[] = {10, 20, 40};
  double prev = operator_projection_error(grid[0], order, s);
  double worst = std::numeric_limits<double>::infinity();
  std::string detail = "errors";
  char buf[32];
  std::snprintf(buf, sizeof buf, " %.3e", prev);
  detail += buf;
  for (int i = 1; i < 3; ++i) {
    const double cur = operator_projection_error(grid[i], order, s);
    worst = std::min(worst, observed_order(prev, cur, grid[i - 1], grid[i]));
    std::snprintf(buf, sizeof buf, " %.3e", cur);
    detail += buf;
    prev = cur;
  }
  char name[64];
  std::snprintf(name, sizeof name, "operator approximation order k=%d", order);
  return floor_check(name, worst, order + 0.8, detail);
}

std::vector<CheckResult> run_selftest(std::uint64_t seed, std::ostream& out) {
  std::vector<CheckResult> results;
  auto record = [&](CheckResult r) {
    out << format_check(r) << '\n';
    results.push_back(std::move(r));
  };
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> orders(0, 3);
  const double s_values[] = {0.2, 0.5, 0.8};

  for (double s : s_values) {
    const int k = orders(rng);
    const RieszOperator op = RieszOperator::assemble(make_mesh(0.0, 1.0, 10), k, s);
    char name[64];
    std::snprintf(name, sizeof name, "adjoint K=10 k=%d s=%.2f", k, s);
    record(check_adjoint(op.weak_left(), op.weak_right(), name));
    record(check_positivity(op, rng()));
    record(check_toeplitz(10, k, s));
    record(check_reflection(8, k, s, rng()));
    record(check_oracle_exactness(10, k, s));
  }
  record(check_semigroup(rng()));
  record(check_bruteforce_spot());
  record(check_pde_residual(ExampleId::example1, 1.5, rng()));
  record(check_pde_residual(ExampleId::example2, 1.5, rng()));
  record(check_temporal_order());
  record(check_stability(1.5, 40, 2, 0.25));
  record(check_fast_apply(64, 2, 0.5, 10, rng()));
  return results;
}

}  // namespace fracldg
