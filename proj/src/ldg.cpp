#include "fracldg/ldg.hpp"

#include <algorithm>
#include <cmath>

#include "fracldg/errors.hpp"

namespace fracldg {

PhysicalFlux PhysicalFlux::zero() {
  PhysicalFlux f;
  f.name = "zero";
  f.f = [](double) { return 0.0; };
  f.df = [](double) { return 0.0; };
  f.vanishes = true;
  return f;
}

PhysicalFlux PhysicalFlux::burgers() {
  PhysicalFlux f;
  f.name = "burgers";
  f.f = [](double u) { return 0.5 * u * u; };
  f.df = [](double u) { return u; };
  f.critical_points = {0.0};
  return f;
}

PhysicalFlux PhysicalFlux::linear(double speed) {
  PhysicalFlux f;
  f.name = "linear";
  f.f = [speed](double u) { return speed * u; };
  f.df = [speed](double) { return speed; };
  f.vanishes = speed == 0.0;
  return f;
}

ConvectiveFlux parse_convective_flux(const std::string& name) {
  if (name == "lax_friedrichs_local") return ConvectiveFlux::lax_friedrichs_local;
  if (name == "lax_friedrichs_global") return ConvectiveFlux::lax_friedrichs_global;
  if (name == "godunov") return ConvectiveFlux::godunov;
  if (name == "upwind") return ConvectiveFlux::upwind;
  throw InvalidArgument("unknown convective flux '" + name + "'");
}

std::string to_string(ConvectiveFlux flux) {
  switch (flux) {
    case ConvectiveFlux::lax_friedrichs_local: return "lax_friedrichs_local";
    case ConvectiveFlux::lax_friedrichs_global: return "lax_friedrichs_global";
    case ConvectiveFlux::godunov: return "godunov";
    case ConvectiveFlux::upwind: return "upwind";
  }
  return "?";
}

Orientation parse_orientation(const std::string& name) {
  if (name == "minus_plus") return Orientation::minus_plus;
  if (name == "plus_minus") return Orientation::plus_minus;
  throw InvalidArgument("unknown orientation '" + name + "'");
}

std::string to_string(Orientation orientation) {
  return orientation == Orientation::minus_plus ? "minus_plus" : "plus_minus";
}

void FluxSpec::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive");
  if (lambda && (!(*lambda >= 0.0) || !std::isfinite(*lambda))) {
    throw InvalidArgument("lambda must be non-negative");
  }
}

void ProblemSpec::validate() const {
  if (!(a < b)) throw InvalidArgument("domain needs a < b");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be >= 0");
  if (classical_diffusion) {
    if (alpha != 2.0) throw InvalidArgument("classical diffusion requires alpha = 2");
  } else if (!(alpha > 1.0 && alpha < 2.0)) {
    throw InvalidArgument("alpha must lie in (1, 2)");
  }
  if (!u0) throw InvalidArgument("initial condition missing");
  if (!flux.f || !flux.df) throw InvalidArgument("flux function missing");
}

double ProblemSpec::source_value(double x, double t) const {
  double g = 0.0;
  for (const SourceTerm& s : source) g += s.time_factor(t) * s.spatial(x);
  return g;
}

namespace {

double godunov(const PhysicalFlux& flux, double um, double up) {
  const double lo = std::min(um, up), hi = std::max(um, up);
  double best = flux.f(um);
  auto consider = [&](double u) {
    const double v = flux.f(u);
    best = um <= up ? std::min(best, v) : std::max(best, v);
  };
  consider(up);
  for (double c : flux.critical_points) {
    if (c > lo && c < hi) consider(c);
  }
  return best;
}

}  // namespace

double numerical_flux(const FluxSpec& spec, const PhysicalFlux& flux, double u_minus,
                      double u_plus, double lambda, bool* fell_back) {
  if (fell_back) *fell_back = false;
  if (flux.vanishes) return 0.0;
  switch (spec.convective) {
    case ConvectiveFlux::lax_friedrichs_local: {
      const double lam =
          spec.lambda ? *spec.lambda
                      : std::max(std::abs(flux.df(u_minus)), std::abs(flux.df(u_plus)));
      return 0.5 * (flux.f(u_minus) + flux.f(u_plus)) - 0.5 * lam * (u_plus - u_minus);
    }
    case ConvectiveFlux::lax_friedrichs_global: {
      const double lam = spec.lambda ? *spec.lambda : lambda;
      return 0.5 * (flux.f(u_minus) + flux.f(u_plus)) - 0.5 * lam * (u_plus - u_minus);
    }
    case ConvectiveFlux::godunov:
      return godunov(flux, u_minus, u_plus);
    case ConvectiveFlux::upwind: {
      const double lo = std::min(u_minus, u_plus), hi = std::max(u_minus, u_plus);
      bool nonneg = flux.df(lo) >= 0.0 && flux.df(hi) >= 0.0;
      bool nonpos = flux.df(lo) <= 0.0 && flux.df(hi) <= 0.0;
      for (double c : flux.critical_points) {
        if (c > lo && c < hi) {
          // f' vanishes strictly inside: single-signed only if it touches zero.
          const double left = flux.df(0.5 * (lo + c)), right = flux.df(0.5 * (c + hi));
          nonneg = nonneg && left >= 0.0 && right >= 0.0;
          nonpos = nonpos && left <= 0.0 && right <= 0.0;
        }
      }
      if (nonneg) return flux.f(u_minus);
      if (nonpos) return flux.f(u_plus);
      if (fell_back) *fell_back = true;
      return godunov(flux, u_minus, u_plus);
    }
  }
  return 0.0;
}

SemiDiscrete::SemiDiscrete(ProblemSpec problem, FluxSpec flux, MeshPtr mesh, int order,
                           std::shared_ptr<const RieszOperator> op)
    : problem_(std::move(problem)),
      flux_(flux),
      mesh_(std::move(mesh)),
      order_(order),
      op_(std::move(op)),
      basis_(order),
      volume_rule_(gauss_legendre(order + 3)) {
  problem_.validate();
  flux_.validate();
  if (!mesh_) throw InvalidArgument("SemiDiscrete: null mesh");
  if (std::abs(mesh_->a() - problem_.a) > 1e-12 * (problem_.b - problem_.a) ||
      std::abs(mesh_->b() - problem_.b) > 1e-12 * (problem_.b - problem_.a)) {
    throw InvalidArgument("SemiDiscrete: mesh does not span the problem domain");
  }
  if (!problem_.classical_diffusion) {
    const double s = 2.0 - problem_.alpha;
    if (!op_) {
      op_ = std::make_shared<const RieszOperator>(RieszOperator::assemble(mesh_, order_, s));
    } else if (op_->order() != order_ || std::abs(op_->s() - s) > 1e-14 ||
               op_->mesh().boundaries() != mesh_->boundaries()) {
      throw InvalidArgument("SemiDiscrete: Riesz operator built for a different discretization");
    }
  }
  for (double xi : volume_rule_.nodes) {
    const LegendreValues v = legendre_eval(order_, xi);
    volume_phi_.push_back(v.values);
    volume_dphi_.push_back(v.derivatives);
  }
  for (const SourceTerm& s : problem_.source) {
    source_fields_.push_back(l2_project(s.spatial, mesh_, order_, 2 * order_ + 8));
  }
}

void SemiDiscrete::set_fast_apply(bool on) {
  if (on && (!op_ || !op_->has_fast_path())) {
    throw UnsupportedMesh("fast apply needs a uniform mesh and a fractional operator");
  }
  fast_ = on;
}

DgField SemiDiscrete::initial_condition() const {
  return l2_project(problem_.u0, mesh_, order_);
}

void SemiDiscrete::check_field(const DgField& u) const {
  if (u.order() != order_ || u.mesh().boundaries() != mesh_->boundaries()) {
    throw InvalidArgument("field does not live on the scheme's space");
  }
}

DgField SemiDiscrete::compute_p(const DgField& u, double t) const {
  check_field(u);
  const int K = mesh_->size();
  const int M = order_ + 1;
  const double se = std::sqrt(problem_.epsilon);
  // u^ at interfaces 0..K.
  std::vector<double> u_hat(K + 1);
  u_hat[0] = problem_.left_boundary(t);
  u_hat[K] = problem_.right_boundary(t);
  for (int e = 1; e < K; ++e) {
    u_hat[e] = flux_.orientation == Orientation::minus_plus ? u.right_trace(e - 1)
                                                            : u.left_trace(e);
  }
  DgField p(mesh_, order_);
  for (int j = 0; j < K; ++j) {
    const double scale = 2.0 / mesh_->width(j);
    for (int m = 0; m < M; ++m) {
      double acc = u_hat[j + 1] * basis_.right_value(m) - u_hat[j] * basis_.left_value(m);
      for (int n = 0; n < M; ++n) acc -= u.coeff(j, n) * basis_.stiffness(n, m);
      p.coeff(j, m) = scale * se * acc;
    }
  }
  return p;
}

DgField SemiDiscrete::compute_q(const DgField& p) const {
  if (problem_.classical_diffusion) return p;
  return fast_ ? op_->fast_apply_uniform(p) : op_->apply(p);
}

double SemiDiscrete::global_lambda(const DgField& u, double t) const {
  double lam = std::max(std::abs(problem_.flux.df(problem_.left_boundary(t))),
                        std::abs(problem_.flux.df(problem_.right_boundary(t))));
  for (int j = 0; j < mesh_->size(); ++j) {
    lam = std::max(lam, std::abs(problem_.flux.df(u.left_trace(j))));
    lam = std::max(lam, std::abs(problem_.flux.df(u.right_trace(j))));
    for (double xi : volume_rule_.nodes) lam = std::max(lam, std::abs(problem_.flux.df(u.value(j, xi))));
  }
  return lam;
}

SemiDiscrete::Traces SemiDiscrete::interface_fluxes(const DgField& u, const DgField& q,
                                                    double t) const {
  const int K = mesh_->size();
  Traces tr;
  tr.f_hat.assign(K + 1, 0.0);
  tr.q_hat.assign(K + 1, 0.0);
  const double ua = problem_.left_boundary(t);
  const double ub = problem_.right_boundary(t);

  if (!problem_.flux.vanishes) {
    const double lam = flux_.convective == ConvectiveFlux::lax_friedrichs_global && !flux_.lambda
                           ? global_lambda(u, t)
                           : 0.0;
    long fallbacks = 0;
    for (int e = 0; e <= K; ++e) {
      const double um = e == 0 ? ua : u.right_trace(e - 1);
      const double up = e == K ? ub : u.left_trace(e);
      bool fell = false;
      tr.f_hat[e] = numerical_flux(flux_, problem_.flux, um, up, lam, &fell);
      fallbacks += fell ? 1 : 0;
    }
    if (fallbacks) fallbacks_ += fallbacks;
  }

  const bool mp = flux_.orientation == Orientation::minus_plus;
  for (int e = 1; e < K; ++e) tr.q_hat[e] = mp ? q.left_trace(e) : q.right_trace(e - 1);
  if (mp) {
    tr.q_hat[0] = q.left_trace(0);
    tr.q_hat[K] = q.right_trace(K - 1) +
                  flux_.beta / mesh_->width(K - 1) * (ub - u.right_trace(K - 1));
  } else {
    tr.q_hat[0] = q.left_trace(0) + flux_.beta / mesh_->width(0) * (u.left_trace(0) - ua);
    tr.q_hat[K] = q.right_trace(K - 1);
  }
  return tr;
}

DgField SemiDiscrete::rhs(const DgField& u, double t) const {
  check_field(u);
  const int K = mesh_->size();
  const int M = order_ + 1;
  const double se = std::sqrt(problem_.epsilon);
  const DgField p = compute_p(u, t);
  if (!p.finite()) throw InstabilityError("non-finite auxiliary variable p", t);
  std::optional<DgField> q_or;
  try {
    q_or = compute_q(p);
  } catch (const InvalidArgument&) {
    // The operator product overflowed; p itself was finite.
    throw InstabilityError("non-finite auxiliary variable q", t);
  }
  const DgField& q = *q_or;
  const Traces tr = interface_fluxes(u, q, t);

  DgField out(mesh_, order_);
  std::vector<double> fvals(volume_rule_.size());
  for (int j = 0; j < K; ++j) {
    if (!problem_.flux.vanishes) {
      for (std::size_t iq = 0; iq < volume_rule_.size(); ++iq) {
        double uq = 0.0;
        for (int n = 0; n < M; ++n) uq += u.coeff(j, n) * volume_phi_[iq][n];
        fvals[iq] = problem_.flux.f(uq);
      }
    }
    const double scale = 2.0 / mesh_->width(j);
    for (int m = 0; m < M; ++m) {
      double acc = -(tr.f_hat[j + 1] * basis_.right_value(m) - tr.f_hat[j] * basis_.left_value(m));
      acc += se * (tr.q_hat[j + 1] * basis_.right_value(m) - tr.q_hat[j] * basis_.left_value(m));
      if (!problem_.flux.vanishes) {
        for (std::size_t iq = 0; iq < volume_rule_.size(); ++iq) {
          acc += volume_rule_.weights[iq] * fvals[iq] * volume_dphi_[iq][m];
        }
      }
      for (int n = 0; n < M; ++n) acc -= se * q.coeff(j, n) * basis_.stiffness(n, m);
      out.coeff(j, m) = scale * acc;
    }
  }
  for (std::size_t i = 0; i < source_fields_.size(); ++i) {
    const double factor = problem_.source[i].time_factor(t);
    if (factor != 0.0) out.coeffs() += factor * source_fields_[i].coeffs();
  }
  if (!out.finite()) throw InstabilityError("non-finite semidiscrete residual", t);
  return out;
}

double SemiDiscrete::mass_balance(const DgField& u, double t) const {
  check_field(u);
  const int K = mesh_->size();
  const DgField q = compute_q(compute_p(u, t));
  const Traces tr = interface_fluxes(u, q, t);
  double balance =
      tr.f_hat[0] - tr.f_hat[K] + std::sqrt(problem_.epsilon) * (tr.q_hat[K] - tr.q_hat[0]);
  const double phi0_integral = std::sqrt(2.0);  // int_{-1}^{1} phi_0
  for (std::size_t i = 0; i < source_fields_.size(); ++i) {
    const double factor = problem_.source[i].time_factor(t);
    for (int j = 0; j < K; ++j) {
      balance += factor * 0.5 * mesh_->width(j) * phi0_integral * source_fields_[i].coeff(j, 0);
    }
  }
  return balance;
}

DgField compute_p(const DgField& u, double t, const ProblemSpec& prob, const FluxSpec& spec) {
  ProblemSpec diffusion_only = prob;
  diffusion_only.classical_diffusion = true;
  diffusion_only.alpha = 2.0;
  diffusion_only.source.clear();
  return SemiDiscrete(diffusion_only, spec, u.mesh_ptr(), u.order()).compute_p(u, t);
}

DgField semidiscrete_rhs(const DgField& u, double t, const ProblemSpec& prob,
                         const FluxSpec& spec, std::shared_ptr<const RieszOperator> op) {
  return SemiDiscrete(prob, spec, u.mesh_ptr(), u.order(), std::move(op)).rhs(u, t);
}

}  // namespace fracldg
