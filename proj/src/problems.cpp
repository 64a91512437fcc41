#include "fracldg/problems.hpp"

#include <cmath>
#include <memory>

#include "fracldg/errors.hpp"

namespace fracldg {

ExampleId parse_example_id(const std::string& name) {
  if (name == "example1") return ExampleId::example1;
  if (name == "example2") return ExampleId::example2;
  if (name == "example3") return ExampleId::example3;
  throw InvalidArgument("unknown problem id '" + name + "'");
}

std::string to_string(ExampleId id) {
  switch (id) {
    case ExampleId::example1: return "example1";
    case ExampleId::example2: return "example2";
    case ExampleId::example3: return "example3";
  }
  return "?";
}

double BuiltinProblem::frac_laplacian_u0(double x) const {
  if (spec.classical_diffusion) return -u0.derivative().derivative()(x);
  return -riesz_frac_laplacian_piecewise(spec.alpha, u0, x);
}

BuiltinProblem make_piecewise_problem(std::string id, PiecewisePoly u0, PhysicalFlux flux,
                                      double epsilon, double alpha, double a, double b,
                                      bool manufactured) {
  if (u0.empty()) throw InvalidArgument("initial data has no pieces");
  if (u0.support_lo() < a - 1e-14 || u0.support_hi() > b + 1e-14) {
    throw InvalidArgument("initial data must be supported inside the domain");
  }
  const bool classical = alpha == 2.0;
  if (!classical && !(alpha > 1.0 && alpha < 2.0)) {
    throw InvalidArgument("alpha must lie in (1, 2)");
  }
  if (manufactured && classical) {
    throw InvalidArgument("manufactured sources need a fractional alpha");
  }
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");

  BuiltinProblem p;
  p.id = std::move(id);
  p.u0 = u0;
  p.has_exact = manufactured;
  auto shared = std::make_shared<const PiecewisePoly>(std::move(u0));

  ProblemSpec& s = p.spec;
  s.name = p.id;
  s.flux = flux;
  s.epsilon = epsilon;
  s.alpha = alpha;
  s.a = a;
  s.b = b;
  s.classical_diffusion = classical;
  s.u0 = [shared](double x) { return (*shared)(x); };
  if (manufactured) {
    auto derivative = std::make_shared<const PiecewisePoly>(shared->derivative());
    // u = e^{-t} u0: g = e^{-t}(-u0 + eps (-Delta)^{alpha/2} u0) + f(u)_x.
    s.source.push_back({[](double t) { return std::exp(-t); },
                        [shared, alpha, epsilon](double x) {
                          return -(*shared)(x) -
                                 epsilon * riesz_frac_laplacian_piecewise(alpha, *shared, x);
                        }});
    if (flux.name == "burgers") {
      s.source.push_back({[](double t) { return std::exp(-2.0 * t); },
                          [shared, derivative](double x) { return (*shared)(x) * (*derivative)(x); }});
    } else if (flux.name == "linear") {
      const double speed = flux.df(0.0);
      s.source.push_back({[](double t) { return std::exp(-t); },
                          [derivative, speed](double x) { return speed * (*derivative)(x); }});
    } else if (!flux.vanishes) {
      throw InvalidArgument("manufactured sources support zero, burgers and linear fluxes");
    }
    s.exact = [shared](double x, double t) { return std::exp(-t) * (*shared)(x); };
  }
  return p;
}

namespace {

std::vector<double> power(const std::vector<double>& base, int n) {
  std::vector<double> out{1.0};
  for (int i = 0; i < n; ++i) out = poly::multiply(out, base);
  return out;
}

}  // namespace

BuiltinProblem make_example(ExampleId id, double alpha, std::optional<double> epsilon) {
  const bool classical = alpha == 2.0;
  if (classical && id != ExampleId::example3) {
    throw InvalidArgument("alpha = 2 is only available for example3");
  }
  if (!classical && !(alpha > 1.0 && alpha < 2.0)) {
    throw InvalidArgument("alpha must lie in (1, 2)");
  }
  BuiltinProblem p;
  switch (id) {
    case ExampleId::example1: {
      // x^6 (1 - x)^6 = (x - x^2)^6
      const PiecewisePoly u0 = PiecewisePoly::single(0.0, 1.0, power({0.0, 1.0, -1.0}, 6));
      p = make_piecewise_problem("example1", u0, PhysicalFlux::zero(), epsilon.value_or(1.0),
                                 alpha, 0.0, 1.0, true);
      p.default_final_time = 0.5;
      p.default_snapshot_interval = 0.05;
      break;
    }
    case ExampleId::example2: {
      // (1 - x^2)^4 / 10 = (y (2 - y))^4 / 10 with y = x + 1
      std::vector<double> c = power({0.0, 2.0, -1.0}, 4);
      for (double& v : c) v /= 10.0;
      const PiecewisePoly u0 = PiecewisePoly::single(-1.0, 1.0, c);
      p = make_piecewise_problem("example2", u0, PhysicalFlux::burgers(), epsilon.value_or(1.0),
                                 alpha, -2.0, 2.0, true);
      p.default_final_time = 0.5;
      p.default_snapshot_interval = 0.05;
      break;
    }
    case ExampleId::example3: {
      const PiecewisePoly u0 = PiecewisePoly::single(-1.0, 0.0, {0.5});
      p = make_piecewise_problem("example3", u0, PhysicalFlux::burgers(), epsilon.value_or(0.04),
                                 alpha, -2.0, 2.0, false);
      p.default_final_time = 1.0;
      p.default_snapshot_interval = 0.25;
      break;
    }
  }
  return p;
}

double source_eval(const BuiltinProblem& prob, double x, double t) {
  return prob.spec.source_value(x, t);
}

std::optional<double> exact_eval(const BuiltinProblem& prob, double x, double t) {
  if (!prob.has_exact || !prob.spec.exact) return std::nullopt;
  return prob.spec.exact(x, t);
}

}  // namespace fracldg
