#pragma once

#include <optional>
#include <string>

#include "fracldg/frac_oracle.hpp"
#include "fracldg/ldg.hpp"

namespace fracldg {

enum class ExampleId { example1, example2, example3 };

ExampleId parse_example_id(const std::string& name);
std::string to_string(ExampleId id);

struct BuiltinProblem {
  std::string id;
  ProblemSpec spec;
  PiecewisePoly u0;                 // initial data, exact piecewise polynomial
  bool has_exact = false;           // exact solution e^{-t} u0
  double default_final_time = 0.5;
  double default_snapshot_interval = 0.05;

  /// (-Delta)^{alpha/2} u0 at x (the positive operator), from the oracle.
  double frac_laplacian_u0(double x) const;
};

/// Manufactured problem with exact solution e^{-t} u0 for a piecewise
/// polynomial u0 supported inside [a, b]; `manufactured = false` gives g = 0
/// and no exact solution. Fluxes: zero, burgers, linear.
BuiltinProblem make_piecewise_problem(std::string id, PiecewisePoly u0, PhysicalFlux flux,
                                      double epsilon, double alpha, double a, double b,
                                      bool manufactured);

/// example1: u0 = x^6 (1-x)^6 on [0, 1], f = 0, eps = 1.
/// example2: u0 = (1 - x^2)^4 / 10 on [-1, 1] inside [-2, 2], f = u^2/2, eps = 1.
/// example3: u0 = 1/2 on [-1, 0] inside [-2, 2], f = u^2/2, eps = 0.04, g = 0;
///           alpha = 2 selects classical diffusion.
/// `epsilon` overrides the diffusion coefficient (sources follow it).
BuiltinProblem make_example(ExampleId id, double alpha,
                            std::optional<double> epsilon = std::nullopt);

double source_eval(const BuiltinProblem& prob, double x, double t);
std::optional<double> exact_eval(const BuiltinProblem& prob, double x, double t);

}  // namespace fracldg
