#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fracldg/field.hpp"
#include "fracldg/mesh.hpp"
#include "fracldg/quadrature.hpp"
#include "fracldg/riesz_operator.hpp"

namespace fracldg {

/// Physical flux f with derivative. `critical_points` lists every zero of f'
/// so that Godunov extrema and single-sign checks are exact.
struct PhysicalFlux {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::vector<double> critical_points;
  bool vanishes = false;  // f == 0

  static PhysicalFlux zero();
  static PhysicalFlux burgers();  // u^2 / 2
  static PhysicalFlux linear(double speed);
};

enum class ConvectiveFlux { lax_friedrichs_local, lax_friedrichs_global, godunov, upwind };
enum class Orientation { minus_plus, plus_minus };

ConvectiveFlux parse_convective_flux(const std::string& name);
std::string to_string(ConvectiveFlux flux);
Orientation parse_orientation(const std::string& name);
std::string to_string(Orientation orientation);

struct FluxSpec {
  ConvectiveFlux convective = ConvectiveFlux::godunov;
  /// Fixed Lax-Friedrichs speed; when absent it is max|f'| over the data
  /// range (global) or over the two interface states (local).
  std::optional<double> lambda;
  double beta = 1.0;
  Orientation orientation = Orientation::minus_plus;

  void validate() const;
};

/// g(x, t) = sum_i time_factor_i(t) * spatial_i(x).
struct SourceTerm {
  std::function<double(double)> time_factor;
  ScalarFunction spatial;
};

struct ProblemSpec {
  std::string name;
  PhysicalFlux flux = PhysicalFlux::zero();
  double epsilon = 1.0;
  double alpha = 1.5;
  double a = 0.0;
  double b = 1.0;
  ScalarFunction u0;
  std::vector<SourceTerm> source;
  std::function<double(double)> left_boundary = [](double) { return 0.0; };
  std::function<double(double)> right_boundary = [](double) { return 0.0; };
  std::function<double(double, double)> exact;  // empty when unknown
  /// alpha = 2: q = p (the Riesz potential degenerates to the identity).
  bool classical_diffusion = false;

  void validate() const;
  double source_value(double x, double t) const;
};

/// Monotone two-point flux. For upwind with f' changing sign between the
/// states the Godunov value is returned and *fell_back is set.
double numerical_flux(const FluxSpec& spec, const PhysicalFlux& flux, double u_minus,
                      double u_plus, double lambda = 0.0, bool* fell_back = nullptr);

/// Semidiscrete LDG operator for one (problem, flux, mesh, order).
class SemiDiscrete {
 public:
  /// `op` may be shared between schemes; it is assembled when null (and
  /// never for classical diffusion).
  SemiDiscrete(ProblemSpec problem, FluxSpec flux, MeshPtr mesh, int order,
               std::shared_ptr<const RieszOperator> op = nullptr);

  const ProblemSpec& problem() const { return problem_; }
  const FluxSpec& flux_spec() const { return flux_; }
  const MeshPtr& mesh() const { return mesh_; }
  int order() const { return order_; }
  const std::shared_ptr<const RieszOperator>& riesz() const { return op_; }

  /// Use the FFT path for the Riesz potential (uniform meshes only).
  void set_fast_apply(bool on);

  DgField initial_condition() const;
  DgField compute_p(const DgField& u, double t) const;
  DgField compute_q(const DgField& p) const;
  DgField rhs(const DgField& u, double t) const;

  /// Right side of d/dt int u_h dx implied by the interface fluxes:
  /// f^_{1/2} - f^_{K+1/2} + sqrt(eps)(q^_{K+1/2} - q^_{1/2}) + int g.
  double mass_balance(const DgField& u, double t) const;

  long upwind_fallbacks() const { return fallbacks_.load(); }

 private:
  struct Traces {
    std::vector<double> f_hat;  // K + 1 interface values
    std::vector<double> q_hat;
  };
  Traces interface_fluxes(const DgField& u, const DgField& q, double t) const;
  double global_lambda(const DgField& u, double t) const;
  void check_field(const DgField& u) const;

  ProblemSpec problem_;
  FluxSpec flux_;
  MeshPtr mesh_;
  int order_;
  std::shared_ptr<const RieszOperator> op_;
  bool fast_ = false;
  LegendreBasis basis_;
  QuadratureRule volume_rule_;
  std::vector<std::vector<double>> volume_phi_;   // [q][m]
  std::vector<std::vector<double>> volume_dphi_;  // [q][m]
  std::vector<DgField> source_fields_;
  mutable std::atomic<long> fallbacks_{0};
};

/// Free-function forms; each call builds a scheme around `op`.
DgField compute_p(const DgField& u, double t, const ProblemSpec& prob, const FluxSpec& spec);
DgField semidiscrete_rhs(const DgField& u, double t, const ProblemSpec& prob,
                         const FluxSpec& spec, std::shared_ptr<const RieszOperator> op);

}  // namespace fracldg
