#pragma once

#include <array>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include "fracldg/field.hpp"
#include "fracldg/ldg.hpp"

namespace fracldg {

/// Carpenter-Kennedy five-stage, fourth-order low-storage Runge-Kutta:
///   k_i = a_i k_{i-1} + dt L(p_{i-1}, t + c_i dt),  p_i = p_{i-1} + b_i k_i.
struct LserkScheme {
  static constexpr int stages = 5;
  static const std::array<double, 5> a;
  static const std::array<double, 5> b;
  static const std::array<double, 5> c;
};

struct StepControl {
  double cfl = 0.1;
  double h_min = 0.0;
  double alpha = 1.5;
  double max_wave_speed = 0.0;
  double final_time = 0.0;
  double snapshot_interval = 0.0;  // <= 0: initial and final states only
  /// Instability once the L2 norm exceeds growth_limit times the larger of
  /// the initial and first-step norms; <= 0 disables the check.
  double growth_limit = 1e6;

  void validate() const;
};

/// dt = C min(h_min^alpha, h_min / max(|f'|, 1e-14)).
double cfl_dt(const StepControl& ctrl);

/// Default C for polynomial order k: 0.1 / (k + 1)^2. The boundary penalty
/// contributes an eigenvalue of size ~ eps beta (k + 1)^2 / h^2, which a flat
/// C = 0.1 does not cover for k >= 2.
double default_cfl(int order);

/// One LSERK step for any vector-space state with `+` and scalar `*`.
template <class State, class Rhs>
  requires(!std::is_same_v<State, DgField>)
State lserk_step(const Rhs& rhs, const State& u, double t, double dt) {
  State p = u;
  State k = u * 0.0;
  for (int i = 0; i < LserkScheme::stages; ++i) {
    k = k * LserkScheme::a[i] + rhs(p, t + LserkScheme::c[i] * dt) * dt;
    p = p + k * LserkScheme::b[i];
  }
  return p;
}

/// DgField specialization working in place on coefficient buffers.
DgField lserk_step(const std::function<DgField(const DgField&, double)>& rhs, const DgField& u,
                   double t, double dt);

struct StepRecord {
  long step;
  double t;
  double dt;
  double l2_norm;
};

struct Snapshot {
  double t;
  DgField u;
};

struct IntegrationResult {
  DgField final_state;
  std::vector<Snapshot> snapshots;
  std::vector<StepRecord> log;
  bool completed = true;
  std::string failure;  // set when an instability stopped the run
  double failure_time = 0.0;
};

/// Projects u0, then steps with dt from the CFL rule (evaluated on the
/// projected data) to exactly T, landing on every snapshot time. Snapshots
/// are taken at i * interval for i = 0..floor(T / interval), or at 0 and T
/// when no interval is set. The log has
/// one row for the initial state (step 0) and one per step. On instability
/// the partial result is returned with completed = false.
IntegrationResult integrate(const SemiDiscrete& scheme, const StepControl& ctrl);

/// max |f'| over the projected data sampled at quadrature points and traces.
double max_wave_speed(const SemiDiscrete& scheme, const DgField& u);

void write_step_log_csv(const std::vector<StepRecord>& log, const std::string& path);

}  // namespace fracldg
