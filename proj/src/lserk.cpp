#include "fracldg/lserk.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "fracldg/errors.hpp"

namespace fracldg {

const std::array<double, 5> LserkScheme::a = {
    0.0,
    -567301805773.0 / 1357537059087.0,
    -2404267990393.0 / 2016746695238.0,
    -3550918686646.0 / 2091501179385.0,
    -1275806237668.0 / 842570457699.0,
};

const std::array<double, 5> LserkScheme::b = {
    1432997174477.0 / 9575080441755.0,
    5161836677717.0 / 13612068292357.0,
    1720146321549.0 / 2090206949498.0,
    3134564353537.0 / 4481467310338.0,
    2277821191437.0 / 14882151754819.0,
};

const std::array<double, 5> LserkScheme::c = {
    0.0,
    1432997174477.0 / 9575080441755.0,
    2526269341429.0 / 6820363962896.0,
    2006345519317.0 / 3224310063776.0,
    2802321613138.0 / 2924317926251.0,
};

void StepControl::validate() const {
  if (!(cfl > 0.0 && cfl < 1.0)) throw InvalidArgument("cfl constant must lie in (0, 1)");
  if (!(h_min > 0.0)) throw InvalidArgument("h_min must be positive");
  if (!(alpha > 1.0 && alpha <= 2.0)) throw InvalidArgument("alpha must lie in (1, 2]");
  if (!(final_time >= 0.0) || !std::isfinite(final_time)) {
    throw InvalidArgument("final time must be >= 0");
  }
  if (!std::isfinite(snapshot_interval)) throw InvalidArgument("snapshot interval not finite");
}

double cfl_dt(const StepControl& ctrl) {
  ctrl.validate();
  const double diffusive = std::pow(ctrl.h_min, ctrl.alpha);
  const double convective = ctrl.h_min / std::max(std::abs(ctrl.max_wave_speed), 1e-14);
  return ctrl.cfl * std::min(diffusive, convective);
}

double default_cfl(int order) { return 0.1 / ((order + 1.0) * (order + 1.0)); }

DgField lserk_step(const std::function<DgField(const DgField&, double)>& rhs, const DgField& u,
                   double t, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("lserk_step: dt must be positive");
  DgField p = u;
  Eigen::VectorXd k = Eigen::VectorXd::Zero(u.coeffs().size());
  for (int i = 0; i < LserkScheme::stages; ++i) {
    const DgField r = rhs(p, t + LserkScheme::c[i] * dt);
    k = LserkScheme::a[i] * k + dt * r.coeffs();
    p.coeffs() += LserkScheme::b[i] * k;
  }
  if (!p.finite()) throw InstabilityError("non-finite state after time step", t + dt);
  return p;
}

double max_wave_speed(const SemiDiscrete& scheme, const DgField& u) {
  const ProblemSpec& prob = scheme.problem();
  if (prob.flux.vanishes) return 0.0;
  double speed = 0.0;
  for (const auto& [x, v] : snapshot_samples(u)) {
    (void)x;
    speed = std::max(speed, std::abs(prob.flux.df(v)));
  }
  for (int j = 0; j < u.elements(); ++j) {
    speed = std::max(speed, std::abs(prob.flux.df(u.left_trace(j))));
    speed = std::max(speed, std::abs(prob.flux.df(u.right_trace(j))));
  }
  return speed;
}

IntegrationResult integrate(const SemiDiscrete& scheme, const StepControl& ctrl_in) {
  StepControl ctrl = ctrl_in;
  ctrl.validate();
  IntegrationResult result{scheme.initial_condition(), {}, {}, true, {}, 0.0};
  DgField u = result.final_state;
  ctrl.max_wave_speed = max_wave_speed(scheme, u);
  const double dt = cfl_dt(ctrl);
  const double T = ctrl.final_time;
  const auto rhs = [&scheme](const DgField& v, double t) { return scheme.rhs(v, t); };

  // Snapshot times i * interval, i = 0..floor(T / interval); without an
  // interval, the initial and final states.
  std::vector<double> snap_times;
  if (ctrl.snapshot_interval > 0.0) {
    const long count = static_cast<long>(std::floor(T / ctrl.snapshot_interval * (1 + 1e-12)));
    for (long i = 0; i <= count; ++i) snap_times.push_back(std::min(T, i * ctrl.snapshot_interval));
  } else {
    snap_times.push_back(0.0);
    if (T > 0.0) snap_times.push_back(T);
  }
  std::size_t next_snap = 0;

  double t = 0.0;
  long step = 0;
  result.log.push_back({0, 0.0, 0.0, l2_norm(u)});
  double reference = result.log.front().l2_norm;
  const double tol = 1e-12 * std::max(T, 1.0);
  while (next_snap < snap_times.size() && snap_times[next_snap] <= t + tol) {
    result.snapshots.push_back({t, u});
    ++next_snap;
  }
  try {
    while (t < T - tol) {
      const double target = next_snap < snap_times.size() ? snap_times[next_snap] : T;
      double h = std::min(dt, target - t);
      // Avoid a sliver step just before a landing time.
      if (target - (t + h) < 1e-10 * dt) h = target - t;
      u = lserk_step(rhs, u, t, h);
      const double norm = l2_norm(u);
      // Finite coefficients can still overflow the norm.
      if (!std::isfinite(norm)) throw InstabilityError("L2 norm overflow after time step", t + h);
      if (step == 0) reference = std::max(reference, norm);
      if (ctrl.growth_limit > 0.0 && reference > 0.0 && norm > ctrl.growth_limit * reference) {
        throw InstabilityError("L2 norm grew beyond the growth limit", t + h);
      }
      const bool landed = h == target - t;
      t = landed ? target : t + h;
      ++step;
      result.log.push_back({step, t, h, norm});
      while (next_snap < snap_times.size() && snap_times[next_snap] <= t + tol) {
        result.snapshots.push_back({snap_times[next_snap], u});
        ++next_snap;
      }
    }
  } catch (const InstabilityError& e) {
    result.completed = false;
    result.failure = e.what();
    result.failure_time = e.time();
  }
  result.final_state = u;
  return result;
}

void write_step_log_csv(const std::vector<StepRecord>& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "step,t,dt,l2_norm\n";
  for (const StepRecord& r : log) {
    out << r.step << ',' << format_real(r.t) << ',' << format_real(r.dt) << ','
        << format_real(r.l2_norm) << '\n';
  }
}

}  // namespace fracldg
