#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracldg/ldg.hpp"
#include "fracldg/lserk.hpp"
#include "fracldg/problems.hpp"

namespace fracldg {

/// Piecewise-polynomial initial data given in a config file.
struct CustomProblemConfig {
  std::vector<double> breakpoints;
  std::vector<std::vector<double>> pieces;  // monomial coefficients about each piece's left end
  std::string flux = "zero";                // zero | burgers | linear
  double speed = 1.0;                       // linear flux speed
  bool manufactured = false;                // exact solution e^{-t} u0 with matching source
};

struct RunConfig {
  std::string problem;  // example1 | example2 | example3 | custom
  std::optional<CustomProblemConfig> custom;
  double alpha = 0.0;
  std::optional<double> epsilon;
  std::optional<std::pair<double, double>> domain;  // custom problems only
  int elements = 0;
  int order = 0;
  FluxSpec flux;
  bool flux_given = false;
  std::optional<double> cfl;  // default_cfl(order) when absent
  double final_time = 0.0;
  std::optional<double> snapshot_interval;  // default T / 10
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  bool fast_apply = false;
  bool dump_operator = false;

  double effective_cfl() const;
  double effective_snapshot_interval() const;
};

/// Reads and validates a JSON config. Unknown keys, missing required keys
/// and out-of-range values raise ConfigError naming the field.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text);

BuiltinProblem build_problem(const RunConfig& cfg);

struct SolveSummary {
  bool completed = true;
  std::string failure;
  double failure_time = 0.0;
  double final_time = 0.0;
  long steps = 0;
  double dt = 0.0;
  double initial_l2 = 0.0;
  double final_l2 = 0.0;
  std::optional<double> l2_error;
  double total_variation = 0.0;
  long upwind_fallbacks = 0;
  std::vector<std::string> files;
};

/// Solves one configuration. Writes into cfg.output_dir (or `out_dir`):
/// snapshot_NNNN.csv (`x,u`), snapshots.csv (index, t, file), steps.csv
/// (`step,t,dt,l2_norm`) and summary.json. On instability the partial
/// outputs are still written and completed = false.
SolveSummary run_solve(const RunConfig& cfg, const std::optional<std::string>& out_dir,
                       std::ostream& log);

/// Total variation of the sampled snapshot values.
double total_variation(const DgField& u);

struct ConvergenceRow {
  double alpha = 0.0;
  int order = 0;
  int elements = 0;
  double l2_error = 0.0;
  std::optional<double> observed_order;
  bool failed = false;
  std::string note;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::string problem;
  std::string flux;
  std::vector<ConvergenceRow> rows;

  std::string csv() const;
  /// One block per alpha; rows are orders, columns error and order per K.
  std::string aligned_text() const;
  const ConvergenceRow* find(double alpha, int order, int elements) const;
};

/// log(e_prev / e_cur) / log(K_cur / K_prev).
double observed_order(double e_prev, double e_cur, int k_prev, int k_cur);

struct ConvergenceOptions {
  ExampleId problem = ExampleId::example1;
  std::vector<double> alphas;
  std::vector<int> orders;
  std::vector<int> elements;
  std::optional<ConvectiveFlux> flux;  // default: upwind for example2, godunov otherwise
  std::optional<double> final_time;    // default: the problem's
  std::optional<double> cfl;
};

/// Final-time L2 error of one (alpha, k, K) cell against the exact solution.
ConvergenceRow run_convergence_cell(ExampleId problem, double alpha, int order, int elements,
                                    const FluxSpec& flux, double final_time,
                                    std::optional<double> cfl);

ConvergenceReport run_convergence(const ConvergenceOptions& opts, std::ostream* progress = nullptr);

/// Writes the CSV to `path` and the aligned table next to it with a .txt extension.
void write_convergence_report(const ConvergenceReport& report, const std::string& path);

}  // namespace fracldg
