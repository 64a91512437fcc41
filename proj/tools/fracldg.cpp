// Command-line front end. Exit codes: 0 success, 1 configuration error,
// 2 instability or other runtime failure.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fracldg/errors.hpp"
#include "fracldg/harness.hpp"
#include "fracldg/selftest.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

int cmd_solve(const std::string& config_path, const std::string& out_dir) {
  const fracldg::RunConfig cfg = fracldg::parse_config(config_path);
  const std::optional<std::string> out =
      out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir);
  const fracldg::SolveSummary summary = fracldg::run_solve(cfg, out, std::cout);
  return summary.completed ? kOk : kRuntimeError;
}

int cmd_convergence(const std::string& problem, const std::vector<double>& alphas,
                    const std::vector<int>& orders, const std::vector<int>& elements,
                    const std::string& flux, std::optional<double> final_time,
                    std::optional<double> cfl, const std::string& out) {
  fracldg::ConvergenceOptions opts;
  try {
    opts.problem = fracldg::parse_example_id(problem);
    if (!flux.empty()) opts.flux = fracldg::parse_convective_flux(flux);
  } catch (const fracldg::InvalidArgument& e) {
    throw fracldg::ConfigError(flux.empty() ? "problem" : "flux", e.what());
  }
  opts.alphas = alphas;
  opts.orders = orders;
  opts.elements = elements;
  opts.final_time = final_time;
  opts.cfl = cfl;
  for (double a : alphas) {
    if (!(a > 1.0 && a < 2.0)) throw fracldg::ConfigError("alpha", "alpha: must lie in (1, 2)");
  }
  for (int k : orders) {
    if (k < 0 || k > 10) throw fracldg::ConfigError("orders", "orders: must lie in 0..10");
  }
  for (int K : elements) {
    if (K < 1) throw fracldg::ConfigError("elements", "elements: must be >= 1");
  }
  const fracldg::ConvergenceReport report = fracldg::run_convergence(opts, &std::cerr);
  fracldg::write_convergence_report(report, out);
  std::cout << report.aligned_text();
  for (const auto& row : report.rows) {
    if (row.failed) return kRuntimeError;
  }
  return kOk;
}

int cmd_selftest(std::uint64_t seed) {
  const auto results = fracldg::run_selftest(seed, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (failed == 0 ? "selftest passed" : "selftest FAILED") << " (" << results.size() - failed
            << "/" << results.size() << ")\n";
  return failed == 0 ? kOk : kRuntimeError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local discontinuous Galerkin solver for fractional convection-diffusion"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* solve = app.add_subcommand("solve", "Run one configuration from a JSON file");
  solve->add_option("--config", config_path, "JSON config file")->required();
  solve->add_option("--out", out_dir, "Output directory (overrides output_dir)");

  std::string problem, flux, report_path;
  std::vector<double> alphas;
  std::vector<int> orders, elements;
  std::optional<double> final_time, cfl;
  auto* conv = app.add_subcommand("convergence", "Error and order table over a parameter grid");
  conv->add_option("--problem", problem, "example1 | example2")->required();
  conv->add_option("--alpha", alphas, "Comma-separated alpha values")->required()->delimiter(',');
  conv->add_option("--orders", orders, "Comma-separated polynomial orders")
      ->required()
      ->delimiter(',');
  conv->add_option("--elements", elements, "Comma-separated element counts")
      ->required()
      ->delimiter(',');
  conv->add_option("--flux", flux, "lax_friedrichs_local | lax_friedrichs_global | godunov | upwind");
  conv->add_option("--final-time", final_time, "Final time (default: the problem's)");
  conv->add_option("--cfl", cfl, "CFL constant (default 0.1 / (k + 1)^2)");
  conv->add_option("--out", report_path, "CSV path; an aligned .txt table is written next to it")
      ->required();

  std::uint64_t seed = 0;
  auto* self = app.add_subcommand("selftest", "Run the property suites");
  self->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*solve) return cmd_solve(config_path, out_dir);
    if (*conv) {
      return cmd_convergence(problem, alphas, orders, elements, flux, final_time, cfl,
                             report_path);
    }
    return cmd_selftest(seed);
  } catch (const fracldg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fracldg::InstabilityError& e) {
    std::cerr << "instability: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
