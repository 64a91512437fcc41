#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracldg/errors.hpp"
#include "fracldg/harness.hpp"
#include "fracldg/selftest.hpp"

using namespace fracldg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fracldg_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

// The ConfigError field of a rejected config, or "" when it parses.
std::string rejected_field(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Config, MinimalConfigFillsDefaults) {
  const RunConfig cfg =
      parse_config_text(R"({"problem": "example1", "alpha": 1.5, "K": 20, "order": 2, "T": 0.5})");
  EXPECT_EQ(cfg.problem, "example1");
  EXPECT_EQ(cfg.elements, 20);
  EXPECT_EQ(cfg.order, 2);
  EXPECT_EQ(cfg.final_time, 0.5);
  EXPECT_EQ(cfg.flux.beta, 1.0);
  EXPECT_EQ(cfg.flux.orientation, Orientation::minus_plus);
  EXPECT_EQ(cfg.flux.convective, ConvectiveFlux::godunov);
  EXPECT_FALSE(cfg.flux_given);
  EXPECT_EQ(cfg.effective_cfl(), default_cfl(2));
  EXPECT_NEAR(cfg.effective_snapshot_interval(), 0.05, 1e-15);
  EXPECT_FALSE(cfg.fast_apply);
}

TEST(Config, LongAndShortKeysAgree) {
  const RunConfig a =
      parse_config_text(R"({"problem": "example2", "alpha": 1.3, "K": 12, "order": 1, "T": 0.2})");
  const RunConfig b = parse_config_text(
      R"({"problem": "example2", "alpha": 1.3, "elements": 12, "order": 1, "final_time": 0.2})");
  EXPECT_EQ(a.elements, b.elements);
  EXPECT_EQ(a.final_time, b.final_time);
  EXPECT_EQ(rejected_field(
                R"({"problem": "example2", "alpha": 1.3, "K": 12, "elements": 12, "order": 1, "T": 0.2})"),
            "elements");
}

TEST(Config, FieldNamedInErrors) {
  const std::string base = R"("problem": "example1", "order": 2, "T": 0.5)";
  EXPECT_EQ(rejected_field("{" + base + R"(, "alpha": 2.5, "K": 20})"), "alpha");
  EXPECT_EQ(rejected_field("{" + base + R"(, "alpha": 1.5, "K": 0})"), "K");
  EXPECT_EQ(rejected_field("{" + base + R"(, "alpha": 1.5, "K": 20, "colour": 1})"), "colour");
  EXPECT_EQ(rejected_field("{" + base + R"(, "alpha": 1.5, "K": 20, "cfl": 1.5})"), "cfl");
  EXPECT_EQ(rejected_field("{" + base + R"(, "alpha": 1.5, "K": 20, "beta": 0})"), "beta");
  EXPECT_EQ(rejected_field("{" + base + R"(, "alpha": 1.5, "K": 20, "flux": "roe"})"), "flux");
  EXPECT_EQ(rejected_field("{" + base + R"(, "alpha": 1.5, "K": 20, "domain": [0, 1]})"), "domain");
  EXPECT_EQ(rejected_field(R"({"problem": "example1", "alpha": 1.5, "K": 20, "T": 0.5})"), "order");
  EXPECT_EQ(rejected_field("{" + base + R"(, "alpha": 2.0, "K": 20})"), "alpha");
  EXPECT_EQ(rejected_field(R"({"problem": "example3", "alpha": 2.0, "K": 20, "order": 1, "T": 0.1})"), "");
}

TEST(Config, MalformedJsonIsConfigError) {
  EXPECT_THROW(parse_config_text("{\"problem\": "), ConfigError);
  EXPECT_THROW(parse_config_text("[1, 2]"), ConfigError);
  EXPECT_THROW(parse_config("/nonexistent/fracldg.json"), ConfigError);
}

TEST(Config, CustomProblem) {
  const RunConfig cfg = parse_config_text(R"({
    "problem": "custom", "alpha": 1.4, "K": 16, "order": 2, "T": 0.1, "domain": [-1, 1],
    "custom": {"breakpoints": [-0.5, 0.5], "pieces": [[0.0, 0.0, 1.0, -1.0]], "flux": "burgers",
               "manufactured": true}})");
  const BuiltinProblem prob = build_problem(cfg);
  EXPECT_TRUE(prob.has_exact);
  EXPECT_EQ(prob.spec.a, -1.0);
  EXPECT_NEAR(prob.u0(0.0), 0.25 - 0.125, 1e-15);
  EXPECT_EQ(prob.u0(0.7), 0.0);
}

TEST(ObservedOrder, LogRatio) {
  EXPECT_NEAR(observed_order(1.0e-3, 2.5e-4, 10, 20), 2.0, 1e-12);
  // Unequal ratios use log(30 / 20).
  const double e20 = 3.24e-7, e30 = 1.42e-7;
  EXPECT_NEAR(observed_order(e20, e30, 20, 30), std::log(e20 / e30) / std::log(1.5), 1e-12);
  EXPECT_NEAR(observed_order(e20, e30, 20, 30), 2.03, 0.01);
}

TEST(Convergence, ReportFormatsAndReproducibility) {
  ConvergenceOptions opts;
  opts.problem = ExampleId::example1;
  opts.alphas = {1.5};
  opts.orders = {1};
  opts.elements = {4, 8};
  opts.final_time = 0.01;
  const ConvergenceReport a = run_convergence(opts);
  const ConvergenceReport b = run_convergence(opts);
  EXPECT_EQ(a.csv(), b.csv());
  ASSERT_EQ(a.rows.size(), 2u);
  EXPECT_FALSE(a.rows[0].observed_order.has_value());
  ASSERT_TRUE(a.rows[1].observed_order.has_value());
  EXPECT_TRUE(std::isfinite(*a.rows[1].observed_order));
  EXPECT_GT(a.rows[0].l2_error, 0.0);
  EXPECT_EQ(a.flux, "godunov");
  const ConvergenceRow* row = a.find(1.5, 1, 8);
  ASSERT_NE(row, nullptr);
  EXPECT_EQ(row->elements, 8);
  EXPECT_EQ(a.find(1.5, 2, 8), nullptr);

  std::istringstream csv(a.csv());
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "problem,flux,alpha,order,elements,l2_error,observed_order,status");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 2);
  EXPECT_NE(a.aligned_text().find("alpha"), std::string::npos);

  const fs::path dir = scratch_dir("report");
  write_convergence_report(a, (dir / "conv.csv").string());
  EXPECT_EQ(slurp(dir / "conv.csv"), a.csv());
  EXPECT_EQ(slurp(dir / "conv.txt"), a.aligned_text());
  fs::remove_all(dir);
}

TEST(Convergence, DefaultFluxPerProblem) {
  ConvergenceOptions opts;
  opts.problem = ExampleId::example2;
  opts.alphas = {1.5};
  opts.orders = {0};
  opts.elements = {4};
  opts.final_time = 0.01;
  EXPECT_EQ(run_convergence(opts).flux, "upwind");
}

TEST(Convergence, FailedRowsContinue) {
  ConvergenceOptions opts;
  opts.problem = ExampleId::example1;
  opts.alphas = {1.5};
  opts.orders = {2};
  opts.elements = {10, 20, 40};
  opts.final_time = 0.2;
  opts.cfl = 0.9;
  const ConvergenceReport r = run_convergence(opts);
  ASSERT_EQ(r.rows.size(), 3u);
  for (const ConvergenceRow& row : r.rows) {
    EXPECT_TRUE(row.failed);
    EXPECT_FALSE(row.note.empty());
    EXPECT_FALSE(row.observed_order.has_value());
  }
  EXPECT_NE(r.csv().find(",failed"), std::string::npos);
}

TEST(Convergence, EmptyListsRejected) {
  ConvergenceOptions opts;
  opts.alphas = {1.5};
  opts.orders = {};
  opts.elements = {10};
  EXPECT_THROW(run_convergence(opts), InvalidArgument);
}

TEST(Convergence, ProblemWithoutExactSolutionFailsRow) {
  const ConvergenceRow row = run_convergence_cell(ExampleId::example3, 1.5, 1, 10, FluxSpec{}, 0.01, std::nullopt);
  EXPECT_TRUE(row.failed);
}

TEST(Solve, ZeroFinalTimeWritesProjection) {
  const RunConfig cfg =
      parse_config_text(R"({"problem": "example2", "alpha": 1.5, "K": 10, "order": 2, "T": 0})");
  const fs::path dir = scratch_dir("t0");
  std::ostringstream log;
  const SolveSummary s = run_solve(cfg, dir.string(), log);
  EXPECT_TRUE(s.completed);
  EXPECT_EQ(s.steps, 0);
  ASSERT_TRUE(s.l2_error.has_value());
  const BuiltinProblem prob = build_problem(cfg);
  const DgField proj = l2_project([&](double x) { return prob.u0(x); }, make_mesh(-2.0, 2.0, 10), 2);
  std::ostringstream expected;
  write_snapshot_csv(proj, expected);
  EXPECT_EQ(slurp(dir / "snapshot_0000.csv"), expected.str());
  EXPECT_TRUE(fs::exists(dir / "steps.csv"));
  EXPECT_TRUE(fs::exists(dir / "snapshots.csv"));
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  fs::remove_all(dir);
}

TEST(Solve, IdenticalConfigsGiveIdenticalBytes) {
  const RunConfig cfg = parse_config_text(
      R"({"problem": "example3", "alpha": 1.4, "K": 16, "order": 1, "T": 0.05, "snapshot_interval": 0.025})");
  const fs::path a = scratch_dir("rep_a"), b = scratch_dir("rep_b");
  std::ostringstream log;
  run_solve(cfg, a.string(), log);
  run_solve(cfg, b.string(), log);
  for (const char* name : {"snapshot_0000.csv", "snapshot_0001.csv", "snapshot_0002.csv", "steps.csv",
                           "snapshots.csv", "summary.json"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Solve, Example1WithinReferenceBand) {
  // Reference error for alpha = 1.5, k = 3, K = 40: 3.85e-11.
  const RunConfig cfg =
      parse_config_text(R"({"problem": "example1", "alpha": 1.5, "K": 40, "order": 3, "T": 0.5})");
  const fs::path dir = scratch_dir("ex1");
  std::ostringstream log;
  const SolveSummary s = run_solve(cfg, dir.string(), log);
  ASSERT_TRUE(s.completed);
  ASSERT_TRUE(s.l2_error.has_value());
  EXPECT_LE(*s.l2_error, 3.85e-11 * 10);
  EXPECT_GE(*s.l2_error, 3.85e-11 / 10);
  EXPECT_NE(slurp(dir / "summary.json").find("\"l2_error\""), std::string::npos);
  fs::remove_all(dir);
}

TEST(Solve, InstabilityIsReportedWithPartialOutput) {
  const RunConfig cfg = parse_config_text(
      R"({"problem": "example1", "alpha": 1.5, "K": 20, "order": 2, "T": 0.5, "cfl": 0.9})");
  const fs::path dir = scratch_dir("unstable");
  std::ostringstream log;
  const SolveSummary s = run_solve(cfg, dir.string(), log);
  EXPECT_FALSE(s.completed);
  EXPECT_FALSE(s.l2_error.has_value());
  EXPECT_NE(log.str().find("instability"), std::string::npos);
  EXPECT_NE(slurp(dir / "summary.json").find("\"completed\": false"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Solve, Example3TotalVariationDecreasesWithAlpha) {
  // Regression values at K = 80, k = 2, T = 1. Fine-grid runs (K = 160) give
  // the same ordering: 0.97999, 0.94248, 0.93598 for alpha 1.1, 1.5, 1.8.
  const double frozen[] = {1.0498495847378002, 0.9424045259420377, 0.9359479955558815};
  const double alphas[] = {1.1, 1.5, 1.8};
  double prev = 1e300;
  for (int i = 0; i < 3; ++i) {
    RunConfig cfg = parse_config_text(
        R"({"problem": "example3", "alpha": 1.5, "K": 80, "order": 2, "T": 1.0, "fast_apply": true})");
    cfg.alpha = alphas[i];
    const fs::path dir = scratch_dir("tv");
    std::ostringstream log;
    const SolveSummary s = run_solve(cfg, dir.string(), log);
    ASSERT_TRUE(s.completed);
    EXPECT_NEAR(s.total_variation, frozen[i], 1e-6 * frozen[i]) << alphas[i];
    EXPECT_LT(s.total_variation, prev) << alphas[i];
    prev = s.total_variation;
    fs::remove_all(dir);
  }
}

TEST(TotalVariation, StepFunction) {
  const MeshPtr mesh = make_mesh(-2.0, 2.0, 4);
  const DgField u = l2_project([](double x) { return (x >= -1.0 && x <= 0.0) ? 0.5 : 0.0; }, mesh, 0);
  EXPECT_NEAR(total_variation(u), 1.0, 1e-14);
}

TEST(Selftest, AllChecksPassAcrossSeeds) {
  for (std::uint64_t seed : {0u, 1u, 7u, 42u, 1234u}) {
    std::ostringstream out;
    const std::vector<CheckResult> results = run_selftest(seed, out);
    EXPECT_FALSE(results.empty());
    for (const CheckResult& r : results) EXPECT_TRUE(r.passed) << "seed " << seed << ": " << format_check(r);
  }
}

TEST(Selftest, FaultInjectionIsDetected) {
  const RieszOperator op = RieszOperator::assemble(make_mesh(0.0, 1.0, 10), 2, 0.5);
  EXPECT_TRUE(check_adjoint(op.weak_left(), op.weak_right(), "adjoint").passed);
  Eigen::MatrixXd corrupted = op.weak_left();
  corrupted(4, 11) += 1e-6;
  const CheckResult r = check_adjoint(corrupted, op.weak_right(), "adjoint");
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(format_check(r).rfind("FAIL", 0), 0u);
}
