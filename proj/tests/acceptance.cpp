// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fracldg/harness.hpp"
#include "fracldg/selftest.hpp"

using namespace fracldg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const std::vector<int> kElements = {10, 20, 30, 40};

// Reference errors indexed by alpha, then order k = 1..3, then K = 10..40.
using ErrorTable = std::map<double, std::vector<std::vector<double>>>;

const ErrorTable kExample1Reference = {
    {1.1, {{1.64e-06, 3.98e-07, 1.73e-07, 9.60e-08},
           {1.24e-07, 1.69e-08, 5.13e-09, 2.18e-09},
           {1.14e-08, 7.23e-10, 1.41e-10, 4.44e-11}}},
    {1.3, {{1.45e-06, 3.46e-07, 1.50e-07, 8.33e-08},
           {1.19e-07, 1.55e-08, 4.64e-09, 1.96e-09},
           {1.04e-08, 6.48e-10, 1.26e-10, 3.97e-11}}},
    {1.5, {{1.35e-06, 3.24e-07, 1.42e-07, 7.90e-08},
           {1.22e-07, 1.51e-08, 4.51e-09, 1.90e-09},
           {1.04e-08, 6.28e-10, 1.22e-10, 3.85e-11}}},
    {1.8, {{1.28e-06, 3.11e-07, 1.38e-07, 7.74e-08},
           {1.40e-07, 1.51e-08, 4.48e-09, 1.89e-09},
           {1.44e-08, 6.72e-10, 1.23e-10, 3.83e-11}}},
};

const ErrorTable kExample2Reference = {
    {1.01, {{1.10e-03, 2.81e-04, 1.24e-04, 6.90e-05},
            {6.53e-05, 1.00e-05, 3.09e-06, 1.33e-06},
            {5.94e-06, 4.00e-07, 8.05e-08, 2.58e-08}}},
    {1.5, {{8.89e-04, 2.15e-04, 9.45e-05, 5.28e-05},
           {6.71e-05, 8.62e-06, 2.57e-06, 1.09e-06},
           {4.91e-06, 3.34e-07, 6.80e-08, 2.16e-08}}},
    {1.8, {{8.43e-04, 2.09e-04, 9.25e-05, 5.20e-05},
           {6.78e-05, 8.59e-06, 2.56e-06, 1.08e-06},
           {4.80e-06, 3.32e-07, 6.84e-08, 2.20e-08}}},
};

struct Outcome {
  bool passed = true;
  std::string summary;
};

void report(int id, const std::string& title, const Outcome& o, bool& all) {
  std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " ("
            << o.summary << ")" << std::endl;
  all = all && o.passed;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Runs every (alpha, k, K) cell with K scaled by `mesh_factor` and compares
// against `table` at the unscaled K. Orders at the last K must lie within
// `order_band` of k + 1 and every error within a factor 10 of the table.
Outcome table_sweep(ExampleId problem, const ErrorTable& table, int mesh_factor, double order_band,
                    double* elapsed, std::ostream& detail) {
  FluxSpec flux;
  flux.convective = problem == ExampleId::example2 ? ConvectiveFlux::upwind : ConvectiveFlux::godunov;
  const double T = 0.5;
  Outcome out;
  double worst_order_gap = 0.0, worst_ratio = 1.0;
  const auto start = Clock::now();
  for (const auto& [alpha, rows] : table) {
    for (int k = 1; k <= 3; ++k) {
      std::vector<double> errors;
      for (std::size_t i = 0; i < kElements.size(); ++i) {
        const int K = kElements[i] * mesh_factor;
        const ConvergenceRow row = run_convergence_cell(problem, alpha, k, K, flux, T, std::nullopt);
        const double published = rows[k - 1][i];
        detail << "  alpha " << alpha << " k " << k << " K " << K << ": ";
        if (row.failed) {
          detail << "failed (" << row.note << ")\n";
          out.passed = false;
          errors.push_back(NAN);
          continue;
        }
        const double ratio = std::max(row.l2_error / published, published / row.l2_error);
        worst_ratio = std::max(worst_ratio, ratio);
        if (!(ratio <= 10.0)) out.passed = false;
        errors.push_back(row.l2_error);
        detail << "error " << sci(row.l2_error) << " (reference " << sci(published) << ")";
        if (i > 0) {
          const double order = observed_order(errors[i - 1], errors[i], kElements[i - 1], kElements[i]);
          detail << " order " << fixed2(order);
          if (i + 1 == kElements.size()) {
            const double gap = std::abs(order - (k + 1));
            worst_order_gap = std::max(worst_order_gap, std::isfinite(gap) ? gap : 1e300);
            if (!(gap <= order_band)) out.passed = false;
          }
        }
        detail << '\n';
      }
    }
  }
  *elapsed = seconds_since(start);
  out.summary = "worst |order - (k+1)| at K=40 " + fixed2(worst_order_gap) + " <= " +
                fixed2(order_band) + ", worst error ratio " + fixed2(worst_ratio) + " <= 10";
  return out;
}

// Reference K read literally as elements on [-2, 2]; printed for information only.
void example2_literal_reference(std::ostream& detail) {
  FluxSpec flux;
  flux.convective = ConvectiveFlux::upwind;
  detail << "  literal K on [-2, 2] (information only):\n";
  for (const auto& [alpha, rows] : kExample2Reference) {
    for (int k = 1; k <= 3; ++k) {
      const ConvergenceRow a = run_convergence_cell(ExampleId::example2, alpha, k, 30, flux, 0.5, std::nullopt);
      const ConvergenceRow b = run_convergence_cell(ExampleId::example2, alpha, k, 40, flux, 0.5, std::nullopt);
      detail << "    alpha " << alpha << " k " << k << " K 40: ";
      if (a.failed || b.failed) {
        detail << "failed\n";
        continue;
      }
      detail << "error " << sci(b.l2_error) << " (reference " << sci(rows[k - 1][3]) << ") order "
             << fixed2(observed_order(a.l2_error, b.l2_error, 30, 40)) << '\n';
    }
  }
}

Outcome all_checks(const std::vector<CheckResult>& checks, std::ostream& detail) {
  Outcome out;
  int failed = 0;
  for (const CheckResult& c : checks) {
    detail << "  " << format_check(c) << '\n';
    if (!c.passed) {
      out.passed = false;
      ++failed;
    }
  }
  out.summary = std::to_string(checks.size() - failed) + "/" + std::to_string(checks.size()) + " checks";
  return out;
}

}  // namespace

int main() {
  bool all = true;
  std::ostringstream detail;
  const auto flush_detail = [&detail] {
    std::cout << detail.str();
    detail.str("");
  };

  {
    double elapsed = 0.0;
    Outcome o = table_sweep(ExampleId::example1, kExample1Reference, 1, 0.2, &elapsed, detail);
    const bool fast = elapsed <= 300.0;
    o.passed = o.passed && fast;
    o.summary += ", sweep " + fixed2(elapsed) + " s <= 300 s";
    flush_detail();
    report(1, "Example 1 convergence against reference errors", o, all);
  }
  {
    double elapsed = 0.0;
    // The Example 2 reference K counts elements on [-1, 1]; on [-2, 2] that is 2K.
    Outcome o = table_sweep(ExampleId::example2, kExample2Reference, 2, 0.25, &elapsed, detail);
    example2_literal_reference(detail);
    o.summary += ", mesh h = 2/K";
    flush_detail();
    report(2, "Example 2 upwind convergence against reference errors", o, all);
  }
  {
    std::vector<CheckResult> checks;
    for (int K : {10, 20}) {
      for (int k = 0; k <= 3; ++k) {
        for (double s : {0.2, 0.5, 0.8}) checks.push_back(check_oracle_exactness(K, k, s));
      }
    }
    double worst = 0.0;
    for (const CheckResult& c : checks) worst = std::max(worst, c.measured);
    Outcome o = all_checks(checks, detail);
    o.summary += ", worst relative deviation " + sci(worst) + " <= 1e-10";
    flush_detail();
    report(3, "operator oracle exactness", o, all);
  }
  {
    std::vector<CheckResult> checks;
    for (int K : {10, 20}) {
      for (int k = 0; k <= 3; ++k) {
        for (double s : {0.2, 0.5, 0.8}) {
          const RieszOperator op = RieszOperator::assemble(make_mesh(0.0, 1.0, K), k, s);
          checks.push_back(check_adjoint(op.weak_left(), op.weak_right(), "adjoint"));
          if (K == 10) checks.push_back(check_positivity(op, 1000 + k, 200));
        }
      }
    }
    for (int k = 0; k <= 3; ++k) {
      for (double s : {0.2, 0.5, 0.8}) checks.push_back(check_reflection(9, k, s, 200 + k));
    }
    for (std::uint64_t seed : {1u, 2u, 3u}) checks.push_back(check_semigroup(seed));
    checks.push_back(check_bruteforce_spot());
    for (ExampleId id : {ExampleId::example1, ExampleId::example2}) {
      for (double alpha : {1.1, 1.3, 1.5, 1.8}) checks.push_back(check_pde_residual(id, alpha, 77));
    }
    Outcome o = all_checks(checks, detail);
    flush_detail();
    report(4, "property suites", o, all);
  }
  {
    std::vector<CheckResult> checks;
    for (double alpha : {1.1, 1.5, 1.8}) checks.push_back(check_stability(alpha, 80, 2, 1.0));
    Outcome o = all_checks(checks, detail);
    flush_detail();
    report(5, "Example 3 stability", o, all);
  }
  {
    const CheckResult c = check_temporal_order();
    Outcome o = all_checks({c}, detail);
    o.summary = "observed order " + fixed2(c.measured) + " >= 3.7";
    flush_detail();
    report(6, "LSERK temporal order", o, all);
  }
  {
    std::vector<CheckResult> checks;
    for (int k = 1; k <= 3; ++k) checks.push_back(check_operator_order(k, 0.5));
    Outcome o = all_checks(checks, detail);
    flush_detail();
    report(7, "operator approximation order", o, all);
  }
  {
    const CheckResult c = check_fast_apply(64, 2, 0.5, 100, 2024);
    Outcome o = all_checks({c}, detail);
    o.summary = "max deviation " + sci(c.measured) + " <= 1e-12";
    flush_detail();
    report(8, "fast-apply equivalence", o, all);
  }
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return all ? 0 : 1;
}
