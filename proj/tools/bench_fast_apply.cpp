// Timing of dense against FFT application of the Riesz operator on a uniform
// mesh. Exits nonzero when the FFT path is not at least `--min-ratio` faster.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <random>

#include "fracldg/riesz_operator.hpp"

int main(int argc, char** argv) {
  int elements = 4096;
  int order = 1;
  double s = 0.5;
  int repeats = 10;
  double min_ratio = 2.0;
  CLI::App app{"Dense vs FFT Riesz operator application"};
  app.add_option("--elements", elements, "Number of elements");
  app.add_option("--order", order, "Polynomial order");
  app.add_option("--s", s, "Riesz potential order in (0, 1)");
  app.add_option("--repeats", repeats, "Applications per path");
  app.add_option("--min-ratio", min_ratio, "Required dense / fast time ratio");
  CLI11_PARSE(app, argc, argv);

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const fracldg::RieszOperator op =
      fracldg::RieszOperator::assemble(fracldg::make_mesh(0.0, 1.0, elements), order, s);
  const double assembly = std::chrono::duration<double>(clock::now() - t0).count();

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  Eigen::VectorXd c(op.dofs());
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = coef(rng);
  const fracldg::DgField p(op.mesh_ptr(), order, c);

  // Warm-up so that page faults and FFTW planning are not timed.
  fracldg::DgField dense = op.apply(p);
  fracldg::DgField fast = op.fast_apply_uniform(p);

  auto t1 = clock::now();
  for (int r = 0; r < repeats; ++r) dense = op.apply(p);
  const double dense_time = std::chrono::duration<double>(clock::now() - t1).count() / repeats;
  t1 = clock::now();
  for (int r = 0; r < repeats; ++r) fast = op.fast_apply_uniform(p);
  const double fast_time = std::chrono::duration<double>(clock::now() - t1).count() / repeats;

  const double deviation = (dense.coeffs() - fast.coeffs()).cwiseAbs().maxCoeff();
  const double ratio = dense_time / fast_time;
  std::printf("K=%d k=%d N=%d assembly %.2f s\n", elements, order, op.dofs(), assembly);
  std::printf("dense apply %.3e s, fast apply %.3e s, ratio %.1f, max deviation %.2e\n",
              dense_time, fast_time, ratio, deviation);
  const bool ok = ratio > min_ratio;
  std::printf("%s timing ratio > %.1f\n", ok ? "PASS" : "FAIL", min_ratio);
  return ok ? 0 : 1;
}
