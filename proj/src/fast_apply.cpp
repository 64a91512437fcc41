#include <fftw3.h>

#include <complex>
#include <memory>
#include <mutex>

#include "fracldg/errors.hpp"
#include "fracldg/riesz_operator.hpp"

namespace fracldg {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer real_buffer(std::size_t n) {
  return RealBuffer(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
}
ComplexBuffer complex_buffer(std::size_t n) {
  return ComplexBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

}  // namespace

/// Block-Toeplitz matrix-vector product by embedding each (m, n) scalar
/// Toeplitz kernel in a circulant of length 2K.
class FastApplyPlan {
 public:
  FastApplyPlan(int elements, int modes, const std::vector<Eigen::MatrixXd>& blocks)
      : K_(elements), M_(modes), L_(2 * elements), F_(elements + 1) {
    if (static_cast<int>(blocks.size()) != 2 * K_ - 1) {
      throw InvalidArgument("fast apply: expected 2K - 1 diagonal blocks");
    }
    RealBuffer in = real_buffer(L_);
    ComplexBuffer out = complex_buffer(F_);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      forward_ = fftw_plan_dft_r2c_1d(L_, in.get(), out.get(), FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_1d(L_, out.get(), in.get(), FFTW_ESTIMATE);
    }
    kernel_.resize(static_cast<std::size_t>(M_) * M_ * F_);
    for (int m = 0; m < M_; ++m) {
      for (int n = 0; n < M_; ++n) {
        for (int l = 0; l < L_; ++l) in[l] = 0.0;
        for (int d = -(K_ - 1); d < K_; ++d) in[(d + L_) % L_] = blocks[d + K_ - 1](m, n);
        fftw_execute_dft_r2c(forward_, in.get(), out.get());
        std::complex<double>* dst = &kernel_[(static_cast<std::size_t>(m) * M_ + n) * F_];
        for (int f = 0; f < F_; ++f) dst[f] = {out[f][0], out[f][1]};
      }
    }
  }

  ~FastApplyPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  FastApplyPlan(const FastApplyPlan&) = delete;
  FastApplyPlan& operator=(const FastApplyPlan&) = delete;

  Eigen::VectorXd apply(const Eigen::VectorXd& p) const {
    if (p.size() != static_cast<Eigen::Index>(K_) * M_) {
      throw InvalidArgument("fast apply: vector length does not match the plan");
    }
    RealBuffer in = real_buffer(L_);
    ComplexBuffer out = complex_buffer(F_);
    std::vector<std::complex<double>> spectra(static_cast<std::size_t>(M_) * F_);
    for (int n = 0; n < M_; ++n) {
      for (int l = 0; l < L_; ++l) in[l] = l < K_ ? p[l * M_ + n] : 0.0;
      fftw_execute_dft_r2c(forward_, in.get(), out.get());
      for (int f = 0; f < F_; ++f) spectra[n * F_ + f] = {out[f][0], out[f][1]};
    }
    Eigen::VectorXd q(p.size());
    const double inv = 1.0 / L_;
    for (int m = 0; m < M_; ++m) {
      for (int f = 0; f < F_; ++f) {
        std::complex<double> acc = 0.0;
        for (int n = 0; n < M_; ++n) {
          acc += kernel_[(static_cast<std::size_t>(m) * M_ + n) * F_ + f] * spectra[n * F_ + f];
        }
        out[f][0] = acc.real();
        out[f][1] = acc.imag();
      }
      fftw_execute_dft_c2r(backward_, out.get(), in.get());
      for (int i = 0; i < K_; ++i) q[i * M_ + m] = in[i] * inv;
    }
    return q;
  }

 private:
  int K_, M_, L_, F_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
  std::vector<std::complex<double>> kernel_;
};

std::shared_ptr<const FastApplyPlan> make_fast_apply_plan(
    int elements, int modes, const std::vector<Eigen::MatrixXd>& blocks) {
  return std::make_shared<const FastApplyPlan>(elements, modes, blocks);
}

Eigen::VectorXd fast_apply(const FastApplyPlan& plan, const Eigen::VectorXd& p) {
  return plan.apply(p);
}

}  // namespace fracldg
