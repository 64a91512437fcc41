#include "fracldg/frac_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fracldg/errors.hpp"

namespace fracldg {

double gamma_fn(double x) {
  static constexpr std::array<double, 9> kLanczos = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (!std::isfinite(x)) throw InvalidArgument("gamma_fn: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) {
    throw InvalidArgument("gamma_fn: pole at non-positive integer");
  }
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  if (x == std::floor(x) && x <= 21.0) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
    return f;
  }
  const double z = x - 1.0;
  double sum = kLanczos[0];
  for (int i = 1; i < 9; ++i) sum += kLanczos[i] / (z + i);
  const double t = z + 7.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * sum;
}

FracParams FracParams::from_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw InvalidArgument("FracParams: alpha must lie in (1, 2)");
  }
  FracParams p;
  p.alpha = alpha;
  p.s = 2.0 - alpha;
  p.riesz_coefficient_derivative = -1.0 / (2.0 * std::cos(alpha * std::numbers::pi / 2.0));
  p.riesz_coefficient_integral = 1.0 / (2.0 * std::cos(p.s * std::numbers::pi / 2.0));
  return p;
}

namespace poly {

std::vector<double> taylor_shift(const std::vector<double>& coeffs, double delta) {
  const std::size_t n = coeffs.size();
  std::vector<double> out(n, 0.0);
  // out_q = sum_{p >= q} c_p binom(p, q) delta^(p - q)
  for (std::size_t q = 0; q < n; ++q) {
    double binom = 1.0;  // binom(p, q) starting at p = q
    double power = 1.0;
    double sum = 0.0;
    for (std::size_t p = q; p < n; ++p) {
      sum += coeffs[p] * binom * power;
      binom = binom * static_cast<double>(p + 1) / static_cast<double>(p + 1 - q);
      power *= delta;
    }
    out[q] = sum;
  }
  return out;
}

std::vector<double> multiply(const std::vector<double>& lhs, const std::vector<double>& rhs) {
  if (lhs.empty() || rhs.empty()) return {};
  std::vector<double> out(lhs.size() + rhs.size() - 1, 0.0);
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    for (std::size_t j = 0; j < rhs.size(); ++j) out[i + j] += lhs[i] * rhs[j];
  }
  return out;
}

std::vector<double> derivative(const std::vector<double>& coeffs) {
  if (coeffs.size() <= 1) return {};
  std::vector<double> out(coeffs.size() - 1);
  for (std::size_t p = 1; p < coeffs.size(); ++p) out[p - 1] = static_cast<double>(p) * coeffs[p];
  return out;
}

double horner(const std::vector<double>& coeffs, double y) {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * y + *it;
  return v;
}

}  // namespace poly

PiecewisePoly::PiecewisePoly(std::vector<double> breakpoints,
                             std::vector<std::vector<double>> pieces)
    : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breaks_.empty() && pieces_.empty()) return;
  if (breaks_.size() != pieces_.size() + 1 || pieces_.empty()) {
    throw InvalidArgument("PiecewisePoly: need one more breakpoint than pieces");
  }
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    if (!(breaks_[i] < breaks_[i + 1])) {
      throw InvalidArgument("PiecewisePoly: breakpoints must be strictly increasing");
    }
  }
  right_.reserve(pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    right_.push_back(poly::taylor_shift(pieces_[i], breaks_[i + 1] - breaks_[i]));
  }
}

PiecewisePoly PiecewisePoly::single(double lo, double hi, std::vector<double> coeffs_about_lo) {
  return PiecewisePoly({lo, hi}, {std::move(coeffs_about_lo)});
}

PiecewisePoly PiecewisePoly::restrict_global(const std::vector<double>& coeffs, double lo,
                                             double hi) {
  return single(lo, hi, poly::taylor_shift(coeffs, lo));
}

double PiecewisePoly::operator()(double x) const {
  if (empty() || x < breaks_.front() || x > breaks_.back()) return 0.0;
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  int i = static_cast<int>(it - breaks_.begin()) - 1;
  i = std::min(i, piece_count() - 1);
  return poly::horner(pieces_[i], x - breaks_[i]);
}

PiecewisePoly PiecewisePoly::derivative() const {
  if (empty()) return {};
  std::vector<std::vector<double>> d;
  d.reserve(pieces_.size());
  for (const auto& p : pieces_) d.push_back(poly::derivative(p));
  return PiecewisePoly(breaks_, std::move(d));
}

PiecewisePoly PiecewisePoly::reflected() const {
  if (empty()) return {};
  const double total = breaks_.front() + breaks_.back();
  const int M = piece_count();
  std::vector<double> breaks(M + 1);
  for (int i = 0; i <= M; ++i) breaks[i] = total - breaks_[M - i];
  std::vector<std::vector<double>> pieces(M);
  for (int i = 0; i < M; ++i) {
    // t - d = -(y - (total - d)), so flip odd coefficients of the right expansion.
    std::vector<double> c = right_[M - 1 - i];
    for (std::size_t q = 1; q < c.size(); q += 2) c[q] = -c[q];
    pieces[i] = std::move(c);
  }
  return PiecewisePoly(std::move(breaks), std::move(pieces));
}

PiecewisePoly PiecewisePoly::scaled(double factor) const {
  PiecewisePoly out = *this;
  for (auto& p : out.pieces_) {
    for (double& c : p) c *= factor;
  }
  for (auto& p : out.right_) {
    for (double& c : p) c *= factor;
  }
  return out;
}

PiecewisePoly PiecewisePoly::refined(const std::vector<double>& breaks) const {
  std::vector<std::vector<double>> pieces(breaks.size() - 1);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double mid = 0.5 * (breaks[k] + breaks[k + 1]);
    if (empty() || mid < breaks_.front() || mid > breaks_.back()) continue;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), mid);
    const int i = static_cast<int>(it - breaks_.begin()) - 1;
    pieces[k] = poly::taylor_shift(pieces_[i], breaks[k] - breaks_[i]);
  }
  return PiecewisePoly(breaks, std::move(pieces));
}

namespace {

std::vector<double> merged_breaks(const PiecewisePoly& a, const PiecewisePoly& b) {
  std::vector<double> all = a.breakpoints();
  all.insert(all.end(), b.breakpoints().begin(), b.breakpoints().end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

}  // namespace

PiecewisePoly operator+(const PiecewisePoly& lhs, const PiecewisePoly& rhs) {
  if (lhs.empty()) return rhs;
  if (rhs.empty()) return lhs;
  const std::vector<double> breaks = merged_breaks(lhs, rhs);
  PiecewisePoly a = lhs.refined(breaks);
  const PiecewisePoly b = rhs.refined(breaks);
  std::vector<std::vector<double>> pieces(a.pieces_.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& pa = a.pieces_[i];
    const auto& pb = b.pieces_[i];
    pieces[i].assign(std::max(pa.size(), pb.size()), 0.0);
    for (std::size_t q = 0; q < pa.size(); ++q) pieces[i][q] += pa[q];
    for (std::size_t q = 0; q < pb.size(); ++q) pieces[i][q] += pb[q];
  }
  return PiecewisePoly(breaks, std::move(pieces));
}

PiecewisePoly operator*(const PiecewisePoly& lhs, const PiecewisePoly& rhs) {
  if (lhs.empty() || rhs.empty()) return {};
  const std::vector<double> breaks = merged_breaks(lhs, rhs);
  const PiecewisePoly a = lhs.refined(breaks);
  const PiecewisePoly b = rhs.refined(breaks);
  std::vector<std::vector<double>> pieces(a.pieces_.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    pieces[i] = poly::multiply(a.pieces_[i], b.pieces_[i]);
  }
  return PiecewisePoly(breaks, std::move(pieces));
}

namespace {

bool valid_order(double mu) {
  return (mu > 0.0 && mu <= 1.0) || (mu < 0.0 && mu > -2.0 && mu != -1.0);
}

// (x - z)^e for x >= z; the caller filters singular terms at x == z.
double truncated_power(double dx, double e) {
  if (dx < 1e-300) return e == 0.0 ? 1.0 : 0.0;
  return std::pow(dx, e);
}

// (1 / Gamma(mu)) int_c^d (x - t)^(mu - 1) p(t) dt for x >= c + 2 (d - c),
// via the binomial series of the kernel about t = c; w = h / (x - c) <= 1/2.
double far_piece(double mu, const std::vector<double>& coeffs, double c, double d, double x) {
  const double h = d - c;
  const double X = x - c;
  const double w = h / X;
  double total = 0.0;
  double hp = 1.0;
  for (std::size_t p = 0; p < coeffs.size(); ++p) {
    if (coeffs[p] != 0.0) {
      double term = 1.0;  // (1 - mu)_m / m! * w^m
      double series = 0.0;
      for (int m = 0; m < 400; ++m) {
        const double add = term / static_cast<double>(p + m + 1);
        series += add;
        if (std::abs(add) <= 1e-18 * std::abs(series)) break;
        term *= w * (m + 1.0 - mu) / (m + 1.0);
        if (term == 0.0) break;
      }
      total += coeffs[p] * hp * series;
    }
    hp *= h;
  }
  return total * std::pow(X, mu - 1.0) * h / gamma_fn(mu);
}

double left_fractional_impl(double mu, const std::vector<double>& breaks,
                            const std::vector<std::vector<double>>& left,
                            const std::vector<std::vector<double>>& right, double x) {
  const int M = static_cast<int>(left.size());
  if (M == 0 || x < breaks.front()) return 0.0;
  std::vector<bool> near(M, false);
  double total = 0.0;
  for (int i = 0; i < M; ++i) {
    const double c = breaks[i], d = breaks[i + 1];
    if (x < c) break;
    if (x - c >= 2.0 * (d - c)) {
      total += far_piece(mu, left[i], c, d, x);
    } else {
      near[i] = true;
    }
  }
  // Near pieces: truncated powers grouped by breakpoint, so that the head of
  // piece i and the tail of piece i-1 cancel exactly where P is smooth.
  for (int z = 0; z <= M; ++z) {
    const double zx = breaks[z];
    if (x < zx) break;
    const bool head = z < M && near[z];
    const bool tail = z > 0 && near[z - 1];
    if (!head && !tail) continue;
    const std::size_t nq = std::max(head ? left[z].size() : 0, tail ? right[z - 1].size() : 0);
    double scale = 0.0;
    for (std::size_t q = 0; q < nq; ++q) {
      double e = 0.0;
      if (head && q < left[z].size()) {
        e += left[z][q];
        scale = std::max(scale, std::abs(left[z][q]));
      }
      if (tail && q < right[z - 1].size()) {
        e -= right[z - 1][q];
        scale = std::max(scale, std::abs(right[z - 1][q]));
      }
      const double exponent = static_cast<double>(q) + mu;
      const double dx = x - zx;
      if (dx == 0.0 && exponent < 0.0) {
        if (std::abs(e) > 1e-12 * std::max(scale, 1e-300)) {
          throw SingularEvaluation("fractional derivative is infinite at x = " +
                                   std::to_string(x));
        }
        continue;
      }
      if (e == 0.0) continue;
      const double ratio = gamma_fn(static_cast<double>(q) + 1.0) /
                           gamma_fn(static_cast<double>(q) + 1.0 + mu);
      total += e * ratio * truncated_power(dx, exponent);
    }
  }
  return total;
}

}  // namespace

double left_fractional(double mu, const PiecewisePoly& P, double x) {
  if (!valid_order(mu)) {
    throw InvalidArgument("left_fractional: order must lie in (-2, 0) or (0, 1], not -1");
  }
  if (P.empty()) return 0.0;
  std::vector<std::vector<double>> left(P.piece_count()), right(P.piece_count());
  for (int i = 0; i < P.piece_count(); ++i) {
    left[i] = P.piece(i);
    right[i] = P.piece_about_right(i);
  }
  return left_fractional_impl(mu, P.breakpoints(), left, right, x);
}

namespace {

double one_sided(Side side, double mu, const PiecewisePoly& P, double x) {
  if (P.empty()) return 0.0;
  if (side == Side::left) return left_fractional(mu, P, x);
  // Right-sided operators are left-sided ones on the mirrored data.
  return left_fractional(mu, P.reflected(), P.support_lo() + P.support_hi() - x);
}

}  // namespace

double frac_integral_piecewise(Side side, double s, const PiecewisePoly& P, double x) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw InvalidArgument("frac_integral_piecewise: s must lie in (0, 1]");
  }
  return one_sided(side, s, P, x);
}

PiecewisePoly legendre_mode(double lo, double hi, int n) {
  if (!(lo < hi) || n < 0) throw InvalidArgument("legendre_mode: need lo < hi and n >= 0");
  // Monomial coefficients of P_n in xi by the three-term recurrence.
  std::vector<double> prev(n + 1, 0.0), cur(n + 1, 0.0);
  cur[0] = 1.0;
  for (int k = 0; k < n; ++k) {
    std::vector<double> next(n + 1, 0.0);
    for (int i = 0; i < n; ++i) next[i + 1] += (2.0 * k + 1.0) / (k + 1.0) * cur[i];
    for (int i = 0; i <= n; ++i) next[i] -= static_cast<double>(k) / (k + 1.0) * prev[i];
    prev = cur;
    cur = next;
  }
  const double norm = std::sqrt((2.0 * n + 1.0) / 2.0);
  for (double& v : cur) v *= norm;
  // xi = -1 + (2 / h)(t - lo).
  std::vector<double> out = poly::taylor_shift(cur, -1.0);
  const double ratio = 2.0 / (hi - lo);
  double factor = 1.0;
  for (double& v : out) {
    v *= factor;
    factor *= ratio;
  }
  return PiecewisePoly::single(lo, hi, std::move(out));
}

double legendre_mode_integral(Side side, double s, double lo, double hi, int n, double x) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgument("legendre_mode_integral: s must lie in (0, 1)");
  const double a = 0.5 * (hi - lo);
  const double D = side == Side::left ? x - 0.5 * (lo + hi) : 0.5 * (lo + hi) - x;
  if (D < 1.25 * a) return frac_integral_piecewise(side, s, legendre_mode(lo, hi, n), x);
  // int_{-1}^{1} P_n(xi) (D -+ a xi)^{s-1} dxi
  //   = (1-s)_n (+-a)^n / (2^n n!) int (1 - xi^2)^n (D -+ a xi)^{s-1-n} dxi,
  // and the even moments of (1 - xi^2)^n are B(r + 1/2, n + 1).
  const double q2 = (a / D) * (a / D);
  double term = std::tgamma(0.5) * std::tgamma(n + 1.0) / std::tgamma(n + 1.5);
  double series = 0.0;
  const double e = 1.0 + n - s;  // (e)_m / m! are the binomial coefficients of the kernel
  for (int r = 0; r < 4000; ++r) {
    series += term;
    if (term <= 1e-18 * series) break;
    term *= (e + 2.0 * r) * (e + 2.0 * r + 1.0) / ((2.0 * r + 1.0) * (2.0 * r + 2.0)) * q2 *
            (r + 0.5) / (r + n + 1.5);
  }
  double prefactor = 1.0;  // (1-s)_n a^n / (2^n n!)
  for (int k = 1; k <= n; ++k) prefactor *= (k - s) * a / (2.0 * k);
  if (side == Side::right && n % 2 == 1) prefactor = -prefactor;
  return a / gamma_fn(s) * std::sqrt((2.0 * n + 1.0) / 2.0) * prefactor *
         std::pow(D, s - 1.0 - n) * series;
}

double rl_derivative_piecewise(Side side, double alpha, const PiecewisePoly& P, double x) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw InvalidArgument("rl_derivative_piecewise: alpha must lie in (1, 2)");
  }
  return one_sided(side, -alpha, P, x);
}

double riesz_frac_laplacian_piecewise(double alpha, const PiecewisePoly& P, double x) {
  const FracParams params = FracParams::from_alpha(alpha);
  return params.riesz_coefficient_derivative *
         (rl_derivative_piecewise(Side::left, alpha, P, x) +
          rl_derivative_piecewise(Side::right, alpha, P, x));
}

double riesz_integral_piecewise(double s, const PiecewisePoly& P, double x) {
  if (!(s > 0.0 && s < 1.0)) {
    throw InvalidArgument("riesz_integral_piecewise: s must lie in (0, 1)");
  }
  const double coef = 1.0 / (2.0 * std::cos(s * std::numbers::pi / 2.0));
  return coef * (frac_integral_piecewise(Side::left, s, P, x) +
                 frac_integral_piecewise(Side::right, s, P, x));
}

PowerSum PowerSum::from_piecewise(const PiecewisePoly& P) {
  std::vector<Term> terms;
  const int M = P.piece_count();
  for (int i = 0; i < M; ++i) {
    const auto& head = P.piece(i);
    const auto& tail = P.piece_about_right(i);
    for (std::size_t q = 0; q < head.size(); ++q) {
      if (head[q] != 0.0) terms.push_back({head[q], P.breakpoints()[i], static_cast<double>(q)});
    }
    for (std::size_t q = 0; q < tail.size(); ++q) {
      if (tail[q] != 0.0) {
        terms.push_back({-tail[q], P.breakpoints()[i + 1], static_cast<double>(q)});
      }
    }
  }
  return PowerSum(std::move(terms));
}

double PowerSum::operator()(double x) const {
  double v = 0.0;
  for (const Term& t : terms_) {
    if (x < t.shift) continue;
    v += t.coef * truncated_power(x - t.shift, t.exponent);
  }
  return v;
}

PowerSum PowerSum::integrated(double mu) const {
  if (!(mu > 0.0)) throw InvalidArgument("PowerSum::integrated: order must be positive");
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) {
    const double ratio = gamma_fn(t.exponent + 1.0) / gamma_fn(t.exponent + 1.0 + mu);
    out.push_back({t.coef * ratio, t.shift, t.exponent + mu});
  }
  return PowerSum(std::move(out));
}

}  // namespace fracldg
