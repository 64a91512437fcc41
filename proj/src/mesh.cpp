#include "fracldg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracldg/errors.hpp"

namespace fracldg {

Mesh1D::Mesh1D(std::vector<double> boundaries) : boundaries_(std::move(boundaries)) {
  if (boundaries_.size() < 2) {
    throw InvalidArgument("Mesh1D: need at least one element");
  }
  const int K = size();
  min_width_ = width(0);
  for (int j = 0; j < K; ++j) {
    if (!(width(j) > 0.0) || !std::isfinite(boundaries_[j + 1])) {
      throw InvalidArgument("Mesh1D: boundaries must be finite and strictly increasing");
    }
    min_width_ = std::min(min_width_, width(j));
  }
  const double nominal = (b() - a()) / K;
  double dev = 0.0;
  for (int j = 0; j < K; ++j) dev = std::max(dev, std::abs(width(j) - nominal));
  uniform_ = dev <= 1e-12 * (b() - a());
}

int Mesh1D::locate(double x, bool prefer_left) const {
  const int K = size();
  auto it = prefer_left ? std::lower_bound(boundaries_.begin(), boundaries_.end(), x)
                        : std::upper_bound(boundaries_.begin(), boundaries_.end(), x);
  int j = static_cast<int>(it - boundaries_.begin()) - 1;
  return std::clamp(j, 0, K - 1);
}

MeshPtr make_mesh(double a, double b, int K) {
  if (!(a < b)) throw InvalidArgument("make_mesh: need a < b");
  if (K < 1) throw InvalidArgument("make_mesh: need K >= 1, got " + std::to_string(K));
  std::vector<double> xs(K + 1);
  for (int j = 0; j <= K; ++j) xs[j] = a + (b - a) * static_cast<double>(j) / K;
  xs[K] = b;
  return std::make_shared<const Mesh1D>(std::move(xs));
}

}  // namespace fracldg
