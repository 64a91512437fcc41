#pragma once

#include <memory>
#include <vector>

namespace fracldg {

/// Partition a = x_{1/2} < x_{3/2} < ... < x_{K+1/2} = b of an interval.
class Mesh1D {
 public:
  explicit Mesh1D(std::vector<double> boundaries);

  double a() const { return boundaries_.front(); }
  double b() const { return boundaries_.back(); }
  int size() const { return static_cast<int>(boundaries_.size()) - 1; }

  double left(int j) const { return boundaries_[j]; }
  double right(int j) const { return boundaries_[j + 1]; }
  double width(int j) const { return boundaries_[j + 1] - boundaries_[j]; }
  double center(int j) const { return 0.5 * (boundaries_[j] + boundaries_[j + 1]); }
  double min_width() const { return min_width_; }
  bool uniform() const { return uniform_; }

  const std::vector<double>& boundaries() const { return boundaries_; }

  /// Physical coordinate of reference point xi in [-1, 1] on element j.
  double to_physical(int j, double xi) const { return center(j) + 0.5 * width(j) * xi; }
  double to_reference(int j, double x) const { return 2.0 * (x - center(j)) / width(j); }

  /// Index of the element containing x; at an interior boundary the element
  /// on the left is returned when prefer_left is set, the right one otherwise.
  int locate(double x, bool prefer_left) const;

 private:
  std::vector<double> boundaries_;
  double min_width_ = 0.0;
  bool uniform_ = false;
};

using MeshPtr = std::shared_ptr<const Mesh1D>;

/// Uniform partition of [a, b] into K elements.
MeshPtr make_mesh(double a, double b, int K);

}  // namespace fracldg
