#pragma once

#include <cstddef>
#include <vector>

namespace cellplace {

/// Dense square matrix of doubles, row-major. Instances here are small
/// (n rarely above 20), so no sparse or blocked storage.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n, double fill = 0.0)
      : n_(n), v_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {}

  int n() const { return n_; }

  double& at(int i, int j) { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }

  double grand_total() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return s;
  }

  bool operator==(const Matrix&) const = default;

 private:
  int n_ = 0;
  std::vector<double> v_;
};

}  // namespace cellplace
