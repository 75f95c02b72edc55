#pragma once

#include <vector>

#include "cellplace/errors.hpp"
#include "cellplace/instance.hpp"

namespace cellplace {

/// perm[i] = location assigned to cell i.
using Assignment = std::vector<int>;

struct CostBreakdown {
  double flow_term = 0.0;       // sum Nf[i][k] * d[loc(i)][loc(k)]
  double closeness_term = 0.0;  // sum Nr[i][k] * d[loc(i)][loc(k)], un-weighted
  double total = 0.0;           // flow_term + w * closeness_term
};

inline void check_permutation(const Assignment& perm, int n) {
  if (static_cast<int>(perm.size()) != n) throw DimensionMismatch(perm.size(), n);
  std::vector<char> seen(n, 0);
  for (int loc : perm) {
    if (loc < 0 || loc >= n)
      throw InvalidPermutation("location " + std::to_string(loc) + " out of range");
    if (seen[loc]) throw InvalidPermutation("location " + std::to_string(loc) + " repeated");
    seen[loc] = 1;
  }
}

inline bool is_permutation(const Assignment& perm, int n) {
  try {
    check_permutation(perm, n);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

/// Returns the assignment with the locations of cells a and b exchanged.
inline Assignment apply_swap(const Assignment& perm, int a, int b) {
  const int n = static_cast<int>(perm.size());
  if (a < 0 || a >= n) throw IndexOutOfRange(a, n);
  if (b < 0 || b >= n) throw IndexOutOfRange(b, n);
  if (a == b) throw SameIndex(a);
  Assignment out = perm;
  std::swap(out[a], out[b]);
  return out;
}

/// Exact weighted cost of an assignment, split into its flow and closeness
/// terms. Pure; O(n^2) per call.
inline CostBreakdown evaluate(const CellLayoutInstance& inst, const Assignment& perm) {
  check_permutation(perm, inst.n);
  if (inst.n == 1) return {};  // empty off-diagonal sum
  const Matrix nf = normalize_matrix(inst.flow);
  const Matrix nr = normalize_matrix(inst.closeness);
  CostBreakdown cb;
  for (int i = 0; i < inst.n; ++i) {
    for (int k = 0; k < inst.n; ++k) {
      const double d = inst.distance.at(perm[i], perm[k]);
      cb.flow_term += nf.at(i, k) * d;
      cb.closeness_term += nr.at(i, k) * d;
    }
  }
  cb.total = cb.flow_term + inst.w * cb.closeness_term;
  return cb;
}

/// Hot-path view of the objective: the composite matrix c = Nf + w*Nr is
/// built once, then totals and O(n) swap deltas are computed against it.
class CompositeObjective {
 public:
  explicit CompositeObjective(const CellLayoutInstance& inst)
      : n_(inst.n), c_(inst.n == 1 ? Matrix(1) : compose_weights(inst)), d_(&inst.distance) {}

  int n() const { return n_; }
  const Matrix& weights() const { return c_; }

  double total(const Assignment& perm) const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) t += c_.at(i, k) * d_->at(perm[i], perm[k]);
    return t;
  }

  /// Cost change of swapping cells a and b, without materializing the
  /// swapped assignment. Handles directed flow and asymmetric distance.
  double swap_delta(const Assignment& perm, int a, int b) const {
    if (a < 0 || a >= n_) throw IndexOutOfRange(a, n_);
    if (b < 0 || b >= n_) throw IndexOutOfRange(b, n_);
    if (a == b) throw SameIndex(a);
    const int pa = perm[a], pb = perm[b];
    const Matrix& d = *d_;
    double delta = 0.0;
    for (int k = 0; k < n_; ++k) {
      if (k == a || k == b) continue;
      const int pk = perm[k];
      delta += (c_.at(a, k) - c_.at(b, k)) * (d.at(pb, pk) - d.at(pa, pk));
      delta += (c_.at(k, a) - c_.at(k, b)) * (d.at(pk, pb) - d.at(pk, pa));
    }
    delta += c_.at(a, b) * (d.at(pb, pa) - d.at(pa, pb));
    delta += c_.at(b, a) * (d.at(pa, pb) - d.at(pb, pa));
    return delta;
  }

 private:
  int n_;
  Matrix c_;
  const Matrix* d_;  // borrowed from the instance
};

/// Convenience form of CompositeObjective::swap_delta for one-off use.
inline double swap_delta(const CellLayoutInstance& inst, const Assignment& perm, int a, int b) {
  check_permutation(perm, inst.n);
  return CompositeObjective(inst).swap_delta(perm, a, b);
}

}  // namespace cellplace
