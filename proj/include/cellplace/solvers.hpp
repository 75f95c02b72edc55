#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "cellplace/errors.hpp"
#include "cellplace/instance.hpp"
#include "cellplace/objective.hpp"
#include "cellplace/rng.hpp"

namespace cellplace {

struct SaParams {
  double t0 = 0.0;          // 0 requests auto-calibration
  double alpha = 0.95;      // geometric cooling factor
  int moves_per_temp = 0;   // 0 means 20 * n
  double t_min = 1e-6;
  int max_stages_without_improvement = 50;
  int restarts = 10;
  std::uint64_t seed = 1;
  bool collect_trace = false;
};

struct TracePoint {
  int stage;
  double temperature;
  double incumbent_total;
};

struct SolveResult {
  Assignment best;
  CostBreakdown cost;             // evaluate(instance, best)
  std::uint64_t evaluations = 0;  // swap proposals (SA/greedy) or permutations visited (exact)
  int restarts_run = 0;
  std::vector<TracePoint> trace;
};

inline void check_sa_params(const SaParams& p) {
  if (p.t0 < 0.0) throw InvalidParams("t0 must be >= 0 (0 = auto)");
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) throw InvalidParams("alpha must be in (0, 1)");
  if (p.moves_per_temp < 0) throw InvalidParams("moves_per_temp must be >= 0 (0 = auto)");
  if (!(p.t_min > 0.0)) throw InvalidParams("t_min must be positive");
  if (p.t0 > 0.0 && p.t_min >= p.t0) throw InvalidParams("t_min must be below t0");
  if (p.max_stages_without_improvement < 1) throw InvalidParams("patience must be >= 1");
  if (p.restarts < 1) throw InvalidParams("restarts must be >= 1");
}

namespace detail {

inline SolveResult trivial_result(const CellLayoutInstance& inst) {
  SolveResult r;
  r.best = {0};
  r.cost = evaluate(inst, r.best);
  return r;
}

inline Assignment random_permutation(int n, Rng& rng) {
  Assignment perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.next_below(static_cast<std::uint32_t>(i + 1))]);
  return perm;
}

struct SaRunOutcome {
  Assignment best;
  double best_total;
  std::uint64_t evaluations;
  std::vector<TracePoint> trace;
};

/// One annealing run on its own random stream. Metropolis acceptance over
/// pairwise swaps, geometric cooling, early stop on stagnation.
inline SaRunOutcome sa_run_one(const CompositeObjective& obj, const SaParams& p, double t0,
                               int restart_index) {
  const int n = obj.n();
  Rng rng(p.seed, static_cast<std::uint64_t>(restart_index));
  const int moves = p.moves_per_temp > 0 ? p.moves_per_temp : 20 * n;

  SaRunOutcome out;
  Assignment current = random_permutation(n, rng);
  double current_total = obj.total(current);
  out.best = current;
  out.best_total = current_total;
  out.evaluations = 0;

  double temp = t0;
  int stage = 0;
  int stagnant = 0;
  while (temp >= p.t_min && stagnant < p.max_stages_without_improvement) {
    bool improved = false;
    for (int m = 0; m < moves; ++m) {
      int a = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n)));
      int b = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n - 1)));
      if (b >= a) ++b;
      const double delta = obj.swap_delta(current, a, b);
      ++out.evaluations;
      if (delta <= 0.0 || rng.next_double() < std::exp(-delta / temp)) {
        std::swap(current[a], current[b]);
        current_total += delta;
        if (current_total < out.best_total) {  // first incumbent wins exact ties
          out.best_total = current_total;
          out.best = current;
          improved = true;
        }
      }
    }
    if (p.collect_trace) out.trace.push_back({stage, temp, out.best_total});
    stagnant = improved ? 0 : stagnant + 1;
    temp *= p.alpha;
    ++stage;
  }
  return out;
}

}  // namespace detail

/// Exhaustive search over all n! assignments. Global optimum; among
/// cost-ties within 1e-12 the lexicographically smallest permutation wins
/// (enumeration order is lexicographic, so the first of a tie group sticks).
inline SolveResult brute_force(const CellLayoutInstance& inst, bool force = false) {
  if (inst.n > 10 && !force) throw InstanceTooLarge(inst.n);
  if (inst.n == 1) {
    SolveResult r = detail::trivial_result(inst);
    r.evaluations = 1;
    return r;
  }
  const CompositeObjective obj(inst);
  Assignment perm(inst.n);
  std::iota(perm.begin(), perm.end(), 0);

  SolveResult result;
  result.best = perm;
  double best_total = obj.total(perm);
  result.evaluations = 1;
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double t = obj.total(perm);
    ++result.evaluations;
    if (t < best_total - 1e-12) {
      best_total = t;
      result.best = perm;
    }
  }
  result.cost = evaluate(inst, result.best);
  return result;
}

/// Best-improvement pairwise-swap descent from a given start. Stops when no
/// swap improves by more than 1e-12; the result is 2-swap locally optimal.
inline SolveResult greedy_descent(const CellLayoutInstance& inst, const Assignment& start) {
  check_permutation(start, inst.n);
  if (inst.n == 1) return detail::trivial_result(inst);
  const CompositeObjective obj(inst);

  SolveResult result;
  Assignment current = start;
  for (;;) {
    double best_delta = 0.0;
    int best_a = -1, best_b = -1;
    for (int a = 0; a < inst.n; ++a) {
      for (int b = a + 1; b < inst.n; ++b) {
        const double delta = obj.swap_delta(current, a, b);
        ++result.evaluations;
        if (delta < best_delta) {  // strict: first scan position wins among equals
          best_delta = delta;
          best_a = a;
          best_b = b;
        }
      }
    }
    if (best_delta >= -1e-12) break;
    std::swap(current[best_a], current[best_b]);
  }
  result.best = std::move(current);
  result.cost = evaluate(inst, result.best);
  return result;
}

/// Calibrates t0 so the mean uphill swap delta, sampled over 100 random
/// swaps of one random permutation, is accepted with probability 0.8.
/// Falls back to 1.0 on a flat landscape.
inline double auto_initial_temperature(const CellLayoutInstance& inst, std::uint64_t seed) {
  if (inst.n < 2) return 1.0;
  const CompositeObjective obj(inst);
  Rng rng(seed, /*stream=*/0xA11CA1);
  const Assignment perm = detail::random_permutation(inst.n, rng);
  double sum_pos = 0.0;
  int count_pos = 0;
  for (int s = 0; s < 100; ++s) {
    int a = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(inst.n)));
    int b = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(inst.n - 1)));
    if (b >= a) ++b;
    const double delta = obj.swap_delta(perm, a, b);
    if (delta > 0.0) {
      sum_pos += delta;
      ++count_pos;
    }
  }
  if (count_pos == 0) return 1.0;
  return (sum_pos / count_pos) / std::log(1.0 / 0.8);
}

/// Restarted simulated annealing. Each restart runs on a stream derived
/// from (seed, restart index); results merge by min total with ties going
/// to the lower restart index. Deterministic for fixed (instance, params).
inline SolveResult simulated_annealing(const CellLayoutInstance& inst, const SaParams& params) {
  check_sa_params(params);
  if (inst.n == 1) {
    SolveResult r = detail::trivial_result(inst);
    r.restarts_run = params.restarts;
    return r;
  }
  const CompositeObjective obj(inst);
  const double t0 =
      params.t0 > 0.0 ? params.t0 : auto_initial_temperature(inst, params.seed);

  SolveResult result;
  double best_total = std::numeric_limits<double>::infinity();
  for (int r = 0; r < params.restarts; ++r) {
    detail::SaRunOutcome run = detail::sa_run_one(obj, params, t0, r);
    result.evaluations += run.evaluations;
    if (run.best_total < best_total) {
      best_total = run.best_total;
      result.best = std::move(run.best);
      result.trace = std::move(run.trace);
    }
  }
  result.restarts_run = params.restarts;
  result.cost = evaluate(inst, result.best);
  return result;
}

}  // namespace cellplace
