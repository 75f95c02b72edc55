#pragma once

// Shared test scaffolding: tiny instance builders, an evaluate()-based
// enumeration oracle kept independent of the solver code path, and a
// subprocess runner for CLI checks.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "cellplace/instance.hpp"
#include "cellplace/objective.hpp"
#include "cellplace/rng.hpp"

namespace test_helpers {

inline std::string fixture_path(const std::string& name) {
  return std::string(CELLPLACE_FIXTURE_DIR) + "/" + name;
}

inline cellplace::Matrix matrix_from(const std::vector<std::vector<double>>& rows) {
  cellplace::Matrix m(static_cast<int>(rows.size()));
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) m.at(i, j) = rows[i][j];
  return m;
}

inline cellplace::CellLayoutInstance make_instance(const std::vector<std::vector<double>>& flow,
                                                   const std::vector<std::vector<double>>& closeness,
                                                   const std::vector<std::vector<double>>& distance,
                                                   double w, std::string name = "test") {
  cellplace::CellLayoutInstance inst;
  inst.n = static_cast<int>(flow.size());
  inst.flow = matrix_from(flow);
  inst.closeness = matrix_from(closeness);
  inst.distance = matrix_from(distance);
  inst.w = w;
  inst.name = std::move(name);
  return inst;
}

/// The n=2 worked instance: flow 4 one way, all-U closeness, distance 3.
inline cellplace::CellLayoutInstance worked_2x2(double w = 0.5) {
  return make_instance({{0, 4}, {0, 0}}, {{0, 2}, {2, 0}}, {{0, 3}, {3, 0}}, w, "worked_2x2");
}

/// Exhaustive oracle over evaluate(); independent of the solvers' composite
/// objective path. Returns (best permutation, best total), lexicographic
/// tie-break within 1e-12.
inline std::pair<cellplace::Assignment, double> enumerate_optimum(
    const cellplace::CellLayoutInstance& inst) {
  cellplace::Assignment perm(inst.n);
  std::iota(perm.begin(), perm.end(), 0);
  cellplace::Assignment best = perm;
  double best_total = cellplace::evaluate(inst, perm).total;
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double t = cellplace::evaluate(inst, perm).total;
    if (t < best_total - 1e-12) {
      best_total = t;
      best = perm;
    }
  }
  return {best, best_total};
}

inline cellplace::Assignment random_perm(int n, cellplace::Rng& rng) {
  cellplace::Assignment perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.next_below(static_cast<std::uint32_t>(i + 1))]);
  return perm;
}

struct CommandResult {
  int exit_code;
  std::string output;
};

/// Runs a shell command, capturing stdout; stderr is dropped.
inline CommandResult run_command(const std::string& cmd) {
  std::string full = cmd + " 2>/dev/null";
  FILE* pipe = popen(full.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

inline std::string cli() { return std::string(CELLPLACE_CLI_PATH); }

}  // namespace test_helpers
