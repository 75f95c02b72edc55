#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cellplace/errors.hpp"
#include "cellplace/matrix.hpp"
#include "cellplace/rng.hpp"

namespace cellplace {

/// One cell-layout problem: directed material flow between cells, symmetric
/// closeness ratings, a symmetric location distance matrix and the load
/// factor w blending the two terms. Immutable after construction by
/// convention; safe to share across solver threads.
struct CellLayoutInstance {
  int n = 0;
  Matrix flow;       // f[i][k], directed, zero diagonal
  Matrix closeness;  // r[i][k], symmetric, scores 1..6 off-diagonal, 0 diagonal
  Matrix distance;   // d[j][l], zero diagonal
  double w = 0.0;
  std::string name;
};

/// REL-chart rating letters and their scores: A=6, E=5, I=4, O=3, U=2, X=1.
inline int letter_to_score(char letter) {
  switch (std::toupper(static_cast<unsigned char>(letter))) {
    case 'A': return 6;
    case 'E': return 5;
    case 'I': return 4;
    case 'O': return 3;
    case 'U': return 2;
    case 'X': return 1;
    default: throw UnknownRatingLetter(letter);
  }
}

/// Divides every entry by the grand total, putting the matrix on a [0,1]
/// scale with total mass 1. Scale-free: normalize(k*M) == normalize(M).
inline Matrix normalize_matrix(const Matrix& source) {
  const double total = source.grand_total();
  if (total <= 0.0) throw DegenerateMatrix();
  Matrix out(source.n());
  for (int i = 0; i < source.n(); ++i)
    for (int j = 0; j < source.n(); ++j) out.at(i, j) = source.at(i, j) / total;
  return out;
}

/// Precomposes the weighted coefficient matrix c = Nf + w * Nr, reducing the
/// two-term objective to a single-matrix QAP sum c[i][k] * d[loc(i)][loc(k)].
inline Matrix compose_weights(const CellLayoutInstance& inst) {
  Matrix nf = normalize_matrix(inst.flow);
  Matrix nr = normalize_matrix(inst.closeness);
  Matrix c(inst.n);
  for (int i = 0; i < inst.n; ++i)
    for (int k = 0; k < inst.n; ++k) c.at(i, k) = nf.at(i, k) + inst.w * nr.at(i, k);
  return c;
}

/// All invariant violations of an instance, one message each. Empty means
/// the instance is valid. Structural problems (wrong sizes) short-circuit.
inline std::vector<std::string> validate_instance(const CellLayoutInstance& inst) {
  std::vector<std::string> out;
  auto msg = [&out](std::string m) { out.push_back(std::move(m)); };
  if (inst.n < 1) {
    msg("n must be >= 1");
    return out;
  }
  if (inst.flow.n() != inst.n || inst.closeness.n() != inst.n || inst.distance.n() != inst.n) {
    msg("flow, closeness and distance must all be n x n");
    return out;
  }
  if (!(inst.w >= 0.0 && inst.w <= 1.0))
    msg("w = " + std::to_string(inst.w) + " outside [0, 1]");
  for (int i = 0; i < inst.n; ++i) {
    if (inst.flow.at(i, i) != 0.0)
      msg("flow diagonal (" + std::to_string(i) + "," + std::to_string(i) + ") must be 0");
    if (inst.distance.at(i, i) != 0.0)
      msg("distance diagonal (" + std::to_string(i) + "," + std::to_string(i) + ") must be 0");
    if (inst.closeness.at(i, i) != 0.0)
      msg("closeness diagonal (" + std::to_string(i) + "," + std::to_string(i) + ") must be 0");
  }
  for (int i = 0; i < inst.n; ++i) {
    for (int k = 0; k < inst.n; ++k) {
      if (inst.flow.at(i, k) < 0.0)
        msg("flow (" + std::to_string(i) + "," + std::to_string(k) + ") is negative");
      if (inst.distance.at(i, k) < 0.0)
        msg("distance (" + std::to_string(i) + "," + std::to_string(k) + ") is negative");
      if (i != k) {
        const double r = inst.closeness.at(i, k);
        if (r != std::floor(r) || r < 1.0 || r > 6.0)
          msg("closeness (" + std::to_string(i) + "," + std::to_string(k) +
              ") not an integer score in {1..6}");
      }
      if (k > i) {
        if (inst.closeness.at(i, k) != inst.closeness.at(k, i))
          msg("closeness not symmetric at (" + std::to_string(i) + "," + std::to_string(k) + ")");
        if (inst.distance.at(i, k) != inst.distance.at(k, i))
          msg("distance not symmetric at (" + std::to_string(i) + "," + std::to_string(k) + ")");
      }
    }
  }
  return out;
}

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

inline double parse_number(const std::string& tok, int line) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + tok + "'");
  }
  if (pos != tok.size()) throw ParseError(line, "trailing characters in number '" + tok + "'");
  return v;
}

struct Line {
  int number;
  std::vector<std::string> tokens;
};

}  // namespace detail

/// Parses the line-oriented instance format. '#' starts a comment, blank
/// lines are skipped. Expects an `N <n>` / `W <w>` header, then FLOW,
/// CLOSENESS LETTERS (or CLOSENESS NUMERIC) and DISTANCE sections in any
/// order. Letter grids may be given in full or upper-triangular Table-1
/// form with '-' at and below the diagonal.
inline CellLayoutInstance parse_instance(std::string_view text, std::string name = "") {
  std::vector<detail::Line> lines;
  {
    std::istringstream ss{std::string(text)};
    std::string raw;
    int num = 0;
    while (std::getline(ss, raw)) {
      ++num;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      auto toks = detail::tokenize(raw);
      if (!toks.empty()) lines.push_back({num, std::move(toks)});
    }
  }

  std::size_t pos = 0;
  auto need = [&](const char* what) -> const detail::Line& {
    if (pos >= lines.size())
      throw ParseError(lines.empty() ? 1 : lines.back().number, std::string("expected ") + what);
    return lines[pos];
  };

  const auto& nline = need("N header");
  if (nline.tokens.size() != 2 || nline.tokens[0] != "N")
    throw ParseError(nline.number, "expected 'N <n>'");
  const double nval = detail::parse_number(nline.tokens[1], nline.number);
  if (nval != std::floor(nval) || nval < 1)
    throw ParseError(nline.number, "n must be a positive integer");
  const int n = static_cast<int>(nval);
  ++pos;

  const auto& wline = need("W header");
  if (wline.tokens.size() != 2 || wline.tokens[0] != "W")
    throw ParseError(wline.number, "expected 'W <w>'");
  const double w = detail::parse_number(wline.tokens[1], wline.number);
  if (!(w >= 0.0 && w <= 1.0)) throw ParseError(wline.number, "w outside [0, 1]");
  ++pos;

  CellLayoutInstance inst;
  inst.n = n;
  inst.w = w;
  inst.name = std::move(name);

  bool have_flow = false, have_closeness = false, have_distance = false;

  auto read_numeric_rows = [&](Matrix& m, const char* section, bool nonneg) {
    m = Matrix(n);
    for (int i = 0; i < n; ++i) {
      const auto& row = need("matrix row");
      if (static_cast<int>(row.tokens.size()) != n)
        throw ParseError(row.number, std::string(section) + " row has " +
                                         std::to_string(row.tokens.size()) + " entries, expected " +
                                         std::to_string(n));
      for (int j = 0; j < n; ++j) {
        const double v = detail::parse_number(row.tokens[j], row.number);
        if (nonneg && v < 0.0)
          throw ParseError(row.number, std::string(section) + " entry is negative");
        m.at(i, j) = v;
      }
      ++pos;
    }
  };

  auto read_letter_rows = [&](Matrix& m) {
    m = Matrix(n);
    for (int i = 0; i < n; ++i) {
      const auto& row = need("closeness letter row");
      if (static_cast<int>(row.tokens.size()) != n)
        throw ParseError(row.number, "closeness row has " + std::to_string(row.tokens.size()) +
                                         " entries, expected " + std::to_string(n));
      for (int j = 0; j < n; ++j) {
        const std::string& tok = row.tokens[j];
        if (tok.size() != 1)
          throw ParseError(row.number, "closeness entry '" + tok + "' is not a single letter");
        const char c = tok[0];
        if (j == i) {
          if (c != '-') throw ParseError(row.number, "closeness diagonal must be '-'");
          continue;
        }
        if (j < i && c == '-') continue;  // upper-triangular form
        int score;
        try {
          score = letter_to_score(c);
        } catch (const UnknownRatingLetter& e) {
          throw ParseError(row.number, e.what());
        }
        if (j < i) {
          if (m.at(j, i) != score)
            throw ParseError(row.number, "closeness letter at (" + std::to_string(i) + "," +
                                             std::to_string(j) + ") contradicts its mirror");
        } else {
          m.at(i, j) = score;
          m.at(j, i) = score;
        }
      }
      ++pos;
    }
  };

  auto read_closeness_numeric = [&](Matrix& m) {
    read_numeric_rows(m, "CLOSENESS", true);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double v = m.at(i, j);
        if (i == j) {
          if (v != 0.0) throw ParseError(lines[pos - 1].number, "closeness diagonal must be 0");
        } else if (v != std::floor(v) || v < 1.0 || v > 6.0) {
          throw ParseError(lines[pos - 1].number,
                           "closeness score at (" + std::to_string(i) + "," + std::to_string(j) +
                               ") not in {1..6}");
        }
        if (j > i && m.at(i, j) != m.at(j, i))
          throw ParseError(lines[pos - 1].number, "closeness matrix not symmetric at (" +
                                                      std::to_string(i) + "," + std::to_string(j) +
                                                      ")");
      }
    }
  };

  while (pos < lines.size()) {
    const auto& header = lines[pos];
    const std::string& kw = header.tokens[0];
    if (kw == "FLOW" && header.tokens.size() == 1) {
      ++pos;
      read_numeric_rows(inst.flow, "FLOW", true);
      for (int i = 0; i < n; ++i)
        if (inst.flow.at(i, i) != 0.0)
          throw ParseError(header.number, "FLOW diagonal must be 0");
      have_flow = true;
    } else if (kw == "CLOSENESS" && header.tokens.size() == 2 && header.tokens[1] == "LETTERS") {
      ++pos;
      read_letter_rows(inst.closeness);
      have_closeness = true;
    } else if (kw == "CLOSENESS" && header.tokens.size() == 2 && header.tokens[1] == "NUMERIC") {
      ++pos;
      read_closeness_numeric(inst.closeness);
      have_closeness = true;
    } else if (kw == "DISTANCE" && header.tokens.size() == 1) {
      ++pos;
      read_numeric_rows(inst.distance, "DISTANCE", true);
      have_distance = true;
    } else {
      throw ParseError(header.number, "unrecognized section header '" + kw + "'");
    }
  }

  if (!have_flow) throw ParseError(lines.back().number, "missing FLOW section");
  if (!have_closeness) throw ParseError(lines.back().number, "missing CLOSENESS section");
  if (!have_distance) throw ParseError(lines.back().number, "missing DISTANCE section");
  return inst;
}

/// Writes N, W, FLOW, CLOSENESS NUMERIC, DISTANCE. Numbers use %.17g so a
/// parse of the output is bit-equal to the source.
inline std::string serialize_instance(const CellLayoutInstance& inst) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out;
  if (!inst.name.empty()) out += "# " + inst.name + "\n";
  out += "N " + std::to_string(inst.n) + "\n";
  out += "W " + num(inst.w) + "\n";
  auto section = [&](const char* header, const Matrix& m) {
    out += header;
    out += "\n";
    for (int i = 0; i < inst.n; ++i) {
      for (int j = 0; j < inst.n; ++j) {
        if (j) out += ' ';
        out += num(m.at(i, j));
      }
      out += '\n';
    }
  };
  section("FLOW", inst.flow);
  section("CLOSENESS NUMERIC", inst.closeness);
  section("DISTANCE", inst.distance);
  return out;
}

/// Deterministic random instance for testing. Flow entries are uniform in
/// (0, max_flow] thinned to the requested density; closeness letters uniform
/// over the six-letter alphabet; distances are rectilinear between distinct
/// points on an integer grid, which makes the matrix symmetric with zero
/// diagonal and a valid metric.
inline CellLayoutInstance generate_random_instance(int n, std::uint64_t seed,
                                                   double flow_density, double max_flow,
                                                   double w = 0.5) {
  if (n < 2) throw InvalidGeneratorArgs("n must be >= 2");
  if (!(flow_density > 0.0 && flow_density <= 1.0))
    throw InvalidGeneratorArgs("flow_density must be in (0, 1]");
  if (!(max_flow > 0.0)) throw InvalidGeneratorArgs("max_flow must be positive");

  Rng rng(seed, /*stream=*/0xC0FFEE);
  CellLayoutInstance inst;
  inst.n = n;
  inst.w = w;
  inst.name = "random_n" + std::to_string(n) + "_s" + std::to_string(seed);

  inst.flow = Matrix(n);
  bool any_flow = false;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i == k) continue;
      const bool keep = rng.next_double() < flow_density;
      const double v = (1.0 + rng.next_double() * (max_flow - 1.0));
      if (keep) {
        inst.flow.at(i, k) = v;
        any_flow = true;
      }
    }
  }
  if (!any_flow) inst.flow.at(0, 1) = max_flow;  // density can thin everything away

  inst.closeness = Matrix(n);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) {
      const double score = 1.0 + rng.next_below(6);
      inst.closeness.at(i, k) = score;
      inst.closeness.at(k, i) = score;
    }

  // Distinct grid points; grid side 4n gives plenty of room.
  const int side = 4 * n;
  std::vector<std::pair<int, int>> pts;
  while (static_cast<int>(pts.size()) < n) {
    const int x = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(side)));
    const int y = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(side)));
    bool dup = false;
    for (auto& p : pts) dup |= (p.first == x && p.second == y);
    if (!dup) pts.emplace_back(x, y);
  }
  inst.distance = Matrix(n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      inst.distance.at(j, l) =
          std::abs(pts[j].first - pts[l].first) + std::abs(pts[j].second - pts[l].second);

  return inst;
}

}  // namespace cellplace
