#pragma once

// Bratteli diagrams of AF algebras and their ideal theory.
//
// A diagram stores a finite list of levels (block dimensions) and edge
// multiplicity matrices.  edges[n][k][j] is the multiplicity with which block
// j of level n embeds into block k of level n+1.  Infinite diagrams are either
// eventually periodic (a tail: levels start..start+period-1 repeat forever,
// and the last stored matrix maps the last stored level back onto level
// `start`) or binary trees (every node of the last stored level, and of every
// level after it, splits into two nodes of dimension 1).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "afspec/errors.hpp"
#include "afspec/limits.hpp"
#include "afspec/poset.hpp"

namespace afspec {

using DimVector = std::vector<std::uint64_t>;
using EdgeMatrix = std::vector<std::vector<std::uint64_t>>;

struct Tail {
  std::size_t start = 0;
  std::size_t period = 1;
  friend bool operator==(const Tail&, const Tail&) = default;
};

enum class Growth { None, Binary };

struct BratteliDiagram {
  std::vector<DimVector> levels;
  std::vector<EdgeMatrix> edges;
  std::optional<Tail> tail;
  Growth growth = Growth::None;

  std::size_t stored_levels() const { return levels.size(); }
  bool is_infinite() const { return tail.has_value() || growth == Growth::Binary; }

  /// Stored level that level n is a copy of.
  std::size_t stored_index(std::size_t n) const {
    if (n < levels.size()) return n;
    if (!tail) throw IndexOutOfRange("level " + std::to_string(n) + " beyond a finite diagram");
    return tail->start + (n - tail->start) % tail->period;
  }

  /// Stored level reached by the edges leaving stored level s.
  std::optional<std::size_t> successor_level(std::size_t s) const {
    if (s + 1 < levels.size()) return s + 1;
    if (tail) return tail->start;
    return std::nullopt;
  }

  friend bool operator==(const BratteliDiagram&, const BratteliDiagram&) = default;
};

/// Width-by-width successor lists: succ[j] = {k : N[k][j] > 0}.
inline std::vector<std::vector<std::size_t>> successors(const EdgeMatrix& m, std::size_t width) {
  std::vector<std::vector<std::size_t>> succ(width);
  for (std::size_t k = 0; k < m.size(); ++k)
    for (std::size_t j = 0; j < width && j < m[k].size(); ++j)
      if (m[k][j] > 0) succ[j].push_back(k);
  return succ;
}

inline DimVector apply_dim_rule(const EdgeMatrix& m, const DimVector& d) {
  DimVector out(m.size(), 0);
  for (std::size_t k = 0; k < m.size(); ++k)
    for (std::size_t j = 0; j < d.size() && j < m[k].size(); ++j) out[k] += m[k][j] * d[j];
  return out;
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

/// Checks matrix shapes, tail consistency and (when `unital`) the dimension
/// rule sum_j N[k][j] d_j = d'_k on every stored edge.  Never throws; with
/// `unital` off, dimension mismatches become warnings.
inline ValidationReport validate(const BratteliDiagram& d, bool unital = true) {
  ValidationReport r;
  auto where = [](std::size_t n) { return "level " + std::to_string(n); };
  if (d.levels.empty()) r.errors.push_back("diagram has no levels");
  for (std::size_t n = 0; n < d.levels.size(); ++n) {
    if (d.levels[n].empty()) r.errors.push_back(where(n) + ": no blocks");
    for (std::size_t k = 0; k < d.levels[n].size(); ++k)
      if (d.levels[n][k] == 0) r.errors.push_back(where(n) + " block " + std::to_string(k) + ": dimension 0");
  }
  std::size_t expected_edges = d.levels.empty() ? 0 : d.levels.size() - 1;
  if (d.tail) {
    if (d.growth != Growth::None) r.errors.push_back("tail and growth rule are mutually exclusive");
    if (d.tail->period == 0) r.errors.push_back("tail period must be at least 1");
    if (d.tail->start + d.tail->period != d.levels.size())
      r.errors.push_back("tail start " + std::to_string(d.tail->start) + " + period " +
                         std::to_string(d.tail->period) + " must equal the number of levels " +
                         std::to_string(d.levels.size()));
    expected_edges = d.levels.size();
  }
  if (d.edges.size() != expected_edges) {
    r.errors.push_back("expected " + std::to_string(expected_edges) + " edge matrices, found " +
                       std::to_string(d.edges.size()));
    return r;
  }
  if (!r.errors.empty()) return r;

  for (std::size_t n = 0; n < d.edges.size(); ++n) {
    const auto target = d.successor_level(n);
    const auto& m = d.edges[n];
    const std::size_t rows = d.levels[*target].size();
    const std::size_t cols = d.levels[n].size();
    if (m.size() != rows) {
      r.errors.push_back(where(n) + ": edge matrix has " + std::to_string(m.size()) + " rows, expected " +
                         std::to_string(rows));
      continue;
    }
    bool shape_ok = true;
    for (std::size_t k = 0; k < rows; ++k) {
      if (m[k].size() != cols) {
        r.errors.push_back(where(n) + " row " + std::to_string(k) + ": " + std::to_string(m[k].size()) +
                           " columns, expected " + std::to_string(cols));
        shape_ok = false;
      }
    }
    if (!shape_ok) continue;
    for (std::size_t j = 0; j < cols; ++j) {
      bool any = false;
      for (std::size_t k = 0; k < rows; ++k) any = any || m[k][j] > 0;
      if (!any) r.errors.push_back(where(n) + " block " + std::to_string(j) + ": no outgoing edge");
    }
    // The wrap matrix maps onto a later copy of level `start`, whose dimensions
    // are not stored, so the rule is checked only along stored edges.
    if (n + 1 >= d.levels.size()) continue;
    const auto image = apply_dim_rule(m, d.levels[n]);
    for (std::size_t k = 0; k < rows; ++k) {
      if (image[k] == d.levels[n + 1][k]) continue;
      const auto msg = where(n + 1) + " block " + std::to_string(k) + ": dimension rule gives " +
                       std::to_string(image[k]) + " but block has dimension " +
                       std::to_string(d.levels[n + 1][k]);
      (unital ? r.errors : r.warnings).push_back(msg);
    }
  }
  return r;
}

inline void require_valid(const BratteliDiagram& d) {
  const auto r = validate(d, false);
  if (!r.ok()) throw ShapeMismatch("invalid diagram: " + r.errors.front());
}

/// The first `count` levels as a finite diagram, computing dimensions of
/// unstored levels with the dimension rule.  Finite diagrams are truncated
/// to at most their own length.
inline BratteliDiagram unfold(const BratteliDiagram& d, std::size_t count) {
  require_valid(d);
  if (count == 0) throw IndexOutOfRange("truncation must keep at least one level");
  BratteliDiagram out;
  if (!d.is_infinite()) count = std::min(count, d.levels.size());
  out.levels.push_back(d.levels[0]);
  for (std::size_t n = 0; n + 1 < count; ++n) {
    if (n + 1 < d.levels.size() && d.growth == Growth::Binary) {
      out.edges.push_back(d.edges[n]);
      out.levels.push_back(d.levels[n + 1]);
      continue;
    }
    if (d.growth == Growth::Binary) {
      const std::size_t w = out.levels.back().size();
      EdgeMatrix m(2 * w, std::vector<std::uint64_t>(w, 0));
      for (std::size_t j = 0; j < w; ++j) m[2 * j][j] = m[2 * j + 1][j] = 1;
      out.levels.push_back(DimVector(2 * w, 1));
      out.edges.push_back(std::move(m));
      continue;
    }
    const auto& m = d.edges[d.stored_index(n)];
    out.levels.push_back(n + 1 < d.levels.size() ? d.levels[n + 1] : apply_dim_rule(m, out.levels.back()));
    out.edges.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ideals

/// One node subset per stored level.  For tailed diagrams the subsets of the
/// period levels are understood to repeat along the tail.
using IdealMark = std::vector<ElementSet>;

inline IdealMark empty_mark(const BratteliDiagram& d) {
  IdealMark m;
  for (const auto& l : d.levels) m.emplace_back(l.size());
  return m;
}

inline IdealMark full_mark(const BratteliDiagram& d) {
  IdealMark m = empty_mark(d);
  for (auto& s : m) s.set();
  return m;
}

inline bool is_full(const IdealMark& m) {
  return std::all_of(m.begin(), m.end(), [](const ElementSet& s) { return s.all(); });
}

inline void check_mark_shape(const BratteliDiagram& d, const IdealMark& mark) {
  if (mark.size() != d.levels.size())
    throw ShapeMismatch("mark has " + std::to_string(mark.size()) + " levels, diagram has " +
                        std::to_string(d.levels.size()));
  for (std::size_t n = 0; n < mark.size(); ++n)
    if (mark[n].size() != d.levels[n].size())
      throw ShapeMismatch("mark level " + std::to_string(n) + " has width " + std::to_string(mark[n].size()) +
                          ", diagram level has " + std::to_string(d.levels[n].size()));
}

/// Conditions (i) and (ii): a marked node has only marked successors, and a
/// node whose successors are all marked is marked.
inline bool is_ideal(const BratteliDiagram& d, const IdealMark& mark) {
  require_valid(d);
  check_mark_shape(d, mark);
  for (std::size_t n = 0; n < d.edges.size(); ++n) {
    const std::size_t t = *d.successor_level(n);
    const auto succ = successors(d.edges[n], d.levels[n].size());
    for (std::size_t j = 0; j < succ.size(); ++j) {
      const bool all_marked =
          std::all_of(succ[j].begin(), succ[j].end(), [&](std::size_t k) { return mark[t].test(k); });
      if (mark[n].test(j) != all_marked) return false;
    }
  }
  return true;
}

/// Smallest ideal mark containing `mark`: repeatedly marks the successors of
/// marked nodes and every node whose successors are all marked.
inline IdealMark saturate(const BratteliDiagram& d, IdealMark mark) {
  require_valid(d);
  check_mark_shape(d, mark);
  std::vector<std::vector<std::vector<std::size_t>>> succ(d.edges.size());
  for (std::size_t n = 0; n < d.edges.size(); ++n) succ[n] = successors(d.edges[n], d.levels[n].size());
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t n = 0; n < d.edges.size(); ++n) {
      const std::size_t t = *d.successor_level(n);
      for (std::size_t j = 0; j < succ[n].size(); ++j) {
        if (mark[n].test(j)) {
          for (std::size_t k : succ[n][j])
            if (!mark[t].test(k)) {
              mark[t].set(k);
              changed = true;
            }
        } else if (std::all_of(succ[n][j].begin(), succ[n][j].end(),
                               [&](std::size_t k) { return mark[t].test(k); })) {
          mark[n].set(j);
          changed = true;
        }
      }
    }
  }
  return mark;
}

/// Condition (iii): for every level n there is a level m > n and a node at m
/// reachable from every unmarked node of level n.  Paths to unmarked nodes
/// only pass through unmarked nodes, so reachability is tracked inside the
/// complement of the mark.  On the tail the search state repeats, which is
/// how a failure is detected.
inline bool is_primitive(const BratteliDiagram& d, const IdealMark& mark) {
  if (!is_ideal(d, mark)) throw NotAnIdeal("mark violates the ideal conditions");
  if (is_full(mark)) throw NotAnIdeal("the full mark is the improper ideal");

  const std::size_t L = d.levels.size();
  std::vector<std::vector<std::vector<std::size_t>>> succ(d.edges.size());
  for (std::size_t n = 0; n < d.edges.size(); ++n) succ[n] = successors(d.edges[n], d.levels[n].size());
  auto unmarked = [&](std::size_t s) { return ~mark[s]; };

  const std::size_t last = d.tail ? L : L - 1;  // levels that have a successor
  for (std::size_t n = 0; n < last; ++n) {
    const auto start_nodes = members(unmarked(n));
    if (start_nodes.empty()) {
      // Every later level is marked too, by condition (i).
      bool later = false;
      for (std::size_t s = 0; s < L; ++s)
        if (d.tail ? s >= d.tail->start : s > n) later = later || unmarked(s).any();
      if (!later) return false;
      continue;
    }
    std::vector<ElementSet> reach;
    for (std::size_t u : start_nodes) {
      ElementSet r(d.levels[n].size());
      r.set(u);
      reach.push_back(std::move(r));
    }
    std::size_t s = n;
    std::set<std::pair<std::size_t, std::vector<ElementSet>>> seen;
    bool found = false;
    while (true) {
      const auto t = d.successor_level(s);
      if (!t) break;
      for (auto& r : reach) {
        ElementSet next(d.levels[*t].size());
        for (std::size_t j : members(r))
          for (std::size_t k : succ[s][j]) next.set(k);
        r = next & unmarked(*t);
      }
      s = *t;
      ElementSet common = reach.front();
      for (const auto& r : reach) common &= r;
      if (common.any()) {
        found = true;
        break;
      }
      if (d.tail && s >= d.tail->start && !seen.emplace(s, reach).second) break;
    }
    if (!found) return false;
  }
  return true;
}

inline std::size_t period_node_count(const BratteliDiagram& d) {
  if (!d.tail) throw NoTail("ideal enumeration needs an eventually periodic diagram");
  std::size_t count = 0;
  for (std::size_t s = d.tail->start; s < d.levels.size(); ++s) count += d.levels[s].size();
  return count;
}

/// All period-invariant marks satisfying (i) and (ii), ordered by the number
/// of marked period nodes and then lexicographically on their indices.  The
/// first entry is the empty mark and the last is the full mark.
inline std::vector<IdealMark> enumerate_ideals(const BratteliDiagram& d, const Limits& limits = {}) {
  require_valid(d);
  const std::size_t total = period_node_count(d);
  if (total > limits.period_nodes)
    throw TooLarge("ideal enumeration limited to " + std::to_string(limits.period_nodes) +
                   " period nodes, diagram has " + std::to_string(total));
  const Tail tail = *d.tail;
  const std::size_t L = d.levels.size();

  // Flatten the period into one index space.
  std::vector<std::size_t> offset(L, 0);
  for (std::size_t s = tail.start, acc = 0; s < L; ++s) {
    offset[s] = acc;
    acc += d.levels[s].size();
  }
  std::vector<std::vector<std::size_t>> period_succ(total);
  for (std::size_t s = tail.start; s < L; ++s) {
    const std::size_t t = *d.successor_level(s);
    const auto succ = successors(d.edges[s], d.levels[s].size());
    for (std::size_t j = 0; j < succ.size(); ++j)
      for (std::size_t k : succ[j]) period_succ[offset[s] + j].push_back(offset[t] + k);
  }

  std::vector<std::pair<std::vector<std::size_t>, IdealMark>> found;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << total); ++bits) {
    auto in = [&](std::size_t v) { return ((bits >> v) & 1U) != 0; };
    bool fixed = true;
    for (std::size_t v = 0; v < total && fixed; ++v) {
      const bool all = std::all_of(period_succ[v].begin(), period_succ[v].end(), in);
      fixed = in(v) == all;
    }
    if (!fixed) continue;
    IdealMark mark = empty_mark(d);
    std::vector<std::size_t> key;
    for (std::size_t s = tail.start; s < L; ++s)
      for (std::size_t j = 0; j < d.levels[s].size(); ++j)
        if (in(offset[s] + j)) {
          mark[s].set(j);
          key.push_back(offset[s] + j);
        }
    for (std::size_t s = tail.start; s-- > 0;) {
      const auto succ = successors(d.edges[s], d.levels[s].size());
      for (std::size_t j = 0; j < succ.size(); ++j)
        if (std::all_of(succ[j].begin(), succ[j].end(), [&](std::size_t k) { return mark[s + 1].test(k); }))
          mark[s].set(j);
    }
    found.emplace_back(std::move(key), std::move(mark));
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::vector<IdealMark> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

inline bool mark_subset(const IdealMark& a, const IdealMark& b) {
  for (std::size_t n = 0; n < a.size(); ++n)
    if (!a[n].is_subset_of(b[n])) return false;
  return true;
}

struct PrimSpace {
  Poset poset;
  /// Mark of each element, in element order.
  std::vector<IdealMark> marks;
};

/// Primitive proper ideals ordered by inclusion, labelled I0, I1, ... in
/// enumeration order.
inline PrimSpace prim_space(const BratteliDiagram& d, const Limits& limits = {}) {
  PrimSpace out;
  for (auto& m : enumerate_ideals(d, limits))
    if (!is_full(m) && is_primitive(d, m)) out.marks.push_back(std::move(m));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < out.marks.size(); ++i) labels.push_back("I" + std::to_string(i));
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < out.marks.size(); ++a)
    for (std::size_t b = 0; b < out.marks.size(); ++b)
      if (a != b && mark_subset(out.marks[a], out.marks[b])) edges.emplace_back(a, b);
  out.poset = Poset::from_edges(std::move(labels), edges);
  return out;
}

inline Poset prim_poset(const BratteliDiagram& d, const Limits& limits = {}) { return prim_space(d, limits).poset; }

/// Every block has dimension 1 and every node after the first level has a
/// single incoming edge of multiplicity 1.
inline bool is_commutative(const BratteliDiagram& d) {
  require_valid(d);
  for (const auto& l : d.levels)
    for (auto dim : l)
      if (dim != 1) return false;
  for (const auto& m : d.edges)
    for (const auto& row : m) {
      std::uint64_t sum = 0;
      std::size_t nonzero = 0;
      for (auto v : row) {
        sum += v;
        nonzero += v > 0 ? 1 : 0;
      }
      if (nonzero != 1 || sum != 1) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Output

inline std::string format_mark(const IdealMark& m) {
  std::string out;
  for (std::size_t n = 0; n < m.size(); ++n) {
    out += n ? " | " : "";
    std::string row;
    for (std::size_t j = 0; j < m[n].size(); ++j) row += m[n].test(j) ? '#' : '.';
    out += row;
  }
  return out;
}

/// DOT rendering of the first `truncate_at` levels; one DOT edge per unit of
/// multiplicity.
inline std::string diagram_dot(const BratteliDiagram& d, std::size_t truncate_at) {
  const auto u = unfold(d, truncate_at);
  std::ostringstream os;
  os << "digraph bratteli {\n  node [shape=circle];\n";
  for (std::size_t n = 0; n < u.levels.size(); ++n) {
    os << "  { rank=same;";
    for (std::size_t k = 0; k < u.levels[n].size(); ++k) os << " n" << n << '_' << k << ';';
    os << " }\n";
    for (std::size_t k = 0; k < u.levels[n].size(); ++k)
      os << "  n" << n << '_' << k << " [label=\"" << u.levels[n][k] << "\"];\n";
  }
  for (std::size_t n = 0; n < u.edges.size(); ++n)
    for (std::size_t j = 0; j < u.levels[n].size(); ++j)
      for (std::size_t k = 0; k < u.edges[n].size(); ++k)
        for (std::uint64_t e = 0; e < u.edges[n][k][j]; ++e)
          os << "  n" << n << '_' << j << " -> n" << n + 1 << '_' << k << ";\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const BratteliDiagram& d) {
  nlohmann::json j;
  j["levels"] = d.levels;
  j["edges"] = d.edges;
  if (d.tail) j["tail"] = {{"start", d.tail->start}, {"period", d.tail->period}};
  if (d.growth == Growth::Binary) j["growth"] = "binary";
  return j;
}

inline BratteliDiagram diagram_from_json(const nlohmann::json& j) {
  BratteliDiagram d;
  try {
    if (!j.is_object()) throw ParseError("diagram must be a JSON object");
    if (!j.contains("levels")) throw ParseError("diagram is missing 'levels'");
    d.levels = j.at("levels").get<std::vector<DimVector>>();
    if (j.contains("edges")) d.edges = j.at("edges").get<std::vector<EdgeMatrix>>();
    if (j.contains("tail") && !j.at("tail").is_null()) {
      const auto& t = j.at("tail");
      d.tail = Tail{t.at("start").get<std::size_t>(), t.at("period").get<std::size_t>()};
    }
    if (j.contains("growth")) {
      const auto g = j.at("growth").get<std::string>();
      if (g == "binary")
        d.growth = Growth::Binary;
      else if (g != "none")
        throw ParseError("unknown growth rule '" + g + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed diagram JSON: ") + e.what());
  }
  return d;
}

inline BratteliDiagram parse_diagram(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return diagram_from_json(j);
}

}  // namespace afspec
