#pragma once

// Construction of a Bratteli diagram whose primitive ideal space is a given
// finite poset.
//
// A schedule K1 = P, K2, K3, ... of closed sets is fixed.  The first n of them
// cut P into the atoms Y(n, j) of the Boolean algebra they generate, and F(n, j)
// is the smallest set in the union/intersection closure K'_n that contains
// Y(n, j).  Level n of the diagram has one node per Y(n, j), and Y(n, a) is
// joined to Y(n+1, b) with multiplicity 1 whenever Y(n, a) meets F(n+1, b).

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "afspec/behncke_leptin.hpp"
#include "afspec/bratteli.hpp"
#include "afspec/errors.hpp"
#include "afspec/limits.hpp"
#include "afspec/poset.hpp"

namespace afspec {

/// K1 = P, then the point closures cl{x} != P, then every other nonempty
/// closed set; the last two groups in canonical order.  Putting the point
/// closures first makes the partition separate points as early as possible.
inline SubsetFamily closed_set_schedule(const Poset& p, const Limits& limits = {}) {
  if (p.empty()) throw InvalidSpace("the construction needs a nonempty poset");
  const ElementSet full = p.full_set();
  std::set<ElementSet> point_closures;
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p.up(x) != full) point_closures.insert(p.up(x));
  SubsetFamily first(point_closures.begin(), point_closures.end());
  sort_canonical(p, first);
  SubsetFamily schedule{full};
  schedule.insert(schedule.end(), first.begin(), first.end());
  for (const auto& c : all_closed_sets(p, limits))
    if (c.any() && c != full && !point_closures.count(c)) schedule.push_back(c);
  return schedule;
}

struct LevelPartition {
  std::size_t n = 0;             // 1-based
  SubsetFamily Kn;               // K1..Kn
  SubsetFamily Kn_prime;         // union/intersection closure, canonical order
  std::vector<ElementSet> Y;     // ordered atoms
  std::vector<ElementSet> F;     // F[j] = smallest member of Kn_prime containing Y[j]
};

/// Union/intersection closure of a family, in canonical order.
inline SubsetFamily lattice_closure(const Poset& p, const SubsetFamily& family) {
  std::set<ElementSet> seen;
  SubsetFamily out;
  for (const auto& s : family)
    if (seen.insert(s).second) out.push_back(s);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      for (const auto& c : {out[i] | out[j], out[i] & out[j]})
        if (c.any() && seen.insert(c).second) out.push_back(c);
  sort_canonical(p, out);
  return out;
}

namespace detail {

/// Refines `parts` by `k`.  On even steps the piece inside k comes first, on
/// odd steps it comes last; earlier pieces keep their relative order.
inline std::vector<ElementSet> refine(const std::vector<ElementSet>& parts, const ElementSet& k, std::size_t n) {
  std::vector<ElementSet> out;
  for (const auto& y : parts) {
    ElementSet in = y & k;
    ElementSet out_part = y - k;
    if (in.none() || out_part.none()) {
      out.push_back(y);
    } else if (n % 2 == 0) {
      out.push_back(in);
      out.push_back(out_part);
    } else {
      out.push_back(out_part);
      out.push_back(in);
    }
  }
  return out;
}

inline std::vector<ElementSet> smallest_containing(const SubsetFamily& kn, const std::vector<ElementSet>& ys,
                                                   const ElementSet& full) {
  std::vector<ElementSet> F;
  for (const auto& y : ys) {
    ElementSet f = full;
    for (const auto& k : kn)
      if (y.is_subset_of(k)) f &= k;
    F.push_back(f);
  }
  return F;
}

}  // namespace detail

/// Partitions for n = 1..count, sharing one pass over the schedule.
inline std::vector<LevelPartition> level_partitions(const Poset& p, const SubsetFamily& schedule, std::size_t count,
                                                    bool with_closure = true) {
  if (count == 0 || count > schedule.size())
    throw IndexOutOfRange("level must lie in 1.." + std::to_string(schedule.size()) + ", got " +
                          std::to_string(count));
  std::vector<LevelPartition> out;
  std::vector<ElementSet> parts{p.full_set()};
  for (std::size_t n = 1; n <= count; ++n) {
    if (n > 1) parts = detail::refine(parts, schedule[n - 1], n);
    LevelPartition lp;
    lp.n = n;
    lp.Kn.assign(schedule.begin(), schedule.begin() + static_cast<std::ptrdiff_t>(n));
    if (with_closure) lp.Kn_prime = lattice_closure(p, lp.Kn);
    lp.Y = parts;
    lp.F = detail::smallest_containing(lp.Kn, parts, p.full_set());
    out.push_back(std::move(lp));
  }
  return out;
}

inline LevelPartition level_partition(const Poset& p, std::size_t n, const Limits& limits = {}) {
  const auto schedule = closed_set_schedule(p, limits);
  return level_partitions(p, schedule, n).back();
}

/// Smallest n at which every Y(n, j) is a single point.
inline std::size_t stabilization_level(const Poset& p, const Limits& limits = {}) {
  const auto schedule = closed_set_schedule(p, limits);
  std::vector<ElementSet> parts{p.full_set()};
  for (std::size_t n = 1; n <= schedule.size(); ++n) {
    if (n > 1) parts = detail::refine(parts, schedule[n - 1], n);
    if (parts.size() == p.size()) return n;
  }
  throw InvalidSpace("closed sets do not separate the points");  // impossible for a T0 poset
}

struct AfConstruction {
  SubsetFamily schedule;
  std::size_t n0 = 0;      // stabilization level (1-based)
  std::size_t last = 0;    // last stored level (1-based); its edges wrap onto itself
  std::vector<LevelPartition> partitions;  // n = 1 .. last + 1
  BratteliDiagram diagram;

  /// Point of the poset represented by node j of the stable levels.
  std::size_t stable_point(std::size_t j) const { return partitions[last - 1].Y[j].find_first(); }
};

/// Builds the diagram.  Levels 1..T are stored, where T >= n0 is also late
/// enough that F(T+1, j) is the closure of the point of Y(T, j); from then on
/// partition, F sets and edges repeat, so level T wraps onto itself.
inline AfConstruction build_construction(const Poset& p, const Limits& limits = {}) {
  AfConstruction c;
  c.schedule = closed_set_schedule(p, limits);
  c.n0 = stabilization_level(p, limits);
  // The point closures other than P are K2 .. K(m+1), so from level m+1 on
  // every F set is a point closure.
  std::set<ElementSet> point_closures;
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p.up(x) != p.full_set()) point_closures.insert(p.up(x));
  c.last = std::max<std::size_t>({c.n0, point_closures.size(), 1});
  const std::size_t count = std::min(c.last + 1, c.schedule.size());
  c.partitions = level_partitions(p, c.schedule, count);
  if (c.partitions.size() < c.last + 1) {
    // Schedule exhausted: K'_n no longer grows, so the next level repeats.
    LevelPartition again = c.partitions.back();
    again.n += 1;
    c.partitions.push_back(std::move(again));
  }

  auto& d = c.diagram;
  d.levels.push_back({1});
  for (std::size_t n = 1; n <= c.last; ++n) {
    const auto& from = c.partitions[n - 1];
    const auto& to = c.partitions[n];
    EdgeMatrix m(to.Y.size(), std::vector<std::uint64_t>(from.Y.size(), 0));
    for (std::size_t b = 0; b < to.Y.size(); ++b)
      for (std::size_t a = 0; a < from.Y.size(); ++a)
        if (from.Y[a].intersects(to.F[b])) m[b][a] = 1;
    if (n < c.last) d.levels.push_back(apply_dim_rule(m, d.levels.back()));
    d.edges.push_back(std::move(m));
  }
  d.tail = Tail{c.last - 1, 1};
  return c;
}

inline BratteliDiagram build_diagram(const Poset& p, const Limits& limits = {}) {
  return build_construction(p, limits).diagram;
}

/// The stable partition table: one row "Y(n0,j) = {..}  F(n0+1,j) = {..}" per
/// node, j counted from 1.
inline std::string stable_partition_table(const Poset& p, const AfConstruction& c) {
  const auto& Y = c.partitions[c.last - 1].Y;
  const auto& F = c.partitions[c.last].F;
  std::vector<std::string> left;
  std::size_t width = 0;
  for (std::size_t j = 0; j < Y.size(); ++j) {
    left.push_back("Y(n0," + std::to_string(j + 1) + ") = " + format_set(p, Y[j]));
    width = std::max(width, left.back().size());
  }
  std::ostringstream os;
  for (std::size_t j = 0; j < Y.size(); ++j)
    os << left[j] << std::string(width - left[j].size() + 3, ' ') << "F(n0+1," << j + 1
       << ") = " << format_set(p, F[j]) << '\n';
  return os.str();
}

/// The algebra the diagram of `p` defines, written as block generators.  It is
/// the Behncke-Leptin algebra of `p` for the defector that is 1 on maximal
/// points and 0 elsewhere.
inline AlgebraExpr limit_algebra_expr(const Poset& p) { return algebra_of_poset(p, canonical_defector(p)); }

}  // namespace afspec
