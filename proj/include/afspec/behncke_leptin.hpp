#pragma once

// C*-algebras with a prescribed finite primitive spectrum.
//
// For a forest F (every down-set a chain) and a defector d : F -> {0,1,..,inf}
// the algebra A(F,d) acts on H(F,d), a direct sum with one summand per point y:
// the tensor product of l^2 factors for the points strictly below y and
// C^{d(y)}.  A general finite poset P is handled through its covering forest
// of ropes, with the defector pulled back along the endpoint map.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "afspec/algebra_expr.hpp"
#include "afspec/errors.hpp"
#include "afspec/ext_nat.hpp"
#include "afspec/limits.hpp"
#include "afspec/poset.hpp"

namespace afspec {

// ---------------------------------------------------------------------------
// Defectors

struct Defector {
  std::vector<ExtNat> values;  // indexed by element

  ExtNat operator[](std::size_t x) const { return values.at(x); }
  std::size_t size() const { return values.size(); }
  bool operator==(const Defector&) const = default;
  auto operator<=>(const Defector& o) const { return values <=> o.values; }
};

/// 1 on maximal points, 0 elsewhere.
inline Defector canonical_defector(const Poset& p) {
  Defector d;
  for (std::size_t x = 0; x < p.size(); ++x) d.values.push_back(ExtNat(is_maximal(p, x) ? 1 : 0));
  return d;
}

/// "x1=1, x2=inf, ..." naming every element exactly once.
inline Defector parse_defector(const Poset& p, std::string_view text) {
  std::vector<std::optional<ExtNat>> vals(p.size());
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    const auto t = detail::trim(item);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError("defector entry without '=': '" + std::string(t) + "'");
    const auto name = detail::trim(t.substr(0, eq));
    const auto x = p.index_of(name);
    if (vals[x]) throw DuplicateLabel("defector gives two values for '" + std::string(name) + "'");
    vals[x] = ExtNat::parse(detail::trim(t.substr(eq + 1)));
  }
  Defector d;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (!vals[x]) throw InvalidDefector("defector has no value for '" + p.label(x) + "'");
    d.values.push_back(*vals[x]);
  }
  return d;
}

inline std::string format_defector(const Poset& p, const Defector& d) {
  std::string out;
  for (std::size_t x = 0; x < p.size(); ++x) out += (x ? "," : "") + p.label(x) + "=" + d[x].str();
  return out;
}

inline bool positive_on_maximal(const Poset& p, const Defector& d) {
  for (std::size_t x = 0; x < p.size(); ++x)
    if (is_maximal(p, x) && d[x] == ExtNat(0)) return false;
  return true;
}

/// Size must match.  A zero on a maximal point is refused unless `override`.
inline void check_defector(const Poset& p, const Defector& d, bool override = false) {
  if (d.size() != p.size())
    throw ShapeMismatch("defector has " + std::to_string(d.size()) + " values for " + std::to_string(p.size()) +
                        " points");
  if (override) return;
  for (std::size_t x = 0; x < p.size(); ++x)
    if (is_maximal(p, x) && d[x] == ExtNat(0))
      throw InvalidDefector("defector vanishes on the maximal point '" + p.label(x) + "'");
}

/// Composition d∘perm, i.e. x -> d(perm[x]).
inline Defector compose(const Defector& d, const Permutation& perm) {
  Defector out;
  for (std::size_t x = 0; x < d.size(); ++x) out.values.push_back(d[perm[x]]);
  return out;
}

// ---------------------------------------------------------------------------
// Forests

/// Every pair of points below a common point is comparable.
inline bool is_forest(const Poset& p) {
  for (std::size_t z = 0; z < p.size(); ++z) {
    const auto below = members(p.down(z));
    for (std::size_t i = 0; i < below.size(); ++i)
      for (std::size_t j = i + 1; j < below.size(); ++j)
        if (!p.comparable(below[i], below[j])) return false;
  }
  return true;
}

inline void require_forest(const Poset& p) {
  for (std::size_t z = 0; z < p.size(); ++z) {
    const auto below = members(p.down(z));
    for (std::size_t i = 0; i < below.size(); ++i)
      for (std::size_t j = i + 1; j < below.size(); ++j)
        if (!p.comparable(below[i], below[j]))
          throw NotAForest("'" + p.label(below[i]) + "' and '" + p.label(below[j]) + "' are incomparable but both below '" +
                           p.label(z) + "'");
  }
}

/// Points strictly below x, bottom to top.  Only meaningful in a forest.
inline std::vector<std::size_t> strict_down_chain(const Poset& f, std::size_t x) {
  auto below = members(f.down(x));
  below.erase(std::remove(below.begin(), below.end(), x), below.end());
  std::sort(below.begin(), below.end(),
            [&](std::size_t a, std::size_t b) { return f.down(a).count() < f.down(b).count(); });
  return below;
}

struct AuxPoint {
  std::size_t base;
  int copy;  // 1 or 2
};

/// The forest F' with a point x^(1) for every x and a point x^(2) for every
/// non-maximal x.  x^(2) is covered by y^(1) and y^(2) whenever y covers x.
struct AuxForest {
  Poset poset;
  std::vector<AuxPoint> points;
  std::vector<std::size_t> first;                  // x -> index of x^(1)
  std::vector<std::optional<std::size_t>> second;  // x -> index of x^(2)
  std::vector<Chain> chains;                       // y -> the maximal chain ending in y^(1)
};

inline std::string aux_label(const std::string& base, int copy) {
  return base + "^(" + std::to_string(copy) + ")";
}

inline AuxForest auxiliary_forest(const Poset& f) {
  require_forest(f);
  AuxForest a;
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < f.size(); ++x) {
    a.first.push_back(labels.size());
    a.points.push_back({x, 1});
    labels.push_back(aux_label(f.label(x), 1));
    if (is_maximal(f, x)) {
      a.second.push_back(std::nullopt);
    } else {
      a.second.push_back(labels.size());
      a.points.push_back({x, 2});
      labels.push_back(aux_label(f.label(x), 2));
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [lo, hi] : f.covers()) {
    edges.emplace_back(*a.second[lo], a.first[hi]);
    if (a.second[hi]) edges.emplace_back(*a.second[lo], *a.second[hi]);
  }
  a.poset = Poset::from_edges(labels, edges);
  for (std::size_t y = 0; y < f.size(); ++y) {
    Chain c;
    for (std::size_t z : strict_down_chain(f, y)) c.push_back(*a.second[z]);
    c.push_back(a.first[y]);
    a.chains.push_back(std::move(c));
  }
  return a;
}

/// l_{x1} ⊗ ... ⊗ l_{x(k-1)} ⊗ C^{d(xk)} for a maximal chain of F'.
inline HilbertExpr chain_hilbert(const Poset& f, const AuxForest& a, const Chain& chain, const Defector& d) {
  std::vector<HilbertExpr> factors;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    factors.push_back(HilbertExpr::separable(f.label(a.points[chain[i]].base)));
  factors.push_back(HilbertExpr::of_dimension(d[a.points[chain.back()].base]));
  return canonicalize(HilbertExpr::tensor(std::move(factors)));
}

struct Component {
  std::string name;   // "1", "2", ...
  std::size_t point;  // forest point whose chain it is
  HilbertExpr space;
};

/// H(F,d) with its nonzero summands numbered in element order.
struct ForestHilbert {
  Poset forest;
  Defector defector;
  AuxForest aux;
  std::vector<HilbertExpr> chain_spaces;                  // y -> h(y), possibly C^0
  std::vector<Component> components;                      // nonzero h(y)
  std::vector<std::optional<std::string>> component_of;   // y -> component name
  HilbertExpr total;
};

inline ForestHilbert forest_hilbert(const Poset& f, const Defector& d) {
  ForestHilbert h{f, d, auxiliary_forest(f), {}, {}, {}, HilbertExpr::finite(0)};
  if (d.size() != f.size()) throw ShapeMismatch("defector size does not match the forest");
  std::vector<HilbertExpr> summands;
  for (std::size_t y = 0; y < f.size(); ++y) {
    auto space = chain_hilbert(f, h.aux, h.aux.chains[y], d);
    h.chain_spaces.push_back(space);
    if (space.is_zero()) {
      h.component_of.push_back(std::nullopt);
      continue;
    }
    const auto name = std::to_string(h.components.size() + 1);
    h.components.push_back({name, y, space});
    h.component_of.push_back(name);
    summands.push_back(space);
  }
  h.total = canonicalize(HilbertExpr::sum(std::move(summands)));
  return h;
}

inline HilbertExpr total_hilbert(const Poset& f, const Defector& d) { return forest_hilbert(f, d).total; }

/// "H1 = lq   [p1]" per component.
inline std::string component_legend(const ForestHilbert& h, const RenderOptions& o = {}) {
  std::string out;
  for (const auto& c : h.components)
    out += "H" + c.name + " = " + render(c.space, o) + "   [" + h.forest.label(c.point) + "]\n";
  return out;
}

/// H(x) both as the direct sum over chains through x and in the factored
/// form H_x ⊗ H(F_x, d_x).
struct PointSpace {
  HilbertExpr prefix;  // H_x
  HilbertExpr fiber;   // H(F_x, d_x)
  HilbertExpr direct;  // sum of h(y) over y above x
  std::vector<std::string> support;

  HilbertExpr factored() const { return canonicalize(HilbertExpr::tensor({prefix, fiber})); }
};

inline PointSpace point_subspace(const ForestHilbert& h, std::size_t x) {
  const auto& f = h.forest;
  PointSpace ps;
  std::vector<HilbertExpr> prefix;
  for (std::size_t z : strict_down_chain(f, x)) prefix.push_back(HilbertExpr::separable(f.label(z)));
  ps.prefix = canonicalize(HilbertExpr::tensor(std::move(prefix)));

  std::vector<HilbertExpr> fiber, direct;
  for (std::size_t y : members(f.up(x))) {
    std::vector<HilbertExpr> factors;
    for (std::size_t z : strict_down_chain(f, y))
      if (f.leq(x, z)) factors.push_back(HilbertExpr::separable(f.label(z)));
    factors.push_back(HilbertExpr::of_dimension(h.defector[y]));
    fiber.push_back(HilbertExpr::tensor(std::move(factors)));
    direct.push_back(h.chain_spaces[y]);
    if (h.component_of[y]) ps.support.push_back(*h.component_of[y]);
  }
  ps.fiber = canonicalize(HilbertExpr::sum(std::move(fiber)));
  ps.direct = canonicalize(HilbertExpr::sum(std::move(direct)));
  ps.support = sorted_unique(std::move(ps.support));
  if (expand(ps.factored()) != expand(ps.direct))
    throw FactorizationMismatch("H(" + f.label(x) + "): " + render(ps.direct) + " differs from " +
                                render(ps.factored()));
  return ps;
}

inline PointSpace point_subspace(const Poset& f, const Defector& d, std::size_t x) {
  return point_subspace(forest_hilbert(f, d), x);
}

/// R_x = C·I(H_x) ⊗ K(H(F_x, d_x)) on H(x); nullopt when it is zero.
inline std::optional<AlgebraTerm> generator_term(const ForestHilbert& h, std::size_t x) {
  const auto ps = point_subspace(h, x);
  return normalize(AlgebraTerm::identity_tensor_compacts(ps.prefix, ps.fiber, ps.support));
}

/// Products of generators: incomparable points multiply to zero, and
/// R_x R_y lies in R_x when x is below y.
struct GeneratorRelation {
  enum class Kind { Annihilate, Absorb };
  std::size_t x, y;
  Kind kind;
};

inline std::vector<GeneratorRelation> generator_relations(const Poset& p) {
  std::vector<GeneratorRelation> out;
  for (std::size_t x = 0; x < p.size(); ++x)
    for (std::size_t y = 0; y < p.size(); ++y) {
      if (!p.comparable(x, y))
        out.push_back({x, y, GeneratorRelation::Kind::Annihilate});
      else if (p.leq(x, y))
        out.push_back({x, y, GeneratorRelation::Kind::Absorb});
    }
  return out;
}

struct ForestAlgebra {
  ForestHilbert hilbert;
  std::vector<std::optional<AlgebraTerm>> generators;  // per point
  std::vector<GeneratorRelation> relations;
  AlgebraExpr algebra;
};

inline ForestAlgebra forest_algebra(const Poset& f, const Defector& d, bool override = false) {
  require_forest(f);
  check_defector(f, d, override);
  ForestAlgebra a{forest_hilbert(f, d), {}, generator_relations(f), {}};
  std::vector<AlgebraTerm> terms;
  for (std::size_t x = 0; x < f.size(); ++x) {
    a.generators.push_back(generator_term(a.hilbert, x));
    if (a.generators.back()) terms.push_back(*a.generators.back());
  }
  a.algebra = make_algebra(std::move(terms));
  return a;
}

inline AlgebraExpr algebra_of_forest(const Poset& f, const Defector& d, bool override = false) {
  return forest_algebra(f, d, override).algebra;
}

// ---------------------------------------------------------------------------
// Ideals

struct ClosedIdeal {
  ElementSet closed;  // E
  ElementSet open;    // U, its complement
  AlgebraExpr terms;  // generators over U
  bool proper = true;
  bool primitive = false;
};

/// I_E, generated by R_x for x outside E.  Primitive iff E is a point closure.
inline ClosedIdeal ideal_of_closed(const Poset& p, const std::vector<std::optional<AlgebraTerm>>& generators,
                                   const ElementSet& closed_set) {
  if (closed_set.size() != p.size()) throw ShapeMismatch("subset size does not match the poset");
  if (!is_closed(p, closed_set)) throw NotClosed(format_set(p, closed_set) + " is not closed");
  ClosedIdeal ideal;
  ideal.closed = closed_set;
  ideal.open = ~closed_set;
  ideal.proper = closed_set.any();
  std::vector<AlgebraTerm> terms;
  for (std::size_t x : members(ideal.open))
    if (generators.at(x)) terms.push_back(*generators[x]);
  ideal.terms = make_algebra(std::move(terms));
  for (std::size_t x = 0; x < p.size(); ++x) ideal.primitive = ideal.primitive || p.up(x) == closed_set;
  return ideal;
}

inline ClosedIdeal ideal_of_closed(const ForestAlgebra& a, const ElementSet& closed_set) {
  return ideal_of_closed(a.hilbert.forest, a.generators, closed_set);
}

// ---------------------------------------------------------------------------
// Covering forest

/// Ropes are the saturated chains that start at a minimal element, ordered by
/// inclusion (equivalently, by being a prefix).  A rope is labelled by its
/// points joined with '.'.
struct CoveringForest {
  Poset forest;
  std::vector<Chain> ropes;
  std::vector<std::size_t> endpoint;            // rope -> point
  std::vector<std::vector<std::size_t>> fibre;  // point -> ropes ending there
};

inline std::string rope_label(const Poset& p, const Chain& rope) {
  std::string out;
  for (std::size_t i = 0; i < rope.size(); ++i) out += (i ? "." : "") + p.label(rope[i]);
  return out;
}

inline CoveringForest covering_forest(const Poset& p, const Limits& limits = {}) {
  std::vector<std::vector<std::size_t>> up_covers(p.size());
  for (const auto& [lo, hi] : p.covers()) up_covers[lo].push_back(hi);
  for (auto& v : up_covers)
    std::sort(v.begin(), v.end(), [&](std::size_t a, std::size_t b) { return p.label_rank(a) < p.label_rank(b); });

  CoveringForest cf;
  cf.fibre.resize(p.size());
  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  Chain current;
  std::function<void(std::size_t, std::optional<std::size_t>)> walk = [&](std::size_t x,
                                                                          std::optional<std::size_t> parent) {
    if (cf.ropes.size() >= limits.simplices) throw TooLarge("more than " + std::to_string(limits.simplices) + " ropes");
    current.push_back(x);
    const auto id = cf.ropes.size();
    cf.ropes.push_back(current);
    cf.endpoint.push_back(x);
    cf.fibre[x].push_back(id);
    labels.push_back(rope_label(p, current));
    if (parent) edges.emplace_back(*parent, id);
    for (std::size_t y : up_covers[x]) walk(y, id);
    current.pop_back();
  };
  for (std::size_t x : label_order(p))
    if (is_minimal(p, x)) walk(x, std::nullopt);
  cf.forest = Poset::from_edges(labels, edges);
  return cf;
}

/// Pull-back d∘φ to the ropes.
inline Defector pull_back(const CoveringForest& cf, const Defector& d) {
  Defector out;
  for (std::size_t r = 0; r < cf.ropes.size(); ++r) out.values.push_back(d[cf.endpoint[r]]);
  return out;
}

struct PosetAlgebra {
  Poset poset;
  Defector defector;
  CoveringForest cover;
  ForestHilbert hilbert;                                    // H(P̄, d̄)
  std::vector<std::optional<AlgebraTerm>> rope_generators;  // R_r per rope
  std::vector<std::optional<AlgebraTerm>> generators;       // R_x per point, coupled over the fibre
  std::vector<AlgebraExpr> blocks;                          // A_x per point
  AlgebraExpr algebra;
};

/// A_x is generated by the R_s for ropes s extending a rope that ends at x.
/// R_x couples the R_r, r ending at x, through one shared compact factor.
inline PosetAlgebra poset_algebra(const Poset& p, const Defector& d, bool override = false) {
  check_defector(p, d, override);
  PosetAlgebra a{p, d, covering_forest(p), {}, {}, {}, {}, {}};
  a.hilbert = forest_hilbert(a.cover.forest, pull_back(a.cover, d));
  const auto& pf = a.cover.forest;
  for (std::size_t r = 0; r < pf.size(); ++r) a.rope_generators.push_back(generator_term(a.hilbert, r));

  std::vector<AlgebraTerm> all;
  for (std::size_t x = 0; x < p.size(); ++x) {
    std::vector<AlgebraTerm> parts;
    ElementSet above(pf.size());
    for (std::size_t r : a.cover.fibre[x]) {
      if (a.rope_generators[r]) parts.push_back(*a.rope_generators[r]);
      above |= pf.up(r);
    }
    a.generators.push_back(normalize(AlgebraTerm::coupled(p.label(x), std::move(parts))));
    if (a.generators.back()) all.push_back(*a.generators.back());
    std::vector<AlgebraTerm> block;
    for (std::size_t s : members(above))
      if (a.rope_generators[s]) block.push_back(*a.rope_generators[s]);
    a.blocks.push_back(make_algebra(std::move(block)));
  }
  a.algebra = make_algebra(std::move(all));
  return a;
}

inline AlgebraExpr algebra_of_poset(const Poset& p, const Defector& d, bool override = false) {
  return poset_algebra(p, d, override).algebra;
}

inline ClosedIdeal ideal_of_closed(const PosetAlgebra& a, const ElementSet& closed_set) {
  return ideal_of_closed(a.poset, a.generators, closed_set);
}

// ---------------------------------------------------------------------------
// Defector equivalence

/// d and d' agree except at one non-maximal y, where the values differ by the
/// common value at a point z covering y, or are unconstrained when that
/// common value is infinite.
inline bool immediately_equivalent(const Defector& d, const Defector& e, const Poset& p) {
  if (d.size() != p.size() || e.size() != p.size()) throw ShapeMismatch("defector size does not match the poset");
  std::vector<std::size_t> diff;
  for (std::size_t x = 0; x < p.size(); ++x)
    if (d[x] != e[x]) diff.push_back(x);
  if (diff.empty()) return true;
  if (diff.size() > 1) return false;
  const auto y = diff.front();
  if (is_maximal(p, y)) return false;
  for (std::size_t z : members(covers_of(p, y))) {
    if (d[z].is_infinite()) return true;
    if (d[y] == e[y] + e[z] || e[y] == d[y] + d[z]) return true;
  }
  return false;
}

enum class Equivalence { Yes, NotFoundWithinBound };

struct EquivalenceResult {
  Equivalence verdict = Equivalence::NotFoundWithinBound;
  std::vector<Defector> path;  // from d to a relabelling of d', when found
  std::size_t explored = 0;
  std::uint64_t bound = 0;
};

inline std::uint64_t default_bound(const Poset& p, const Defector& d, const Defector& e) {
  std::uint64_t m = 0;
  for (const auto* def : {&d, &e})
    for (const auto& v : def->values)
      if (v.is_finite()) m = std::max(m, v.value());
  return m + p.size();
}

/// Breadth-first search over immediate moves with finite values capped at
/// `bound`; d' is identified with d'∘φ for every automorphism φ.
inline EquivalenceResult equivalent_defectors(const Defector& d, const Defector& e, const Poset& p,
                                              std::optional<std::uint64_t> bound = std::nullopt,
                                              const Limits& limits = {}, std::size_t max_states = 2'000'000) {
  EquivalenceResult res;
  res.bound = bound ? *bound : default_bound(p, d, e);
  std::set<Defector> targets;
  for (const auto& perm : automorphisms(p, limits)) targets.insert(compose(e, perm));

  std::map<Defector, Defector> parent;
  std::deque<Defector> queue{d};
  parent.emplace(d, d);
  auto finish = [&](const Defector& hit) {
    res.verdict = Equivalence::Yes;
    for (Defector cur = hit;; cur = parent.at(cur)) {
      res.path.push_back(cur);
      if (cur == d) break;
    }
    std::reverse(res.path.begin(), res.path.end());
  };
  if (targets.count(d)) {
    finish(d);
    res.explored = 1;
    return res;
  }
  while (!queue.empty() && parent.size() < max_states) {
    const Defector cur = queue.front();
    queue.pop_front();
    ++res.explored;
    for (std::size_t y = 0; y < p.size(); ++y) {
      if (is_maximal(p, y)) continue;
      std::set<ExtNat> values;
      for (std::size_t z : members(covers_of(p, y))) {
        const auto dz = cur[z];
        if (dz.is_infinite()) {
          for (std::uint64_t v = 0; v <= res.bound; ++v) values.insert(ExtNat(v));
          values.insert(ExtNat::infinity());
        } else if (cur[y].is_finite()) {
          values.insert(cur[y] + dz);
          if (cur[y].value() >= dz.value()) values.insert(ExtNat(cur[y].value() - dz.value()));
        }
      }
      for (const auto& v : values) {
        if (v == cur[y] || (v.is_finite() && v.value() > res.bound)) continue;
        Defector next = cur;
        next.values[y] = v;
        if (!parent.emplace(next, cur).second) continue;
        if (targets.count(next)) {
          finish(next);
          return res;
        }
        queue.push_back(std::move(next));
      }
    }
  }
  return res;
}

}  // namespace afspec
