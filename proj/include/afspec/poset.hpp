#pragma once

// Finite posets viewed as finite T0 spaces.  The open sets are the down-sets
// (O_x = {y : y <= x} is the smallest open set containing x) and the closed
// sets are the up-sets.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "afspec/errors.hpp"
#include "afspec/limits.hpp"

namespace afspec {

using ElementSet = boost::dynamic_bitset<std::uint64_t>;
using SubsetFamily = std::vector<ElementSet>;
using Chain = std::vector<std::size_t>;
using Permutation = std::vector<std::size_t>;

inline std::vector<std::size_t> members(const ElementSet& s) {
  std::vector<std::size_t> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i)) out.push_back(i);
  return out;
}

class Poset {
 public:
  Poset() = default;

  /// Builds the poset generated by `cover_pairs` (lower, upper).  Pairs implied
  /// by transitivity are accepted and dropped from the cover relation.
  static Poset from_covers(std::vector<std::string> labels,
                           const std::vector<std::pair<std::string, std::string>>& cover_pairs) {
    Poset p;
    p.set_labels(std::move(labels));
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(cover_pairs.size());
    for (const auto& [lo, hi] : cover_pairs) edges.emplace_back(p.index_of(lo), p.index_of(hi));
    p.build_from_edges(edges);
    return p;
  }

  /// Same as from_covers, with pairs given as element indices.
  static Poset from_edges(std::vector<std::string> labels,
                          const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Poset p;
    p.set_labels(std::move(labels));
    for (const auto& [lo, hi] : edges)
      if (lo >= p.size() || hi >= p.size())
        throw UnknownLabel("edge references element index out of range");
    p.build_from_edges(edges);
    return p;
  }

  /// Builds a poset from a full order relation: `below[x]` is the set of y
  /// with y <= x.  The relation must already be a partial order.
  static Poset from_down_sets(std::vector<std::string> labels, std::vector<ElementSet> below) {
    Poset p;
    p.set_labels(std::move(labels));
    const std::size_t n = p.size();
    if (below.size() != n) throw ShapeMismatch("relation size does not match element count");
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t x = 0; x < n; ++x) {
      if (below[x].size() != n) throw ShapeMismatch("relation row has wrong width");
      for (std::size_t y : members(below[x]))
        if (y != x) edges.emplace_back(y, x);
    }
    p.build_from_edges(edges);
    for (std::size_t x = 0; x < n; ++x) {
      ElementSet expected = below[x];
      expected.set(x);
      if (p.down_[x] != expected) throw ParseError("relation is not transitive");
    }
    return p;
  }

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::size_t index_of(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) throw UnknownLabel("unknown element '" + std::string(label) + "'");
    return it->second;
  }
  bool contains(std::string_view label) const { return index_.count(std::string(label)) != 0; }

  bool leq(std::size_t x, std::size_t y) const { return down_[y].test(x); }
  bool less(std::size_t x, std::size_t y) const { return x != y && leq(x, y); }
  bool comparable(std::size_t x, std::size_t y) const { return leq(x, y) || leq(y, x); }

  /// {y : y <= x}
  const ElementSet& down(std::size_t x) const { return down_.at(x); }
  /// {y : x <= y}
  const ElementSet& up(std::size_t x) const { return up_.at(x); }

  /// Cover pairs (lower, upper) sorted by element index.
  const std::vector<std::pair<std::size_t, std::size_t>>& covers() const { return covers_; }
  bool is_cover(std::size_t x, std::size_t y) const {
    return std::binary_search(covers_.begin(), covers_.end(), std::make_pair(x, y));
  }

  /// Position of each label in lexicographic order of labels.
  std::size_t label_rank(std::size_t x) const { return rank_[x]; }

  ElementSet empty_set() const { return ElementSet(size()); }
  ElementSet full_set() const {
    ElementSet s(size());
    s.set();
    return s;
  }

  ElementSet make_set(const std::vector<std::string>& names) const {
    ElementSet s(size());
    for (const auto& n : names) s.set(index_of(n));
    return s;
  }

  friend bool operator==(const Poset& a, const Poset& b) {
    return a.labels_ == b.labels_ && a.down_ == b.down_;
  }

 private:
  void set_labels(std::vector<std::string> labels) {
    labels_ = std::move(labels);
    index_.clear();
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], i).second)
        throw DuplicateLabel("duplicate element label '" + labels_[i] + "'");
    }
    std::vector<std::size_t> order(labels_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return labels_[a] < labels_[b]; });
    rank_.assign(labels_.size(), 0);
    for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
  }

  void build_from_edges(const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    const std::size_t n = size();
    std::vector<std::vector<std::size_t>> succ(n);
    for (const auto& [lo, hi] : edges) {
      if (lo == hi) throw CycleError("cycle: " + labels_[lo] + " < " + labels_[lo]);
      succ[lo].push_back(hi);
    }
    for (auto& s : succ) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    const auto order = topological_order(succ);

    // Reverse topological sweep: up-sets first.
    up_.assign(n, ElementSet(n));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t x = *it;
      up_[x].set(x);
      for (std::size_t y : succ[x]) up_[x] |= up_[y];
    }
    down_.assign(n, ElementSet(n));
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y : members(up_[x])) down_[y].set(x);

    covers_.clear();
    for (std::size_t x = 0; x < n; ++x) {
      ElementSet strict_up = up_[x];
      strict_up.reset(x);
      for (std::size_t y : members(strict_up)) {
        ElementSet between = strict_up & down_[y];
        between.reset(y);
        if (between.none()) covers_.emplace_back(x, y);
      }
    }
    std::sort(covers_.begin(), covers_.end());
  }

  std::vector<std::size_t> topological_order(const std::vector<std::vector<std::size_t>>& succ) const {
    const std::size_t n = succ.size();
    enum : std::uint8_t { kWhite, kGrey, kBlack };
    std::vector<std::uint8_t> colour(n, kWhite);
    std::vector<std::size_t> parent(n, n);
    std::vector<std::size_t> post;
    post.reserve(n);
    for (std::size_t root = 0; root < n; ++root) {
      if (colour[root] != kWhite) continue;
      std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
      colour[root] = kGrey;
      while (!stack.empty()) {
        auto& [x, next] = stack.back();
        if (next < succ[x].size()) {
          const std::size_t y = succ[x][next++];
          if (colour[y] == kGrey) {
            std::vector<std::string> cycle{labels_[y]};
            for (std::size_t z = x; z != y; z = parent[z]) cycle.push_back(labels_[z]);
            cycle.push_back(labels_[y]);
            std::reverse(cycle.begin() + 1, cycle.end() - 1);
            std::string text;
            for (std::size_t i = 0; i < cycle.size(); ++i) text += (i ? " < " : "") + cycle[i];
            throw CycleError("cycle: " + text);
          }
          if (colour[y] == kWhite) {
            colour[y] = kGrey;
            parent[y] = x;
            stack.emplace_back(y, 0);
          }
        } else {
          colour[x] = kBlack;
          post.push_back(x);
          stack.pop_back();
        }
      }
    }
    std::reverse(post.begin(), post.end());
    return post;
  }

  std::vector<std::string> labels_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::size_t> rank_;
  std::vector<ElementSet> down_;
  std::vector<ElementSet> up_;
  std::vector<std::pair<std::size_t, std::size_t>> covers_;
};

// ---------------------------------------------------------------------------
// Canonical ordering of subsets: by cardinality, then lexicographically on the
// sorted member labels.

inline std::vector<std::size_t> sorted_ranks(const std::vector<std::size_t>& rank, const ElementSet& s) {
  std::vector<std::size_t> r;
  r.reserve(s.count());
  for (std::size_t i : members(s)) r.push_back(rank[i]);
  std::sort(r.begin(), r.end());
  return r;
}

inline std::vector<std::size_t> label_ranks(const std::vector<std::string>& labels) {
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  std::vector<std::size_t> rank(labels.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

inline void sort_canonical(const std::vector<std::string>& labels, SubsetFamily& family) {
  const auto rank = label_ranks(labels);
  std::vector<std::pair<std::vector<std::size_t>, ElementSet>> keyed;
  keyed.reserve(family.size());
  for (auto& s : family) keyed.emplace_back(sorted_ranks(rank, s), std::move(s));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  family.clear();
  for (auto& [key, s] : keyed) family.push_back(std::move(s));
}

inline void sort_canonical(const Poset& p, SubsetFamily& family) { sort_canonical(p.labels(), family); }

/// "{a, b, c}" with members in label order.
inline std::string format_set(const std::vector<std::string>& labels, const ElementSet& s) {
  std::vector<std::string> names;
  for (std::size_t i : members(s)) names.push_back(labels[i]);
  std::sort(names.begin(), names.end());
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out + "}";
}

inline std::string format_set(const Poset& p, const ElementSet& s) { return format_set(p.labels(), s); }

// ---------------------------------------------------------------------------
// Topology

inline ElementSet min_open(const Poset& p, std::size_t x) { return p.down(x); }
inline ElementSet min_open(const Poset& p, std::string_view x) { return p.down(p.index_of(x)); }

/// Smallest closed set (up-set) containing `s`.
inline ElementSet closure(const Poset& p, const ElementSet& s) {
  if (s.size() != p.size()) throw ShapeMismatch("subset does not belong to this poset");
  ElementSet out(p.size());
  for (std::size_t x : members(s)) out |= p.up(x);
  return out;
}

/// Smallest open set (down-set) containing `s`.
inline ElementSet open_hull(const Poset& p, const ElementSet& s) {
  if (s.size() != p.size()) throw ShapeMismatch("subset does not belong to this poset");
  ElementSet out(p.size());
  for (std::size_t x : members(s)) out |= p.down(x);
  return out;
}

inline bool is_closed(const Poset& p, const ElementSet& s) { return closure(p, s) == s; }
inline bool is_open(const Poset& p, const ElementSet& s) { return open_hull(p, s) == s; }

/// Every up-set of `p`, in canonical order (so the first entry is the empty set
/// and the last is P).
inline SubsetFamily all_closed_sets(const Poset& p, const Limits& limits = {}) {
  const std::size_t n = p.size();
  if (n > limits.closed_sets)
    throw TooLarge("closed-set enumeration limited to " + std::to_string(limits.closed_sets) +
                   " elements, poset has " + std::to_string(n));
  SubsetFamily out;
  // An up-set is determined by its antichain of minimal members; extend
  // recursively in a fixed element order, deciding membership of each element
  // once everything below it has been decided.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return p.down(a).count() < p.down(b).count(); });
  ElementSet current(n);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n) {
      out.push_back(current);
      return;
    }
    const std::size_t x = order[k];
    ElementSet strict_down = p.down(x);
    strict_down.reset(x);
    if ((strict_down & current).any()) {  // something below is in: forced in
      current.set(x);
      rec(k + 1);
      current.reset(x);
      return;
    }
    rec(k + 1);
    current.set(x);
    rec(k + 1);
    current.reset(x);
  };
  rec(0);
  sort_canonical(p, out);
  return out;
}

inline ElementSet maximal_points(const Poset& p) {
  ElementSet s(p.size());
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p.up(x).count() == 1) s.set(x);
  return s;
}

inline ElementSet minimal_points(const Poset& p) {
  ElementSet s(p.size());
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p.down(x).count() == 1) s.set(x);
  return s;
}

inline bool is_maximal(const Poset& p, std::size_t x) { return p.up(x).count() == 1; }
inline bool is_minimal(const Poset& p, std::size_t x) { return p.down(x).count() == 1; }

/// Elements covering x.
inline ElementSet covers_of(const Poset& p, std::size_t x) {
  ElementSet s(p.size());
  for (const auto& [lo, hi] : p.covers())
    if (lo == x) s.set(hi);
  return s;
}

/// Elements covered by x.
inline ElementSet covered_by(const Poset& p, std::size_t x) {
  ElementSet s(p.size());
  for (const auto& [lo, hi] : p.covers())
    if (hi == x) s.set(lo);
  return s;
}

/// Elements sorted by label, the deterministic iteration order for outputs.
inline std::vector<std::size_t> label_order(const Poset& p) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return p.label_rank(a) < p.label_rank(b); });
  return order;
}

/// Maximal cover chains, bottom to top, in label order.
inline std::vector<Chain> maximal_chains(const Poset& p) {
  std::vector<std::vector<std::size_t>> up_covers(p.size());
  for (const auto& [lo, hi] : p.covers()) up_covers[lo].push_back(hi);
  for (auto& v : up_covers)
    std::sort(v.begin(), v.end(), [&](std::size_t a, std::size_t b) { return p.label_rank(a) < p.label_rank(b); });

  std::vector<Chain> out;
  Chain current;
  std::function<void(std::size_t)> walk = [&](std::size_t x) {
    current.push_back(x);
    if (up_covers[x].empty()) out.push_back(current);
    for (std::size_t y : up_covers[x]) walk(y);
    current.pop_back();
  };
  for (std::size_t x : label_order(p))
    if (is_minimal(p, x)) walk(x);
  return out;
}

namespace detail {

/// Backtracking search for order isomorphisms a -> b.  `visit` returns false
/// to stop the search.
inline void search_isomorphisms(const Poset& a, const Poset& b,
                                const std::function<bool(const Permutation&)>& visit) {
  const std::size_t n = a.size();
  if (b.size() != n) return;
  auto signature = [](const Poset& p, std::size_t x) {
    return std::make_pair(p.down(x).count(), p.up(x).count());
  };
  // Assign the most constrained (rarest signature) elements first.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> freq;
  for (std::size_t x = 0; x < n; ++x) ++freq[signature(a, x)];
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return freq[signature(a, x)] < freq[signature(a, y)];
  });

  Permutation image(n, n);
  std::vector<bool> used(n, false);
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (stop) return;
    if (k == n) {
      if (!visit(image)) stop = true;
      return;
    }
    const std::size_t x = order[k];
    for (std::size_t y = 0; y < n && !stop; ++y) {
      if (used[y] || signature(a, x) != signature(b, y)) continue;
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j) {
        const std::size_t u = order[j];
        ok = a.leq(x, u) == b.leq(y, image[u]) && a.leq(u, x) == b.leq(image[u], y);
      }
      if (!ok) continue;
      image[x] = y;
      used[y] = true;
      rec(k + 1);
      used[y] = false;
      image[x] = n;
    }
  };
  rec(0);
}

}  // namespace detail

/// All order automorphisms, as image vectors, sorted lexicographically (the
/// identity comes first).
inline std::vector<Permutation> automorphisms(const Poset& p, const Limits& limits = {}) {
  if (p.size() > limits.automorphisms)
    throw TooLarge("automorphism search limited to " + std::to_string(limits.automorphisms) +
                   " elements, poset has " + std::to_string(p.size()));
  std::vector<Permutation> out;
  detail::search_isomorphisms(p, p, [&](const Permutation& perm) {
    out.push_back(perm);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// An order isomorphism a -> b if one exists (labels are ignored).
inline std::optional<Permutation> find_isomorphism(const Poset& a, const Poset& b) {
  if (a.size() != b.size() || a.covers().size() != b.covers().size()) return std::nullopt;
  std::optional<Permutation> found;
  detail::search_isomorphisms(a, b, [&](const Permutation& perm) {
    found = perm;
    return false;
  });
  return found;
}

inline bool is_isomorphic(const Poset& a, const Poset& b) { return find_isomorphism(a, b).has_value(); }

/// Subposet induced on `s`, keeping the element order of `p`.
inline Poset induced(const Poset& p, const ElementSet& s) {
  const auto keep = members(s);
  std::vector<std::string> labels;
  std::vector<std::size_t> where(p.size(), p.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    labels.push_back(p.label(keep[i]));
    where[keep[i]] = i;
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t x : keep)
    for (std::size_t y : keep)
      if (p.less(x, y)) edges.emplace_back(where[x], where[y]);
  return Poset::from_edges(std::move(labels), edges);
}

// ---------------------------------------------------------------------------
// Text formats

inline std::string quote_dot(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

/// Hasse diagram in DOT; edges point upward along cover pairs.
inline std::string hasse_dot(const Poset& p) {
  std::ostringstream os;
  os << "digraph hasse {\n  rankdir=BT;\n";
  for (std::size_t x : label_order(p)) os << "  " << quote_dot(p.label(x)) << ";\n";
  auto covers = p.covers();
  std::sort(covers.begin(), covers.end(), [&](const auto& a, const auto& b) {
    return std::make_pair(p.label_rank(a.first), p.label_rank(a.second)) <
           std::make_pair(p.label_rank(b.first), p.label_rank(b.second));
  });
  for (const auto& [lo, hi] : covers)
    os << "  " << quote_dot(p.label(lo)) << " -> " << quote_dot(p.label(hi)) << ";\n";
  os << "}\n";
  return os.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

inline std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

}  // namespace detail

/// Parses the poset text format:
///
///     # comment
///     elements: a b c
///     a < b
///     a < c
inline Poset parse_poset(std::string_view text) {
  std::vector<std::string> labels;
  bool have_elements = false;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream is{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto line = detail::strip_comment(raw);
    if (line.empty()) continue;
    const auto where = " (line " + std::to_string(line_no) + ")";
    if (line.rfind("elements:", 0) == 0) {
      if (have_elements) throw ParseError("duplicate 'elements:' line" + where);
      labels = detail::split_words(line.substr(9));
      have_elements = true;
      continue;
    }
    const auto lt = line.find('<');
    if (lt == std::string_view::npos) throw ParseError("expected 'a < b'" + where);
    const auto lo = detail::split_words(line.substr(0, lt));
    const auto hi = detail::split_words(line.substr(lt + 1));
    if (lo.size() != 1 || hi.size() != 1) throw ParseError("expected 'a < b'" + where);
    pairs.emplace_back(lo[0], hi[0]);
  }
  if (!have_elements) throw ParseError("missing 'elements:' line");
  return Poset::from_covers(std::move(labels), pairs);
}

/// Inverse of parse_poset: elements in declaration order, cover pairs in
/// label order.
inline std::string to_text(const Poset& p) {
  std::ostringstream os;
  os << "elements:";
  for (const auto& l : p.labels()) os << ' ' << l;
  os << '\n';
  auto covers = p.covers();
  std::sort(covers.begin(), covers.end(), [&](const auto& a, const auto& b) {
    return std::make_pair(p.label_rank(a.first), p.label_rank(a.second)) <
           std::make_pair(p.label_rank(b.first), p.label_rank(b.second));
  });
  for (const auto& [lo, hi] : covers) os << p.label(lo) << " < " << p.label(hi) << '\n';
  return os.str();
}

}  // namespace afspec
