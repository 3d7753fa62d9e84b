#pragma once

// Finite T0 quotient of a sampled space with a distinguished open cover.
// Points with the same cover-membership fingerprint are identified.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "afspec/errors.hpp"
#include "afspec/poset.hpp"

namespace afspec {

struct CoverMember {
  std::string name;
  ElementSet points;
};

class CoveredSpace {
 public:
  CoveredSpace(std::vector<std::string> points, std::vector<std::pair<std::string, std::vector<std::string>>> cover)
      : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (!index_.emplace(points_[i], i).second) throw DuplicateLabel("duplicate point '" + points_[i] + "'");
    ElementSet covered(points_.size());
    for (auto& [name, names] : cover) {
      ElementSet s(points_.size());
      for (const auto& n : names) {
        auto it = index_.find(n);
        if (it == index_.end()) throw UnknownLabel("open '" + name + "' references unknown point '" + n + "'");
        s.set(it->second);
      }
      if (s.none()) throw InvalidSpace("open '" + name + "' is empty");
      covered |= s;
      cover_.push_back({name, std::move(s)});
    }
    if (!covered.all()) {
      ElementSet missing = ~covered;
      throw InvalidSpace("points not covered by any open: " + format_set(points_, missing));
    }
  }

  const std::vector<std::string>& points() const { return points_; }
  const std::vector<CoverMember>& cover() const { return cover_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<std::string> points_;
  std::map<std::string, std::size_t> index_;
  std::vector<CoverMember> cover_;
};

/// Lattice generated by the cover under finite unions and intersections, plus
/// the empty set and the whole space, in canonical order.
inline SubsetFamily topology_of(const CoveredSpace& space) {
  std::set<ElementSet> seen;
  std::vector<ElementSet> family;
  auto add = [&](const ElementSet& s) {
    if (seen.insert(s).second) family.push_back(s);
  };
  ElementSet none(space.size());
  add(none);
  add(~none);
  for (const auto& m : space.cover()) add(m.points);
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      add(family[i] | family[j]);
      add(family[i] & family[j]);
    }
  }
  sort_canonical(space.points(), family);
  return family;
}

struct Quotient {
  Poset poset;
  /// projection[i] = index in `poset` of the class of point i.
  std::vector<std::size_t> projection;
};

/// Identifies points with equal cover fingerprints.  [x] <= [y] iff every
/// cover member containing y also contains x.  Each class is labelled by its
/// lexicographically least point; classes appear in order of first point.
inline Quotient quotient_poset(const CoveredSpace& space) {
  const std::size_t n = space.size();
  const std::size_t m = space.cover().size();
  auto fingerprint = [&](std::size_t x) {
    ElementSet f(m);
    for (std::size_t k = 0; k < m; ++k)
      if (space.cover()[k].points.test(x)) f.set(k);
    return f;
  };
  std::map<ElementSet, std::size_t> class_of;
  std::vector<ElementSet> class_fp;
  std::vector<std::string> labels;
  Quotient q;
  q.projection.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    const auto f = fingerprint(x);
    auto [it, fresh] = class_of.emplace(f, class_fp.size());
    if (fresh) {
      class_fp.push_back(f);
      labels.push_back(space.points()[x]);
    } else if (space.points()[x] < labels[it->second]) {
      labels[it->second] = space.points()[x];
    }
    q.projection[x] = it->second;
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < class_fp.size(); ++a)
    for (std::size_t b = 0; b < class_fp.size(); ++b)
      if (a != b && class_fp[b].is_subset_of(class_fp[a])) edges.emplace_back(a, b);
  q.poset = Poset::from_edges(std::move(labels), edges);
  return q;
}

/// Parses
///
///     points: p1 p2 p3
///     open O1: p1 p2
inline CoveredSpace parse_covered_space(std::string_view text) {
  std::vector<std::string> points;
  bool have_points = false;
  std::vector<std::pair<std::string, std::vector<std::string>>> cover;
  std::istringstream is{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto line = detail::strip_comment(raw);
    if (line.empty()) continue;
    const auto where = " (line " + std::to_string(line_no) + ")";
    if (line.rfind("points:", 0) == 0) {
      if (have_points) throw ParseError("duplicate 'points:' line" + where);
      points = detail::split_words(line.substr(7));
      have_points = true;
    } else if (line.rfind("open", 0) == 0) {
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) throw ParseError("expected 'open NAME: points'" + where);
      const auto name = detail::split_words(line.substr(4, colon - 4));
      if (name.size() != 1) throw ParseError("expected exactly one open name" + where);
      cover.emplace_back(name[0], detail::split_words(line.substr(colon + 1)));
    } else {
      throw ParseError("unrecognised line" + where);
    }
  }
  if (!have_points) throw ParseError("missing 'points:' line");
  return CoveredSpace(std::move(points), std::move(cover));
}

/// Returns a copy of `p` with labels replaced according to `renames`
/// (labels not mentioned are kept).
inline Poset relabel(const Poset& p, const std::map<std::string, std::string>& renames) {
  for (const auto& [from, to] : renames)
    if (!p.contains(from)) throw UnknownLabel("cannot rename unknown element '" + from + "'");
  std::vector<std::string> labels = p.labels();
  for (auto& l : labels)
    if (auto it = renames.find(l); it != renames.end()) l = it->second;
  std::vector<std::pair<std::size_t, std::size_t>> edges(p.covers().begin(), p.covers().end());
  return Poset::from_edges(std::move(labels), edges);
}

}  // namespace afspec
