#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "afspec/quotient.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace afspec;

namespace {

// Eight sample points on the circle: two in each region of the four-arc cover.
// O1 and O3 are the two overlaps of the upper arc O2 and the lower arc O4.
const char* kCircleSpace =
    "points: x1 x1b x2 x2b x3 x3b x4 x4b\n"
    "open O1: x1 x1b\n"
    "open O2: x1 x1b x2 x2b x3 x3b\n"
    "open O3: x3 x3b\n"
    "open O4: x1 x1b x3 x3b x4 x4b\n";

/// Union/intersection closure computed by iterating to a fixed point over
/// every pair, starting from the cover plus the trivial sets.
std::set<std::set<std::string>> brute_topology(const CoveredSpace& s) {
  std::set<std::set<std::string>> family{{}, {s.points().begin(), s.points().end()}};
  for (const auto& m : s.cover()) {
    std::set<std::string> named;
    for (auto i : members(m.points)) named.insert(s.points()[i]);
    family.insert(named);
  }
  for (bool grew = true; grew;) {
    grew = false;
    const auto snapshot = family;
    for (const auto& a : snapshot)
      for (const auto& b : snapshot) {
        std::set<std::string> u = a, i;
        u.insert(b.begin(), b.end());
        for (const auto& x : a)
          if (b.count(x)) i.insert(x);
        grew |= family.insert(u).second;
        grew |= family.insert(i).second;
      }
  }
  return family;
}

std::set<std::set<std::string>> as_names(const CoveredSpace& s, const SubsetFamily& f) {
  std::set<std::set<std::string>> out;
  for (const auto& set : f) {
    std::set<std::string> named;
    for (auto i : members(set)) named.insert(s.points()[i]);
    out.insert(named);
  }
  return out;
}

}  // namespace

TEST_CASE("indiscrete and discrete covers", "[quotient]") {
  const CoveredSpace indiscrete({"a", "b", "c"}, {{"U", {"a", "b", "c"}}});
  CHECK(topology_of(indiscrete).size() == 2);
  const auto q1 = quotient_poset(indiscrete);
  CHECK(q1.poset.size() == 1);
  CHECK(q1.poset.label(0) == "a");
  CHECK(q1.projection == std::vector<std::size_t>{0, 0, 0});

  const CoveredSpace discrete({"a", "b", "c"}, {{"A", {"a"}}, {"B", {"b"}}, {"C", {"c"}}});
  CHECK(topology_of(discrete).size() == 8);
  const auto q2 = quotient_poset(discrete);
  CHECK(is_isomorphic(q2.poset, corpus::antichain(3)));
  CHECK(q2.projection == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("topology of the sampled circle agrees with brute force", "[quotient]") {
  const auto s = parse_covered_space(kCircleSpace);
  const auto topo = topology_of(s);
  const auto expected = brute_topology(s);
  CHECK(as_names(s, topo) == expected);
  // O1, O3, O1 u O3, O2, O4 plus the empty set and the whole sample.
  CHECK(topo.size() == expected.size());
  CHECK(topo.size() == 7);
  CHECK(topo.front().none());
  CHECK(topo.back().all());
}

TEST_CASE("quotient of the sampled circle is the four point circle", "[quotient]") {
  const auto s = parse_covered_space(kCircleSpace);
  const auto q = quotient_poset(s);
  CHECK(q.poset == corpus::circle());
  // Each pair of samples collapses onto its region's point.
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(q.poset.label(q.projection[i]) == s.points()[i].substr(0, 2));
  // The images of the opens are the listed open sets of the circle poset.
  std::set<std::set<std::string>> images;
  for (const auto& o : topology_of(s)) {
    std::set<std::string> img;
    for (auto i : members(o)) img.insert(q.poset.label(q.projection[i]));
    images.insert(img);
  }
  for (const auto& open : std::vector<std::set<std::string>>{
           {"x1"}, {"x3"}, {"x1", "x2", "x3"}, {"x1", "x3", "x4"}})
    CHECK(images.count(open) == 1);
}

TEST_CASE("projection is continuous", "[quotient]") {
  const auto s = parse_covered_space(kCircleSpace);
  const auto q = quotient_poset(s);
  const auto topo = topology_of(s);
  const std::set<ElementSet> opens(topo.begin(), topo.end());
  for (std::size_t x = 0; x < q.poset.size(); ++x) {
    ElementSet pre(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      if (q.poset.down(x).test(q.projection[i])) pre.set(i);
    CHECK(opens.count(pre) == 1);
  }
}

TEST_CASE("quotient by the minimal open cover is idempotent", "[quotient]") {
  for (const auto& p : corpus::named_posets()) {
    std::vector<std::pair<std::string, std::vector<std::string>>> cover;
    for (std::size_t x = 0; x < p.size(); ++x) {
      std::vector<std::string> pts;
      for (auto y : members(p.down(x))) pts.push_back(p.label(y));
      cover.emplace_back("O_" + p.label(x), pts);
    }
    const CoveredSpace s(p.labels(), cover);
    const auto q = quotient_poset(s);
    CHECK(q.poset.size() == p.size());
    CHECK(is_isomorphic(q.poset, p));
  }
}

TEST_CASE("covered space validation", "[quotient]") {
  CHECK_THROWS_AS(CoveredSpace({"a", "b"}, {{"A", {"a"}}}), InvalidSpace);
  CHECK_THROWS_AS(CoveredSpace({"a"}, {{"A", {"a"}}, {"E", {}}}), InvalidSpace);
  CHECK_THROWS_AS(CoveredSpace({"a"}, {{"A", {"z"}}}), UnknownLabel);
  CHECK_THROWS_AS(parse_covered_space("open A: a\n"), ParseError);
  CHECK_THROWS_AS(parse_covered_space("points: a\nbogus\n"), ParseError);
}

TEST_CASE("relabelling quotient classes", "[quotient]") {
  const auto p = relabel(corpus::vee(), {{"q", "z"}});
  CHECK(p.label(0) == "z");
  CHECK(p.less(0, 1));
  CHECK_THROWS_AS(relabel(corpus::vee(), {{"nope", "z"}}), UnknownLabel);
}
