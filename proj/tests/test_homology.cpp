#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "afspec/homology.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace afspec;

namespace {

std::vector<HomologyGroup> groups(std::initializer_list<std::size_t> betti) {
  std::vector<HomologyGroup> out;
  for (auto b : betti) out.push_back({b, {}});
  return out;
}

IntMatrix matrix(std::initializer_list<std::initializer_list<long>> rows) {
  IntMatrix m;
  for (const auto& r : rows) {
    m.emplace_back();
    for (long v : r) m.back().push_back(v);
  }
  return m;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const auto n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  IntMatrix c(n, std::vector<BigInt>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

// Determinantal divisors: the product of the first k invariant factors is the
// gcd of all k x k minors.
BigInt det(IntMatrix m) {
  const auto n = m.size();
  if (n == 0) return 1;
  BigInt total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      minor.emplace_back();
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) minor.back().push_back(m[i][c]);
    }
    total += (j % 2 ? -1 : 1) * m[0][j] * det(minor);
  }
  return total;
}

std::vector<BigInt> factors_by_minors(const IntMatrix& a) {
  const auto rows = a.size(), cols = a[0].size();
  std::vector<BigInt> divisors{1};
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    BigInt g = 0;
    for (unsigned rmask = 0; rmask < (1u << rows); ++rmask) {
      if (static_cast<std::size_t>(__builtin_popcount(rmask)) != k) continue;
      for (unsigned cmask = 0; cmask < (1u << cols); ++cmask) {
        if (static_cast<std::size_t>(__builtin_popcount(cmask)) != k) continue;
        IntMatrix sub;
        for (std::size_t i = 0; i < rows; ++i)
          if (rmask >> i & 1) {
            sub.emplace_back();
            for (std::size_t j = 0; j < cols; ++j)
              if (cmask >> j & 1) sub.back().push_back(a[i][j]);
          }
        g = boost::multiprecision::gcd(g, det(sub));
      }
    }
    if (g == 0) break;
    divisors.push_back(g);
  }
  std::vector<BigInt> out;
  for (std::size_t k = 1; k < divisors.size(); ++k) out.push_back(divisors[k] / divisors[k - 1]);
  return out;
}

std::size_t components(const Poset& p) {
  std::vector<std::size_t> parent(p.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto& [a, b] : p.covers()) parent[find(a)] = find(b);
  std::size_t n = 0;
  for (std::size_t x = 0; x < p.size(); ++x) n += find(x) == x;
  return n;
}

/// Face poset of the six-vertex triangulation of the real projective plane.
Poset projective_plane() {
  const std::vector<std::string> triangles{"123", "134", "145", "156", "126", "235", "346", "245", "356", "246"};
  std::set<std::string> faces;
  for (const auto& t : triangles) {
    faces.insert(t);
    for (std::size_t i = 0; i < 3; ++i) {
      faces.insert(std::string(1, t[i]));
      std::string e = t;
      e.erase(i, 1);
      faces.insert(e);
    }
  }
  std::vector<std::string> labels(faces.begin(), faces.end());
  std::vector<std::pair<std::string, std::string>> covers;
  for (const auto& a : labels)
    for (const auto& b : labels)
      if (b.size() == a.size() + 1 && std::includes(b.begin(), b.end(), a.begin(), a.end())) covers.emplace_back(a, b);
  return Poset::from_covers(labels, covers);
}

}  // namespace

TEST_CASE("order complexes", "[homology]") {
  const auto v = order_complex(corpus::vee());
  CHECK(v.count(0) == 3);
  CHECK(v.count(1) == 2);
  CHECK(v.count(2) == 0);
  const auto c = order_complex(corpus::circle());
  CHECK(c.count(0) == 4);
  CHECK(c.count(1) == 4);
  CHECK(c.simplices.size() == 2);
  const auto s = order_complex(corpus::singleton());
  CHECK(s.total() == 1);
  CHECK(order_complex(corpus::chain(4)).total() == 15);
  Limits small;
  small.simplices = 10;
  CHECK_THROWS_AS(order_complex(corpus::chain(4), small), TooLarge);
}

TEST_CASE("smith normal form examples", "[homology]") {
  CHECK(smith_normal_form(matrix({{2, 0}, {0, 3}})).factors == std::vector<BigInt>{1, 6});
  CHECK(smith_normal_form(matrix({{0, 0}, {0, 0}})).rank() == 0);
  CHECK(smith_normal_form(matrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})).factors == std::vector<BigInt>{1, 1, 1});
  CHECK(smith_normal_form(matrix({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}})).factors == std::vector<BigInt>{2, 6, 12});
  CHECK(smith_normal_form(IntMatrix{}).rank() == 0);
}

TEST_CASE("smith normal form agrees with determinantal divisors", "[homology]") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> entry(-6, 6), dim(1, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rows = static_cast<std::size_t>(dim(rng)), cols = static_cast<std::size_t>(dim(rng));
    IntMatrix a(rows, std::vector<BigInt>(cols));
    for (auto& r : a)
      for (auto& v : r) v = entry(rng) * (trial % 3 == 0 ? 2 : 1);
    const auto snf = smith_normal_form(a);
    CHECK(snf.factors == factors_by_minors(a));
    for (std::size_t i = 1; i < snf.factors.size(); ++i) CHECK(snf.factors[i] % snf.factors[i - 1] == 0);
  }
}

TEST_CASE("homology of the worked examples", "[homology]") {
  CHECK(homology(corpus::circle()) == groups({1, 1}));
  CHECK(homology(corpus::sphere()) == groups({1, 0, 1}));
  CHECK(homology(corpus::vee()) == groups({1, 0}));
  CHECK(homology(corpus::singleton()) == groups({1}));
  CHECK(homology(corpus::antichain(3)) == groups({3}));
  CHECK(homology(Poset::from_covers({}, {})).empty());
  CHECK(homology_table(homology(corpus::sphere())) == "H0 = Z   betti 1\nH1 = 0   betti 0\nH2 = Z   betti 1\n");
}

TEST_CASE("circle family has one loop", "[homology]") {
  for (std::size_t n = 2; n <= 8; ++n) {
    INFO(n);
    CHECK(homology(corpus::circle_family(n)) == groups({1, 1}));
  }
}

TEST_CASE("torsion in the projective plane", "[homology]") {
  const auto h = homology(projective_plane());
  REQUIRE(h.size() == 3);
  CHECK(h[0] == HomologyGroup{1, {}});
  CHECK(h[1] == HomologyGroup{0, {2}});
  CHECK(h[2] == HomologyGroup{0, {}});
  CHECK(format_group(h[1]) == "Z/2");
  CHECK(format_group({2, {3}}, true) == "Z^2 (+) Z/3");
}

TEST_CASE("boundaries compose to zero and Euler characteristics agree", "[homology]") {
  auto posets = oracle::random_corpus();
  for (const auto& p : corpus::named_posets()) posets.push_back(p);
  for (const auto& p : posets) {
    const auto sc = order_complex(p);
    for (std::size_t k = 2; k < sc.simplices.size(); ++k) {
      const auto prod = multiply(boundary_matrix(sc, k - 1), boundary_matrix(sc, k));
      bool zero = true;
      for (const auto& r : prod)
        for (const auto& v : r) zero = zero && v == 0;
      CHECK(zero);
    }
    const auto h = homology(sc);
    long chain_euler = 0, betti_euler = 0;
    for (std::size_t k = 0; k < sc.simplices.size(); ++k) {
      const long sign = k % 2 ? -1 : 1;
      chain_euler += sign * static_cast<long>(sc.count(k));
      betti_euler += sign * static_cast<long>(h[k].betti);
    }
    CHECK(chain_euler == betti_euler);
    CHECK(h[0].betti == components(p));
    CHECK(h[0].torsion.empty());
  }
}
