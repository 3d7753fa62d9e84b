#pragma once

// Integral simplicial homology of the order complex of a finite poset.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "afspec/errors.hpp"
#include "afspec/limits.hpp"
#include "afspec/poset.hpp"

namespace afspec {

using BigInt = boost::multiprecision::cpp_int;
using IntMatrix = std::vector<std::vector<BigInt>>;

/// Simplices are chains listed bottom to top; simplices[k] holds the
/// k-simplices in lexicographic order of element indices.
struct SimplicialComplex {
  std::vector<std::string> vertices;
  std::vector<std::vector<Chain>> simplices;

  std::size_t dimension() const { return simplices.empty() ? 0 : simplices.size() - 1; }
  std::size_t count(std::size_t k) const { return k < simplices.size() ? simplices[k].size() : 0; }
  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& s : simplices) n += s.size();
    return n;
  }
};

inline SimplicialComplex order_complex(const Poset& p, const Limits& limits = {}) {
  SimplicialComplex sc;
  sc.vertices = p.labels();
  // Elements sorted so that every chain comes out bottom to top.
  std::vector<std::size_t> order(p.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p.down(a).count() < p.down(b).count(); });
  std::size_t total = 0;
  Chain current;
  std::function<void(std::size_t)> extend = [&](std::size_t x) {
    current.push_back(x);
    if (++total > limits.simplices)
      throw TooLarge("order complex has more than " + std::to_string(limits.simplices) + " simplices");
    if (sc.simplices.size() < current.size()) sc.simplices.resize(current.size());
    sc.simplices[current.size() - 1].push_back(current);
    for (std::size_t y : order)
      if (p.less(x, y)) extend(y);
    current.pop_back();
  };
  for (std::size_t x : order) extend(x);
  for (auto& level : sc.simplices) std::sort(level.begin(), level.end());
  return sc;
}

/// ∂_k : C_k -> C_{k-1}; rows are (k-1)-simplices, columns k-simplices.
/// Removing the i-th vertex contributes (-1)^i.  ∂_0 has no rows.
inline IntMatrix boundary_matrix(const SimplicialComplex& sc, std::size_t k) {
  const auto cols = sc.count(k);
  if (k == 0) return IntMatrix(0);
  const auto rows = sc.count(k - 1);
  std::map<Chain, std::size_t> index;
  for (std::size_t i = 0; i < rows; ++i) index.emplace(sc.simplices[k - 1][i], i);
  IntMatrix m(rows, std::vector<BigInt>(cols, 0));
  for (std::size_t j = 0; j < cols; ++j) {
    const auto& s = sc.simplices[k][j];
    for (std::size_t i = 0; i < s.size(); ++i) {
      Chain face = s;
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
      m[index.at(face)][j] += (i % 2 == 0) ? 1 : -1;
    }
  }
  return m;
}

struct SmithForm {
  std::vector<BigInt> factors;  // nonzero invariant factors, each dividing the next
  std::size_t rank() const { return factors.size(); }
};

/// Exact Smith normal form by unimodular row and column operations.
inline SmithForm smith_normal_form(IntMatrix a) {
  using boost::multiprecision::abs;
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  SmithForm out;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    // Pivot: smallest nonzero absolute value in the remaining block.
    std::size_t pi = m, pj = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a[i][j] != 0 && (pi == m || abs(a[i][j]) < abs(a[pi][pj]))) pi = i, pj = j;
    if (pi == m) break;
    std::swap(a[t], a[pi]);
    for (auto& row : a) std::swap(row[t], row[pj]);

    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        const BigInt q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < n; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        const BigInt q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < m; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (auto& row : a) std::swap(row[t], row[j]);
          clean = false;
        }
      }
      if (!clean) continue;
      // Divisibility: fold a row whose entries the pivot does not divide.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n && divides; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t c = t; c < n; ++c) a[t][c] += a[i][c];
            divides = false;
          }
      if (divides) break;
    }
    out.factors.push_back(abs(a[t][t]));
  }
  return out;
}

struct HomologyGroup {
  std::size_t betti = 0;
  std::vector<BigInt> torsion;  // invariant factors > 1
  bool operator==(const HomologyGroup&) const = default;
};

/// "0", "Z", "Z^2", "Z ⊕ Z/2", ...
inline std::string format_group(const HomologyGroup& g, bool ascii = false) {
  std::vector<std::string> parts;
  if (g.betti == 1) parts.push_back("Z");
  if (g.betti > 1) parts.push_back("Z^" + std::to_string(g.betti));
  for (const auto& t : g.torsion) parts.push_back("Z/" + t.str());
  if (parts.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? (ascii ? " (+) " : " ⊕ ") : "") + parts[i];
  return out;
}

/// H_0 .. H_dim of the order complex.  Empty poset: no groups.
inline std::vector<HomologyGroup> homology(const SimplicialComplex& sc) {
  const auto top = sc.simplices.size();
  std::vector<SmithForm> snf(top + 1);
  for (std::size_t k = 1; k < top; ++k) snf[k] = smith_normal_form(boundary_matrix(sc, k));
  std::vector<HomologyGroup> out;
  for (std::size_t k = 0; k < top; ++k) {
    HomologyGroup g;
    const auto rank_k = k == 0 ? 0 : snf[k].rank();
    const auto rank_next = k + 1 < top ? snf[k + 1].rank() : 0;
    g.betti = sc.count(k) - rank_k - rank_next;
    if (k + 1 < top)
      for (const auto& f : snf[k + 1].factors)
        if (f > 1) g.torsion.push_back(f);
    out.push_back(std::move(g));
  }
  return out;
}

inline std::vector<HomologyGroup> homology(const Poset& p, const Limits& limits = {}) {
  return homology(order_complex(p, limits));
}

inline std::string homology_table(const std::vector<HomologyGroup>& groups, bool ascii = false) {
  std::string out;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    out += "H" + std::to_string(k) + " = " + format_group(groups[k], ascii) + "   betti " +
           std::to_string(groups[k].betti);
    if (!groups[k].torsion.empty()) {
      out += "  torsion";
      for (const auto& t : groups[k].torsion) out += " " + t.str();
    }
    out += "\n";
  }
  return out;
}

}  // namespace afspec
