#pragma once

// Independent reference implementations used by the test suite.  Nothing in
// here calls into the library's algorithms beyond constructing values, so the
// tests compare two unrelated computations.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "afspec/poset.hpp"

namespace oracle {

/// Strict order as an n x n boolean matrix: lt[i][j] means i < j.
using Relation = std::vector<std::vector<bool>>;

inline bool is_strict_order(const Relation& lt) {
  const std::size_t n = lt.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (lt[i][i]) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (lt[i][j] && lt[j][i]) return false;
      if (!lt[i][j]) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (lt[j][k] && !lt[i][k]) return false;
    }
  }
  return true;
}

inline std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i));
  return labels;
}

inline afspec::Poset to_poset(const Relation& lt, std::vector<std::string> labels = {}) {
  if (labels.empty()) labels = default_labels(lt.size());
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < lt.size(); ++i)
    for (std::size_t j = 0; j < lt.size(); ++j)
      if (lt[i][j]) edges.emplace_back(i, j);
  return afspec::Poset::from_edges(std::move(labels), edges);
}

inline Relation relation_of(const afspec::Poset& p) {
  Relation lt(p.size(), std::vector<bool>(p.size(), false));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) lt[i][j] = p.less(i, j);
  return lt;
}

/// Cover pairs computed straight from the definition.
inline std::set<std::pair<std::size_t, std::size_t>> covers(const Relation& lt) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = lt.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!lt[i][j]) continue;
      bool between = false;
      for (std::size_t k = 0; k < n && !between; ++k) between = lt[i][k] && lt[k][j];
      if (!between) out.emplace(i, j);
    }
  return out;
}

/// Number of labelled posets on n points by brute force over all strict
/// relations (n <= 5).
inline std::uint64_t labelled_count_bruteforce(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) pairs.emplace_back(i, j);
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    Relation lt(n, std::vector<bool>(n, false));
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if ((mask >> b) & 1U) lt[pairs[b].first][pairs[b].second] = true;
    if (is_strict_order(lt)) ++count;
  }
  return count;
}

/// All labelled strict orders on n points, by adding point n-1 to each order
/// on n-1 points with a compatible (down-set, up-set) pair.
inline std::vector<Relation> labelled_posets(std::size_t n) {
  if (n == 0) return {Relation{}};
  std::vector<Relation> out;
  for (const auto& base : labelled_posets(n - 1)) {
    const std::size_t m = n - 1;
    for (std::uint32_t down = 0; down < (1U << m); ++down) {
      for (std::uint32_t up = 0; up < (1U << m); ++up) {
        if (down & up) continue;
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i)
          for (std::size_t j = 0; j < m && ok; ++j) {
            if (!base[i][j]) continue;
            // down must be a down-set and up an up-set
            if (((down >> j) & 1U) && !((down >> i) & 1U)) ok = false;
            if (((up >> i) & 1U) && !((up >> j) & 1U)) ok = false;
          }
        for (std::size_t i = 0; i < m && ok; ++i)
          for (std::size_t j = 0; j < m && ok; ++j)
            if (((down >> i) & 1U) && ((up >> j) & 1U) && !base[i][j]) ok = false;
        if (!ok) continue;
        Relation lt(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < m; ++j) lt[i][j] = base[i][j];
          lt[i][m] = (down >> i) & 1U;
          lt[m][i] = (up >> i) & 1U;
        }
        out.push_back(std::move(lt));
      }
    }
  }
  return out;
}

/// Canonical form by brute force over permutations that respect the
/// (|down|, |up|) signature.  Returns the lexicographically least adjacency
/// string.
inline std::string canonical_form(const Relation& lt) {
  const std::size_t n = lt.size();
  std::vector<std::pair<std::size_t, std::size_t>> sig(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (lt[j][i]) ++sig[i].first;
      if (lt[i][j]) ++sig[i].second;
    }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sig[a] < sig[b]; });
  // Permute only within blocks of equal signature.
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sig[order[j]] == sig[order[i]]) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }
  std::string best;
  std::string sigtext;
  for (std::size_t i : order) sigtext += std::to_string(sig[i].first) + "," + std::to_string(sig[i].second) + ";";
  std::function<void(std::size_t)> rec = [&](std::size_t b) {
    if (b == blocks.size()) {
      std::string s = sigtext;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s += lt[order[i]][order[j]] ? '1' : '0';
      if (best.empty() || s < best) best = s;
      return;
    }
    auto first = order.begin() + static_cast<std::ptrdiff_t>(blocks[b].first);
    auto last = order.begin() + static_cast<std::ptrdiff_t>(blocks[b].second);
    std::sort(first, last);
    do rec(b + 1);
    while (std::next_permutation(first, last));
  };
  rec(0);
  return best;
}

/// One representative of every isomorphism class of posets on n points.
/// Each class on n points contains a poset whose last point is maximal, so
/// extending the classes on n-1 points by a new maximal point over every
/// down-set reaches all of them.
inline std::vector<Relation> posets_up_to_iso(std::size_t n) {
  if (n == 0) return {Relation{}};
  std::vector<Relation> out;
  std::set<std::string> seen;
  for (const auto& base : posets_up_to_iso(n - 1)) {
    const std::size_t m = n - 1;
    for (std::uint32_t down = 0; down < (1U << m); ++down) {
      bool is_down_set = true;
      for (std::size_t i = 0; i < m && is_down_set; ++i)
        for (std::size_t j = 0; j < m && is_down_set; ++j)
          if (base[i][j] && ((down >> j) & 1U) && !((down >> i) & 1U)) is_down_set = false;
      if (!is_down_set) continue;
      Relation lt(n, std::vector<bool>(n, false));
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) lt[i][j] = base[i][j];
        lt[i][m] = (down >> i) & 1U;
      }
      if (seen.insert(canonical_form(lt)).second) out.push_back(std::move(lt));
    }
  }
  return out;
}

/// Number of order automorphisms by brute force over all permutations.
inline std::uint64_t automorphism_count(const Relation& lt) {
  const std::size_t n = lt.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) ok = lt[i][j] == lt[perm[i]][perm[j]];
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

inline std::uint64_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

/// All up-sets by brute force over every subset.
inline std::vector<std::vector<std::size_t>> up_sets(const Relation& lt) {
  const std::size_t n = lt.size();
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        if (lt[i][j] && ((mask >> i) & 1U) && !((mask >> j) & 1U)) ok = false;
    if (!ok) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1U) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

/// Number of saturated chains (consecutive cover steps) from a minimal
/// point up to x.
inline std::uint64_t saturated_chain_count(const Relation& lt, std::size_t x) {
  const auto cov = covers(lt);
  std::map<std::size_t, std::uint64_t> memo;
  std::function<std::uint64_t(std::size_t)> count = [&](std::size_t y) -> std::uint64_t {
    if (auto it = memo.find(y); it != memo.end()) return it->second;
    std::uint64_t total = 0;
    bool has_lower = false;
    for (const auto& [a, b] : cov)
      if (b == y) {
        has_lower = true;
        total += count(a);
      }
    if (!has_lower) total = 1;
    return memo[y] = total;
  };
  return count(x);
}

/// Random strict order: a random DAG on a random linear extension, closed
/// transitively.
inline Relation random_order(std::mt19937_64& rng, std::size_t n, double density) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution edge(density);
  Relation lt(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (edge(rng)) lt[perm[a]][perm[b]] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (lt[i][k] && lt[k][j]) lt[i][j] = true;
  return lt;
}

/// The fixed corpus of random posets used by the property tests: 500 posets
/// with 1..8 points.
inline std::vector<afspec::Poset> random_corpus(std::size_t count = 500, std::uint64_t seed = 20240601) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  std::uniform_real_distribution<double> density(0.1, 0.6);
  std::vector<afspec::Poset> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(to_poset(random_order(rng, size(rng), density(rng))));
  return out;
}

}  // namespace oracle
