#pragma once

// Symbolic Hilbert spaces and operator algebras.
//
// A HilbertExpr is a tree of direct sums and tensor products over three kinds
// of atoms: separable factors l_name (a copy of l^2), finite spaces C^d and
// abstract named components H_name.  An AlgebraExpr is a generating set of
// block terms: multiples of the identity, compact operators, identity tensor
// compacts, full matrix blocks, and coupled terms whose parts share one
// compact factor.

#include <algorithm>
#include <cctype>
#include <compare>
#include <functional>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "afspec/errors.hpp"
#include "afspec/ext_nat.hpp"

namespace afspec {

class HilbertExpr {
 public:
  enum class Kind : std::uint8_t { Separable, Finite, Named, Tensor, Sum };

  Kind kind = Kind::Finite;
  std::string name;
  std::uint64_t dim = 1;
  std::vector<HilbertExpr> children;

  static HilbertExpr separable(std::string name) { return atom(Kind::Separable, std::move(name), 0); }
  static HilbertExpr finite(std::uint64_t d) { return atom(Kind::Finite, {}, d); }
  static HilbertExpr named(std::string name) { return atom(Kind::Named, std::move(name), 0); }
  static HilbertExpr tensor(std::vector<HilbertExpr> factors) { return node(Kind::Tensor, std::move(factors)); }
  static HilbertExpr sum(std::vector<HilbertExpr> summands) { return node(Kind::Sum, std::move(summands)); }

  /// C^d for finite d; the reserved separable factor l_inf otherwise.
  static HilbertExpr of_dimension(ExtNat d) { return d.is_finite() ? finite(d.value()) : separable("inf"); }

  bool is_atom() const { return kind != Kind::Tensor && kind != Kind::Sum; }
  bool is_zero() const { return kind == Kind::Finite && dim == 0; }
  bool is_unit() const { return kind == Kind::Finite && dim == 1; }

  std::strong_ordering operator<=>(const HilbertExpr& o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = name <=> o.name; c != 0) return c;
    if (auto c = dim <=> o.dim; c != 0) return c;
    return std::lexicographical_compare_three_way(children.begin(), children.end(), o.children.begin(),
                                                  o.children.end());
  }
  bool operator==(const HilbertExpr& o) const {
    return kind == o.kind && name == o.name && dim == o.dim && children == o.children;
  }

 private:
  static HilbertExpr atom(Kind k, std::string name, std::uint64_t d) {
    HilbertExpr h;
    h.kind = k;
    h.name = std::move(name);
    h.dim = d;
    return h;
  }
  static HilbertExpr node(Kind k, std::vector<HilbertExpr> children) {
    HilbertExpr h;
    h.kind = k;
    h.dim = 0;
    h.children = std::move(children);
    return h;
  }
};

/// Flattens nested sums and products, removes zero summands and unit factors,
/// multiplies finite factors together and sorts operands.  A product with a
/// zero factor is C^0, an empty sum is C^0 and an empty product is C^1.
inline HilbertExpr canonicalize(const HilbertExpr& h) {
  using K = HilbertExpr::Kind;
  if (h.is_atom()) return h;
  std::vector<HilbertExpr> flat;
  for (const auto& c : h.children) {
    auto cc = canonicalize(c);
    if (cc.kind == h.kind)
      flat.insert(flat.end(), cc.children.begin(), cc.children.end());
    else
      flat.push_back(std::move(cc));
  }
  std::vector<HilbertExpr> kept;
  if (h.kind == K::Sum) {
    for (auto& c : flat)
      if (!c.is_zero()) kept.push_back(std::move(c));
    if (kept.empty()) return HilbertExpr::finite(0);
  } else {
    std::uint64_t scalar = 1;
    for (auto& c : flat) {
      if (c.kind == K::Finite)
        scalar *= c.dim;
      else
        kept.push_back(std::move(c));
    }
    if (scalar == 0) return HilbertExpr::finite(0);
    if (scalar != 1 || kept.empty()) kept.push_back(HilbertExpr::finite(scalar));
  }
  if (kept.size() == 1) return kept.front();
  std::sort(kept.begin(), kept.end());
  return h.kind == K::Sum ? HilbertExpr::sum(std::move(kept)) : HilbertExpr::tensor(std::move(kept));
}

/// Distributes tensor products over sums: the result is a canonical sum of
/// products of atoms.
inline HilbertExpr expand(const HilbertExpr& h) {
  using K = HilbertExpr::Kind;
  using Monomial = std::vector<HilbertExpr>;
  std::function<std::vector<Monomial>(const HilbertExpr&)> terms = [&](const HilbertExpr& e) {
    if (e.is_atom()) return std::vector<Monomial>{{e}};
    std::vector<Monomial> out;
    if (e.kind == K::Sum) {
      for (const auto& c : e.children) {
        auto t = terms(c);
        out.insert(out.end(), t.begin(), t.end());
      }
      return out;
    }
    out.push_back({});
    for (const auto& c : e.children) {
      std::vector<Monomial> next;
      for (const auto& left : out)
        for (const auto& right : terms(c)) {
          Monomial m = left;
          m.insert(m.end(), right.begin(), right.end());
          next.push_back(std::move(m));
        }
      out = std::move(next);
    }
    return out;
  };
  std::vector<HilbertExpr> summands;
  for (auto& m : terms(h)) summands.push_back(HilbertExpr::tensor(std::move(m)));
  return canonicalize(HilbertExpr::sum(std::move(summands)));
}

/// Sum adds, tensor multiplies; separable and named components are infinite.
inline ExtNat total_dim(const HilbertExpr& h) {
  using K = HilbertExpr::Kind;
  switch (h.kind) {
    case K::Finite:
      return ExtNat(h.dim);
    case K::Separable:
    case K::Named:
      return ExtNat::infinity();
    case K::Sum: {
      ExtNat total(0);
      for (const auto& c : h.children) total = total + total_dim(c);
      return total;
    }
    case K::Tensor: {
      ExtNat total(1);
      for (const auto& c : h.children) total = total * total_dim(c);
      return total;
    }
  }
  return ExtNat(0);
}

struct RenderOptions {
  bool ascii = false;
  bool fuse = true;  // render coupled terms as one block rather than their parts
};

inline std::string sum_sep(const RenderOptions& o) { return o.ascii ? " (+) " : " ⊕ "; }
inline std::string tensor_sep(const RenderOptions& o) { return o.ascii ? " (x) " : " ⊗ "; }

inline std::string render(const HilbertExpr& h, const RenderOptions& o = {}) {
  using K = HilbertExpr::Kind;
  switch (h.kind) {
    case K::Separable:
      return "l" + h.name;
    case K::Finite:
      return "C^" + std::to_string(h.dim);
    case K::Named:
      return "H" + h.name;
    case K::Sum: {
      std::string out;
      for (std::size_t i = 0; i < h.children.size(); ++i) out += (i ? sum_sep(o) : "") + render(h.children[i], o);
      return out;
    }
    case K::Tensor: {
      std::string out;
      for (std::size_t i = 0; i < h.children.size(); ++i) {
        const auto& c = h.children[i];
        const auto inner = render(c, o);
        out += (i ? tensor_sep(o) : "") + (c.kind == K::Sum ? "(" + inner + ")" : inner);
      }
      return out;
    }
  }
  return {};
}

/// Applies `f` to every atom name of kind `k`.
inline HilbertExpr rename_atoms(const HilbertExpr& h, HilbertExpr::Kind k,
                                const std::function<std::string(const std::string&)>& f) {
  HilbertExpr out = h;
  if (h.kind == k) out.name = f(h.name);
  for (auto& c : out.children) c = rename_atoms(c, k, f);
  return out;
}

inline void collect_names(const HilbertExpr& h, HilbertExpr::Kind k, std::set<std::string>& out) {
  if (h.kind == k) out.insert(h.name);
  for (const auto& c : h.children) collect_names(c, k, out);
}

// ---------------------------------------------------------------------------
// Algebra terms

struct AlgebraTerm {
  enum class Kind : std::uint8_t { ScalarIdentity, Compacts, IdentityTensorCompacts, MatrixBlock, Coupled };

  Kind kind = Kind::ScalarIdentity;
  HilbertExpr identity = HilbertExpr::finite(1);  // ScalarIdentity space, or identity factor
  HilbertExpr compact = HilbertExpr::finite(1);   // Compacts / MatrixBlock space, or compact factor
  std::uint64_t n = 0;                            // MatrixBlock size
  /// Names of the abstract components the term acts on.  Keeps generators on
  /// different but isomorphic summands apart.
  std::vector<std::string> support;
  std::string tag;                  // Coupled: the point whose fibre it couples
  std::vector<AlgebraTerm> parts;   // Coupled: parts sharing one compact factor

  static AlgebraTerm scalar(HilbertExpr h, std::vector<std::string> support = {}) {
    AlgebraTerm t;
    t.kind = Kind::ScalarIdentity;
    t.identity = std::move(h);
    t.support = std::move(support);
    return t;
  }
  static AlgebraTerm compacts(HilbertExpr h, std::vector<std::string> support = {}) {
    AlgebraTerm t;
    t.kind = Kind::Compacts;
    t.compact = std::move(h);
    t.support = std::move(support);
    return t;
  }
  static AlgebraTerm identity_tensor_compacts(HilbertExpr id, HilbertExpr cpt, std::vector<std::string> support = {}) {
    AlgebraTerm t;
    t.kind = Kind::IdentityTensorCompacts;
    t.identity = std::move(id);
    t.compact = std::move(cpt);
    t.support = std::move(support);
    return t;
  }
  static AlgebraTerm matrix(std::uint64_t n, std::optional<HilbertExpr> on = std::nullopt,
                            std::vector<std::string> support = {}) {
    AlgebraTerm t;
    t.kind = Kind::MatrixBlock;
    t.n = n;
    t.compact = on ? std::move(*on) : HilbertExpr::finite(n);
    t.support = std::move(support);
    return t;
  }
  static AlgebraTerm coupled(std::string tag, std::vector<AlgebraTerm> parts) {
    AlgebraTerm t;
    t.kind = Kind::Coupled;
    t.tag = std::move(tag);
    t.parts = std::move(parts);
    t.identity = HilbertExpr::finite(1);
    t.compact = HilbertExpr::finite(1);
    return t;
  }

  std::strong_ordering operator<=>(const AlgebraTerm& o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = identity <=> o.identity; c != 0) return c;
    if (auto c = compact <=> o.compact; c != 0) return c;
    if (auto c = n <=> o.n; c != 0) return c;
    if (auto c = support <=> o.support; c != 0) return c;
    if (auto c = tag <=> o.tag; c != 0) return c;
    return std::lexicographical_compare_three_way(parts.begin(), parts.end(), o.parts.begin(), o.parts.end());
  }
  bool operator==(const AlgebraTerm& o) const {
    return kind == o.kind && identity == o.identity && compact == o.compact && n == o.n && support == o.support &&
           tag == o.tag && parts == o.parts;
  }
};

struct AlgebraExpr {
  std::vector<AlgebraTerm> terms;
  bool operator==(const AlgebraExpr&) const = default;
};

inline std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Normal form of a single term; nullopt when the term is zero.
///   K(C^n) -> M(n);  C·I(C^1) -> M(1);  C·I(X) ⊗ K(Y) with dim Y = 1 -> C·I(X ⊗ Y);
///   C·I(C^1) ⊗ K(Y) -> K(Y);  any zero space -> zero;
///   a coupled term with a single part -> that part.
inline std::optional<AlgebraTerm> normalize(const AlgebraTerm& term) {
  using K = AlgebraTerm::Kind;
  AlgebraTerm t = term;
  t.identity = canonicalize(t.identity);
  t.compact = canonicalize(t.compact);
  t.support = sorted_unique(t.support);
  switch (t.kind) {
    case K::ScalarIdentity:
      if (t.identity.is_zero()) return std::nullopt;
      if (t.identity.is_unit()) return normalize(AlgebraTerm::matrix(1, t.identity, t.support));
      t.compact = HilbertExpr::finite(1);
      return t;
    case K::Compacts: {
      const auto d = total_dim(t.compact);
      if (d == ExtNat(0)) return std::nullopt;
      if (d.is_finite()) return normalize(AlgebraTerm::matrix(d.value(), t.compact, t.support));
      t.identity = HilbertExpr::finite(1);
      return t;
    }
    case K::MatrixBlock:
      if (t.n == 0) return std::nullopt;
      t.identity = HilbertExpr::finite(1);
      return t;
    case K::IdentityTensorCompacts: {
      if (t.identity.is_zero() || t.compact.is_zero()) return std::nullopt;
      if (total_dim(t.compact) == ExtNat(1))
        return normalize(AlgebraTerm::scalar(HilbertExpr::tensor({t.identity, t.compact}), t.support));
      if (t.identity.is_unit()) return normalize(AlgebraTerm::compacts(t.compact, t.support));
      return t;
    }
    case K::Coupled: {
      std::vector<AlgebraTerm> parts;
      for (const auto& p : t.parts)
        if (auto np = normalize(p)) parts.push_back(std::move(*np));
      if (parts.empty()) return std::nullopt;
      if (parts.size() == 1) return parts.front();
      std::sort(parts.begin(), parts.end());
      std::vector<std::string> support;
      for (const auto& p : parts) support.insert(support.end(), p.support.begin(), p.support.end());
      t.parts = std::move(parts);
      t.support = sorted_unique(std::move(support));
      return t;
    }
  }
  return t;
}

AlgebraTerm fused(const AlgebraTerm& t);

/// Coupled terms sort where their fused block would.
inline bool term_before(const AlgebraTerm& a, const AlgebraTerm& b) {
  const bool ca = a.kind == AlgebraTerm::Kind::Coupled, cb = b.kind == AlgebraTerm::Kind::Coupled;
  if (!ca && !cb) return a < b;
  const auto fa = ca ? fused(a) : a, fb = cb ? fused(b) : b;
  if (auto c = fa <=> fb; c != 0) return c < 0;
  return a < b;
}

inline AlgebraExpr canonicalize(const AlgebraExpr& e) {
  AlgebraExpr out;
  for (const auto& t : e.terms)
    if (auto nt = normalize(t)) out.terms.push_back(std::move(*nt));
  std::sort(out.terms.begin(), out.terms.end(), term_before);
  out.terms.erase(std::unique(out.terms.begin(), out.terms.end()), out.terms.end());
  return out;
}

inline AlgebraExpr make_algebra(std::vector<AlgebraTerm> terms) { return canonicalize(AlgebraExpr{std::move(terms)}); }

/// Replaces every coupled term by its parts.
inline AlgebraExpr expand_coupled(const AlgebraExpr& e) {
  AlgebraExpr out;
  for (const auto& t : e.terms) {
    if (t.kind == AlgebraTerm::Kind::Coupled)
      out.terms.insert(out.terms.end(), t.parts.begin(), t.parts.end());
    else
      out.terms.push_back(t);
  }
  return canonicalize(out);
}

/// One block standing for a coupled term: the identity factors of its parts
/// are summed, the shared compact factor is kept.
inline AlgebraTerm fused(const AlgebraTerm& t) {
  using K = AlgebraTerm::Kind;
  if (t.kind != K::Coupled) return t;
  std::vector<HilbertExpr> ids;
  bool all_scalar = true;
  for (const auto& p : t.parts) {
    all_scalar = all_scalar && p.kind == K::ScalarIdentity;
    ids.push_back(p.identity);
  }
  auto out = all_scalar
                 ? AlgebraTerm::scalar(HilbertExpr::sum(ids), t.support)
                 : AlgebraTerm::identity_tensor_compacts(HilbertExpr::sum(ids), t.parts.front().compact, t.support);
  return *normalize(out);
}

inline std::string render(const AlgebraTerm& t, const RenderOptions& o = {}) {
  using K = AlgebraTerm::Kind;
  const std::string scalar = o.ascii ? "C*I(" : "C·I(";
  switch (t.kind) {
    case K::ScalarIdentity:
      return scalar + render(t.identity, o) + ")";
    case K::Compacts:
      return "K(" + render(t.compact, o) + ")";
    case K::MatrixBlock:
      return "M(" + std::to_string(t.n) + ",C)";
    case K::IdentityTensorCompacts:
      return scalar + render(t.identity, o) + ")" + tensor_sep(o) + "K(" + render(t.compact, o) + ")";
    case K::Coupled: {
      if (o.fuse) return render(fused(t), o);
      std::string out;
      for (std::size_t i = 0; i < t.parts.size(); ++i) out += (i ? sum_sep(o) : "") + render(t.parts[i], o);
      return out;
    }
  }
  return {};
}

/// Terms joined by ⊕; the zero algebra renders as "0".
inline std::string render(const AlgebraExpr& e, const RenderOptions& o = {}) {
  if (e.terms.empty()) return "0";
  std::vector<std::string> parts;
  if (o.fuse) {
    for (const auto& t : e.terms) parts.push_back(render(t, o));
  } else {
    for (const auto& t : expand_coupled(e).terms) parts.push_back(render(t, o));
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sum_sep(o) : "") + parts[i];
  return out;
}

// ---------------------------------------------------------------------------
// Component view

inline HilbertExpr component_sum(const std::vector<std::string>& names) {
  std::vector<HilbertExpr> hs;
  for (const auto& n : names) hs.push_back(HilbertExpr::named(n));
  return canonicalize(HilbertExpr::sum(std::move(hs)));
}

/// Rewrites scalar and compact terms that carry a support onto the named
/// components H_i they act on (C·I(lq) on component 1 becomes C·I(H1)).
/// Coupled terms are fused first when `fuse` is set and split otherwise.
/// Identity-tensor-compact terms keep their concrete form.
inline AlgebraExpr to_components(const AlgebraExpr& e, bool fuse = true) {
  using K = AlgebraTerm::Kind;
  AlgebraExpr out;
  std::function<void(const AlgebraTerm&)> add = [&](const AlgebraTerm& t) {
    if (t.kind == K::Coupled) {
      if (fuse)
        add(fused(t));
      else
        for (const auto& p : t.parts) add(p);
      return;
    }
    if (t.support.empty() || t.kind == K::IdentityTensorCompacts) {
      out.terms.push_back(t);
      return;
    }
    if (t.kind == K::ScalarIdentity)
      out.terms.push_back(AlgebraTerm::scalar(component_sum(t.support)));
    else
      out.terms.push_back(AlgebraTerm::compacts(component_sum(t.support)));
  };
  for (const auto& t : e.terms) add(t);
  return canonicalize(out);
}

/// Notation of the worked examples: ℂI13 for the identity on H1 ⊕ H3, K12 for
/// the compacts on H1 ⊕ H2.  Expects the component view.
inline std::string render_indexed(const AlgebraExpr& e, const std::string& separator = " + ") {
  using K = AlgebraTerm::Kind;
  auto indices = [](const HilbertExpr& h) {
    std::vector<std::string> names;
    if (h.kind == HilbertExpr::Kind::Named) names.push_back(h.name);
    for (const auto& c : h.children)
      if (c.kind == HilbertExpr::Kind::Named) names.push_back(c.name);
    const bool short_names = std::all_of(names.begin(), names.end(), [](const auto& n) { return n.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) out += (i && !short_names ? "," : "") + names[i];
    return out;
  };
  auto is_components = [](const HilbertExpr& h) {
    if (h.kind == HilbertExpr::Kind::Named) return true;
    if (h.kind != HilbertExpr::Kind::Sum) return false;
    return std::all_of(h.children.begin(), h.children.end(),
                       [](const auto& c) { return c.kind == HilbertExpr::Kind::Named; });
  };
  if (e.terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < e.terms.size(); ++i) {
    const auto& t = e.terms[i];
    std::string s;
    if (t.kind == K::ScalarIdentity && is_components(t.identity))
      s = "ℂI" + indices(t.identity);
    else if (t.kind == K::Compacts && is_components(t.compact))
      s = "K" + indices(t.compact);
    else
      s = render(t);
    out += (i ? separator : "") + s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relabelling

inline std::set<std::string> component_names(const AlgebraExpr& e) {
  std::set<std::string> names;
  std::function<void(const AlgebraTerm&)> visit = [&](const AlgebraTerm& t) {
    collect_names(t.identity, HilbertExpr::Kind::Named, names);
    collect_names(t.compact, HilbertExpr::Kind::Named, names);
    names.insert(t.support.begin(), t.support.end());
    for (const auto& p : t.parts) visit(p);
  };
  for (const auto& t : e.terms) visit(t);
  return names;
}

/// Renames components (named atoms and supports) through `relabel`, which
/// must cover every component name.  Separable factor names are renamed when
/// the map mentions them.
inline AlgebraExpr rename(const AlgebraExpr& e, const std::map<std::string, std::string>& relabel) {
  for (const auto& n : component_names(e))
    if (!relabel.count(n)) throw IncompleteRelabeling("no new name given for component '" + n + "'");
  auto map_name = [&](const std::string& n) {
    auto it = relabel.find(n);
    return it == relabel.end() ? n : it->second;
  };
  std::function<AlgebraTerm(const AlgebraTerm&)> apply = [&](const AlgebraTerm& t) {
    AlgebraTerm r = t;
    for (auto k : {HilbertExpr::Kind::Named, HilbertExpr::Kind::Separable}) {
      r.identity = rename_atoms(r.identity, k, map_name);
      r.compact = rename_atoms(r.compact, k, map_name);
    }
    for (auto& s : r.support) s = map_name(s);
    for (auto& p : r.parts) p = apply(p);
    return r;
  };
  AlgebraExpr out;
  for (const auto& t : e.terms) out.terms.push_back(apply(t));
  return canonicalize(out);
}

inline bool equal_upto_relabeling(const AlgebraExpr& a, const AlgebraExpr& b,
                                  const std::map<std::string, std::string>& relabel) {
  return rename(a, relabel) == canonicalize(b);
}

// ---------------------------------------------------------------------------
// Parsing the canonical text form

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : s_(text) {}

  AlgebraExpr algebra() {
    AlgebraExpr e;
    skip_ws();
    if (eat("0")) {
      expect_end();
      return e;
    }
    e.terms.push_back(term());
    while (eat_sum()) e.terms.push_back(term());
    expect_end();
    return canonicalize(e);
  }

  HilbertExpr hilbert_only() {
    auto h = hilbert();
    expect_end();
    return canonicalize(h);
  }

 private:
  AlgebraTerm term() {
    skip_ws();
    if (eat("C·I(") || eat("C*I(")) {
      auto id = hilbert();
      expect(")");
      const auto save = pos_;
      if (eat_tensor()) {
        skip_ws();
        if (eat("K(")) {
          auto cpt = hilbert();
          expect(")");
          return AlgebraTerm::identity_tensor_compacts(std::move(id), std::move(cpt));
        }
        pos_ = save;
      }
      return AlgebraTerm::scalar(std::move(id));
    }
    if (eat("K(")) {
      auto h = hilbert();
      expect(")");
      return AlgebraTerm::compacts(std::move(h));
    }
    if (eat("M(")) {
      const auto n = number();
      skip_ws();
      if (eat(",")) {
        skip_ws();
        expect("C");
      }
      expect(")");
      return AlgebraTerm::matrix(n);
    }
    fail("expected a term");
  }

  HilbertExpr hilbert() {
    std::vector<HilbertExpr> summands{product()};
    while (true) {
      const auto save = pos_;
      if (!eat_sum()) break;
      // A top-level "⊕" followed by an algebra term belongs to the caller.
      skip_ws();
      if (at("C·I(") || at("C*I(") || at("K(") || at("M(")) {
        pos_ = save;
        break;
      }
      summands.push_back(product());
    }
    return summands.size() == 1 ? summands.front() : HilbertExpr::sum(std::move(summands));
  }

  HilbertExpr product() {
    std::vector<HilbertExpr> factors{atom()};
    while (true) {
      const auto save = pos_;
      if (!eat_tensor()) break;
      skip_ws();
      if (at("K(")) {
        pos_ = save;
        break;
      }
      factors.push_back(atom());
    }
    return factors.size() == 1 ? factors.front() : HilbertExpr::tensor(std::move(factors));
  }

  HilbertExpr atom() {
    skip_ws();
    if (eat("C^")) return HilbertExpr::finite(number());
    if (at("(") && !at("(+)") && !at("(x)")) {
      ++pos_;
      auto h = hilbert();
      expect(")");
      return h;
    }
    if (eat("l")) return HilbertExpr::separable(identifier());
    if (eat("H")) return HilbertExpr::named(identifier());
    fail("expected a Hilbert space atom");
  }

  std::string identifier() {
    const auto begin = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                s_[pos_] == '.' || s_[pos_] == '\'' || s_[pos_] == '-'))
      ++pos_;
    if (begin == pos_) fail("expected a name");
    return std::string(s_.substr(begin, pos_ - begin));
  }

  std::uint64_t number() {
    skip_ws();
    const auto begin = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (begin == pos_) fail("expected a number");
    return std::stoull(std::string(s_.substr(begin, pos_ - begin)));
  }

  bool eat_sum() {
    const auto save = pos_;
    skip_ws();
    if (eat("⊕") || eat("(+)")) return true;
    pos_ = save;
    return false;
  }
  bool eat_tensor() {
    const auto save = pos_;
    skip_ws();
    if (eat("⊗") || eat("(x)")) return true;
    pos_ = save;
    return false;
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n')) ++pos_;
  }
  bool at(std::string_view tok) const { return s_.substr(pos_, tok.size()) == tok; }
  bool eat(std::string_view tok) {
    if (!at(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(std::string_view tok) {
    skip_ws();
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }
  void expect_end() {
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing text");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline AlgebraExpr parse_algebra(std::string_view text) { return detail::ExprParser(text).algebra(); }
inline HilbertExpr parse_hilbert(std::string_view text) { return detail::ExprParser(text).hilbert_only(); }

}  // namespace afspec
