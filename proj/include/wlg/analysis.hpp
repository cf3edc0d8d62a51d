#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "wlg/cayley.hpp"
#include "wlg/subgroups.hpp"

namespace wlg {

constexpr uint32_t kRankInfinity = UINT32_MAX;

/// Word-length ranks over a symmetric generating subset C.
struct RankTable {
  ElementSet base;               // C, symmetrized
  bool symmetrized = false;      // true if inverses had to be added
  std::vector<uint32_t> rank;    // element -> rank, kRankInfinity outside <C>
  uint32_t diameter = 0;         // max finite rank

  uint32_t operator[](uint32_t g) const { return rank[g]; }
};

/// Breadth-first distances from the identity in Cay(<C>, C).
inline RankTable rank_of(const CayleyTable& g, const ElementSet& c_in) {
  uint32_t n = g.order();
  RankTable rt;
  rt.base = c_in;
  for (uint32_t x : c_in.to_vector()) {
    uint32_t ix = g.inv(x);
    if (!rt.base.contains(ix)) {
      rt.base.add(ix);
      rt.symmetrized = true;
    }
  }
  rt.rank.assign(n, kRankInfinity);
  rt.rank[0] = 0;
  auto gens = rt.base.to_vector();
  std::deque<uint32_t> q{0};
  while (!q.empty()) {
    uint32_t x = q.front();
    q.pop_front();
    for (uint32_t c : gens) {
      uint32_t y = g.mul(x, c);
      if (rt.rank[y] == kRankInfinity) {
        rt.rank[y] = rt.rank[x] + 1;
        rt.diameter = std::max(rt.diameter, rt.rank[y]);
        q.push_back(y);
      }
    }
  }
  return rt;
}

/// {[g,h]}-rank of one element; infinity iff x is outside [G,G].
inline uint32_t commutator_width(const CayleyTable& g, uint32_t x) {
  static thread_local std::vector<std::pair<std::vector<uint32_t>, RankTable>> cache;
  for (auto& [tab, rt] : cache)
    if (tab == g.raw()) return rt.rank[x];
  RankTable rt = rank_of(g, commutator_set(g));
  if (cache.size() >= 4) cache.erase(cache.begin());
  cache.push_back({g.raw(), rt});
  return cache.back().second.rank[x];
}

/// Quotient G/N over cosets; representative = smallest element index,
/// cosets sorted by representative so the identity coset is index 0.
struct Quotient {
  CayleyTable table;
  std::vector<uint32_t> coset_of;  // element -> coset index
  std::vector<uint32_t> rep_of;    // coset index -> representative element
};

inline Quotient quotient(const CayleyTable& g, const ElementSet& n_sub) {
  require(is_subgroup(g, n_sub), errc::not_normal, "N is not a subgroup");
  require(is_normal(g, n_sub), errc::not_normal, "N is not normal");
  uint32_t n = g.order();
  auto members = n_sub.to_vector();
  std::vector<uint32_t> rep(n, UINT32_MAX);
  std::vector<uint32_t> reps;
  for (uint32_t x = 0; x < n; ++x) {
    if (rep[x] != UINT32_MAX) continue;
    for (uint32_t m : members) rep[g.mul(x, m)] = x;  // x minimal in its coset by scan order
    reps.push_back(x);
  }
  std::vector<uint32_t> coset_index(n);
  for (uint32_t i = 0; i < reps.size(); ++i) coset_index[reps[i]] = i;
  uint32_t q = static_cast<uint32_t>(reps.size());
  std::vector<uint32_t> flat(size_t(q) * q);
  for (uint32_t i = 0; i < q; ++i)
    for (uint32_t j = 0; j < q; ++j) flat[size_t(i) * q + j] = coset_index[rep[g.mul(reps[i], reps[j])]];
  Quotient out;
  out.table = CayleyTable::validated(std::move(flat), q, g.label() + "/N" + std::to_string(members.size()));
  out.rep_of = reps;
  out.coset_of.assign(n, 0);
  for (uint32_t x = 0; x < n; ++x) out.coset_of[x] = coset_index[rep[x]];
  return out;
}

namespace detail {

inline std::vector<uint32_t> prime_factors(uint32_t m) {
  std::vector<uint32_t> ps;
  for (uint32_t p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      ps.push_back(p);
      while (m % p == 0) m /= p;
    }
  if (m > 1) ps.push_back(m);
  return ps;
}

}  // namespace detail

/// Splitting test for Abelian groups, assembled across the Sylow components
/// of x: the p-component fails iff some y in the Sylow p-part drops the order
/// of x_p * y^p below |x_p|.
inline bool splits_from_abelian(const CayleyTable& a, uint32_t x) {
  require(is_abelian(a), errc::not_abelian, "splits_from_abelian needs an Abelian group");
  uint32_t ord = element_order(a, x);
  if (ord == 1) return true;
  for (uint32_t p : detail::prime_factors(ord)) {
    // x_p = x^m with m = ord/p^a mod-inverse trick: m kills other primes,
    // fixes the p-part (m ≡ 1 mod p^a).
    uint32_t pa = 1;
    uint32_t rest = ord;
    while (rest % p == 0) {
      rest /= p;
      pa *= p;
    }
    // CRT coefficient: m ≡ 1 (mod pa), m ≡ 0 (mod rest)
    uint64_t m = 0;
    for (uint64_t t = 0; t < pa; ++t)
      if ((t * rest) % pa == 1) {
        m = t * rest;
        break;
      }
    uint32_t xp = a.pow(x, m);
    uint32_t xp_ord = element_order(a, xp);
    if (xp_ord == 1) continue;
    for (uint32_t y = 0; y < a.order(); ++y) {
      uint32_t yo = element_order(a, y);
      bool p_power = true;
      uint32_t t = yo;
      while (t % p == 0) t /= p;
      p_power = (t == 1);
      if (!p_power) continue;  // y must lie in the Sylow p-part
      uint32_t cand = a.mul(xp, a.pow(y, p));
      if (element_order(a, cand) < xp_ord) return false;
    }
  }
  return true;
}

/// z in Z(G) splits from G iff z is outside [G,G] and its coset splits from
/// the abelianization.
inline bool splits_from_group(const CayleyTable& g, uint32_t z) {
  ElementSet zg = center(g);
  require(zg.contains(z), errc::not_central, "element is not central");
  ElementSet comm = commutator_subgroup(g);
  if (comm.contains(z)) return z == 0;  // identity trivially splits
  Quotient q = quotient(g, comm);
  return splits_from_abelian(q.table, q.coset_of[z]);
}

inline bool is_abelian_subset(const CayleyTable& g, const ElementSet& s) {
  auto m = s.to_vector();
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = i + 1; j < m.size(); ++j)
      if (g.mul(m[i], m[j]) != g.mul(m[j], m[i])) return false;
  return true;
}

/// Graph on group elements with edges between non-commuting pairs.
struct NonCommutingGraph {
  uint32_t n = 0;
  std::vector<ElementSet> adj;

  bool edge(uint32_t a, uint32_t b) const { return adj[a].contains(b); }

  /// Connected components of the subgraph induced by `verts`.
  std::vector<ElementSet> components(const ElementSet& verts) const {
    std::vector<ElementSet> out;
    ElementSet left = verts;
    for (uint32_t s = 0; s < n; ++s) {
      if (!left.contains(s)) continue;
      ElementSet comp(n);
      std::deque<uint32_t> q2{s};
      comp.add(s);
      left.remove(s);
      while (!q2.empty()) {
        uint32_t x = q2.front();
        q2.pop_front();
        ElementSet nb = adj[x].intersect(left);
        for (uint32_t y : nb.to_vector()) {
          comp.add(y);
          left.remove(y);
          q2.push_back(y);
        }
      }
      out.push_back(comp);
    }
    return out;
  }
};

inline NonCommutingGraph non_commuting_graph(const CayleyTable& g) {
  uint32_t n = g.order();
  NonCommutingGraph x;
  x.n = n;
  x.adj.assign(n, ElementSet(n));
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = a + 1; b < n; ++b)
      if (g.mul(a, b) != g.mul(b, a)) {
        x.adj[a].add(b);
        x.adj[b].add(a);
      }
  return x;
}

/// Stable maximal-centralizer set M with its stages and the subgroups
/// generated by the components of the non-commuting graph restricted to M.
struct ComponentDecomposition {
  ElementSet m;
  std::vector<ElementSet> stages;
  std::vector<ElementSet> components;
  std::vector<ElementSet> generated;  // N_i = <X_i>
};

inline ComponentDecomposition non_abelian_components(const CayleyTable& g) {
  require(!is_abelian(g), errc::abelian_input, "non_abelian_components needs a non-Abelian group");
  uint32_t n = g.order();
  ElementSet zg = center(g);
  std::vector<uint32_t> cent_order(n);
  for (uint32_t x = 0; x < n; ++x) cent_order[x] = centralizer(g, x).size();

  ComponentDecomposition out;
  out.m = ElementSet(n);
  // M1: non-central elements of maximal centralizer order. Ties all enter.
  uint32_t best = 0;
  for (uint32_t x = 0; x < n; ++x)
    if (!zg.contains(x)) best = std::max(best, cent_order[x]);
  for (uint32_t x = 0; x < n; ++x)
    if (!zg.contains(x) && cent_order[x] == best) out.m.add(x);
  out.stages.push_back(out.m);
  for (;;) {
    ElementSet gen = subgroup_closure(g, out.m);
    if (gen.size() == n) break;
    uint32_t mx = 0;
    for (uint32_t x = 0; x < n; ++x)
      if (!gen.contains(x)) mx = std::max(mx, cent_order[x]);
    ElementSet next = out.m;
    for (uint32_t x = 0; x < n; ++x)
      if (!gen.contains(x) && cent_order[x] == mx) next.add(x);
    if (next == out.m) break;  // stable
    out.m = next;
    out.stages.push_back(out.m);
  }

  NonCommutingGraph x = non_commuting_graph(g);
  out.components = x.components(out.m);
  for (const auto& comp : out.components) out.generated.push_back(subgroup_closure(g, comp));

  // Lemma-level sanity: the components' subgroups cover G, each contains the
  // center, and each is non-Abelian.
  ElementSet all(n);
  for (const auto& s : out.generated) all = all.union_with(s);
  require(subgroup_closure(g, all).size() == n, errc::internal, "components fail to generate G");
  for (const auto& s : out.generated) {
    require(zg.subset_of(s), errc::internal, "component misses the center");
    require(!is_abelian_subset(g, s), errc::internal, "component is Abelian");
  }
  return out;
}

/// True iff every nonidentity element of S has full normal closure in S.
inline bool is_simple_subgroup(const CayleyTable& g, const ElementSet& s) {
  uint32_t sz = s.size();
  require(sz >= 2, errc::entry_out_of_range, "|S| >= 2");
  for (uint32_t x : s.to_vector()) {
    if (x == 0) continue;
    if (normal_closure_in(g, s, x).size() != sz) return false;
  }
  return true;
}

inline bool is_simple(const CayleyTable& g) { return is_simple_subgroup(g, ElementSet::full(g.order())); }

/// True iff no normal closure of a single element is Abelian (equivalently,
/// G has no Abelian normal subgroup).
inline bool is_semisimple(const CayleyTable& g) {
  if (g.order() == 1) return true;
  std::vector<uint32_t> reps;
  conjugacy_classes(g, &reps);
  for (uint32_t r : reps) {
    if (r == 0) continue;
    ElementSet ncl = normal_closure(g, ElementSet::of(g.order(), {r}));
    if (is_abelian_subset(g, ncl)) return false;
  }
  return true;
}

/// Simple direct factors of Soc(G) plus their isomorphism-class grouping
/// (class structure filled by the caller via the oracle; see pipelines).
struct SocleData {
  std::vector<ElementSet> factors;
  ElementSet socle;
  std::vector<std::vector<uint32_t>> iso_classes;  // partition of factor indices
};

namespace detail {

/// Splits a direct product of isomorphic non-Abelian simple groups into its
/// factors: a normal closure of minimal size inside N is supported in a
/// single factor; peel by elementwise centralizers.
inline void split_minimal_normal(const CayleyTable& g, const ElementSet& n_set, std::vector<ElementSet>& out) {
  ElementSet rest = n_set;
  while (rest.size() > 1) {
    auto members = rest.to_vector();
    ElementSet best_f(g.order());
    uint32_t best_size = UINT32_MAX;
    for (uint32_t x : members) {
      if (x == 0) continue;
      ElementSet f = normal_closure_in(g, rest, x);
      if (f.size() < best_size) {
        best_size = f.size();
        best_f = f;
        if (best_size <= 60) break;  // cannot get smaller than the smallest non-Abelian simple group
      }
    }
    require(best_size != UINT32_MAX, errc::internal, "empty minimal normal subgroup");
    out.push_back(best_f);
    // centralizer of the factor inside rest
    auto fmem = best_f.to_vector();
    ElementSet cent(g.order());
    for (uint32_t y : rest.to_vector()) {
      bool ok = true;
      for (uint32_t f : fmem)
        if (g.mul(y, f) != g.mul(f, y)) {
          ok = false;
          break;
        }
      if (ok) cent.add(y);
    }
    require(uint64_t(cent.size()) * best_f.size() == uint64_t(rest.size()), errc::internal,
            "factor does not split off");
    rest = cent;
  }
}

}  // namespace detail

/// Accelerated computation of Fac(Soc(G)): minimal normal closures of single
/// elements, split into simple factors. The slow pair-enumeration reference
/// semantics lives in socle_factors_reference; the two must agree.
inline SocleData socle_factors(const CayleyTable& g) {
  require(is_semisimple(g), errc::not_semisimple, "socle_factors needs a semisimple group");
  uint32_t n = g.order();
  SocleData out;
  out.socle = ElementSet(n);
  out.socle.add(0);
  if (n == 1) return out;

  std::vector<uint32_t> reps;
  conjugacy_classes(g, &reps);
  std::vector<ElementSet> closures;
  for (uint32_t r : reps) {
    if (r == 0) continue;
    ElementSet ncl = normal_closure(g, ElementSet::of(n, {r}));
    if (std::find(closures.begin(), closures.end(), ncl) == closures.end()) closures.push_back(std::move(ncl));
  }
  // minimal elements under inclusion
  std::vector<ElementSet> minimal;
  for (const auto& a : closures) {
    bool is_min = true;
    for (const auto& b : closures)
      if (!(b == a) && b.subset_of(a)) {
        is_min = false;
        break;
      }
    if (is_min && std::find(minimal.begin(), minimal.end(), a) == minimal.end()) minimal.push_back(a);
  }
  for (const auto& m : minimal) detail::split_minimal_normal(g, m, out.factors);
  std::sort(out.factors.begin(), out.factors.end());
  ElementSet uni(n);
  for (const auto& f : out.factors) uni = uni.union_with(f);
  out.socle = subgroup_closure(g, uni);
  return out;
}

/// Reference semantics: a 2-generated simple subgroup S is a factor iff every
/// conjugate of S equals S or commutes with S elementwise and meets it
/// trivially.
inline SocleData socle_factors_reference(const CayleyTable& g) {
  require(is_semisimple(g), errc::not_semisimple, "socle_factors needs a semisimple group");
  uint32_t n = g.order();
  SocleData out;
  out.socle = ElementSet(n);
  out.socle.add(0);
  if (n == 1) return out;

  std::vector<std::pair<ElementSet, bool>> seen;  // distinct candidate subgroups with verdicts
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = 0; b < n; ++b) {
      if (a == 0 && b == 0) continue;
      ElementSet s = subgroup_closure(g, std::vector<uint32_t>{a, b});
      if (s.size() < 60) continue;  // no non-Abelian simple group below order 60
      bool known = false;
      for (const auto& [set, verdict] : seen)
        if (set == s) {
          known = true;
          break;
        }
      if (known) continue;
      bool factor = !is_abelian_subset(g, s) && is_simple_subgroup(g, s);
      if (factor) {
        auto smem = s.to_vector();
        for (uint32_t x = 0; x < n && factor; ++x) {
          // conjugate of S by x: equal, or elementwise-commuting with trivial meet
          ElementSet conj_s(n);
          for (uint32_t e : smem) conj_s.add(g.conj(x, e));
          if (conj_s == s) continue;
          if (conj_s.intersect(s).size() != 1) {
            factor = false;
            break;
          }
          for (uint32_t e1 : conj_s.to_vector()) {
            for (uint32_t e2 : smem)
              if (g.mul(e1, e2) != g.mul(e2, e1)) {
                factor = false;
                break;
              }
            if (!factor) break;
          }
        }
      }
      seen.push_back({s, factor});
      if (factor) out.factors.push_back(std::move(s));
    }
  std::sort(out.factors.begin(), out.factors.end());
  ElementSet uni(n);
  for (const auto& f : out.factors) uni = uni.union_with(f);
  out.socle = subgroup_closure(g, uni);
  return out;
}

}  // namespace wlg
