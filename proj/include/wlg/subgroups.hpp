#pragma once

#include <cstdint>
#include <vector>

#include "wlg/cayley.hpp"

namespace wlg {

/// Smallest subgroup containing S (worklist closure under products).
inline ElementSet subgroup_closure(const CayleyTable& g, const ElementSet& s) {
  uint32_t n = g.order();
  ElementSet in(n);
  std::vector<uint32_t> members;
  std::vector<uint32_t> gens = s.to_vector();
  in.add(0);
  members.push_back(0);
  for (uint32_t x : gens)
    if (!in.contains(x)) {
      in.add(x);
      members.push_back(x);
    }
  // Right-multiplication by generators reaches every word over S.
  size_t head = 0;
  while (head < members.size()) {
    uint32_t x = members[head++];
    for (uint32_t gen : gens) {
      uint32_t p = g.mul(x, gen);
      if (!in.contains(p)) {
        in.add(p);
        members.push_back(p);
      }
    }
  }
  return in;
}

inline ElementSet subgroup_closure(const CayleyTable& g, const std::vector<uint32_t>& gens) {
  ElementSet s(g.order());
  for (uint32_t x : gens) s.add(x);
  return subgroup_closure(g, s);
}

/// Smallest normal subgroup of G containing S.
inline ElementSet normal_closure(const CayleyTable& g, const ElementSet& s) {
  uint32_t n = g.order();
  ElementSet conj_set(n);
  for (uint32_t x : s.to_vector())
    for (uint32_t a = 0; a < n; ++a) conj_set.add(g.conj(a, x));
  ElementSet closed = subgroup_closure(g, conj_set);
  // Subgroup generated by a conjugation-stable set is normal; grow until
  // conjugation-stable to be safe.
  for (;;) {
    ElementSet extra(n);
    bool grew = false;
    for (uint32_t x : closed.to_vector())
      for (uint32_t a = 0; a < n; ++a) {
        uint32_t c = g.conj(a, x);
        if (!closed.contains(c)) {
          extra.add(c);
          grew = true;
        }
      }
    if (!grew) break;
    closed = subgroup_closure(g, closed.union_with(extra));
  }
  return closed;
}

/// Normal closure of {x} inside the subgroup S of G.
inline ElementSet normal_closure_in(const CayleyTable& g, const ElementSet& s_sub, uint32_t x) {
  uint32_t n = g.order();
  ElementSet conj_set(n);
  auto members = s_sub.to_vector();
  for (uint32_t a : members) conj_set.add(g.conj(a, x));
  // ⟨conjugates⟩ within S; conjugates of products stay inside since the
  // generating set is S-conjugation-stable.
  return subgroup_closure(g, conj_set);
}

inline ElementSet center(const CayleyTable& g) {
  uint32_t n = g.order();
  ElementSet z(n);
  for (uint32_t x = 0; x < n; ++x) {
    bool central = true;
    for (uint32_t y = 0; y < n && central; ++y)
      if (g.mul(x, y) != g.mul(y, x)) central = false;
    if (central) z.add(x);
  }
  return z;
}

inline ElementSet centralizer(const CayleyTable& g, uint32_t x) {
  uint32_t n = g.order();
  ElementSet c(n);
  for (uint32_t y = 0; y < n; ++y)
    if (g.mul(x, y) == g.mul(y, x)) c.add(y);
  return c;
}

inline ElementSet commutator_set(const CayleyTable& g) {
  uint32_t n = g.order();
  ElementSet s(n);
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = 0; b < n; ++b) s.add(g.commutator(a, b));
  return s;
}

inline ElementSet commutator_subgroup(const CayleyTable& g) { return subgroup_closure(g, commutator_set(g)); }

inline bool is_abelian(const CayleyTable& g) {
  uint32_t n = g.order();
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = a + 1; b < n; ++b)
      if (g.mul(a, b) != g.mul(b, a)) return false;
  return true;
}

inline bool is_normal(const CayleyTable& g, const ElementSet& s) {
  for (uint32_t x : s.to_vector())
    for (uint32_t a = 0; a < g.order(); ++a)
      if (!s.contains(g.conj(a, x))) return false;
  return true;
}

inline bool is_subgroup(const CayleyTable& g, const ElementSet& s) {
  if (!s.contains(0)) return false;
  auto m = s.to_vector();
  for (uint32_t a : m) {
    if (!s.contains(g.inv(a))) return false;
    for (uint32_t b : m)
      if (!s.contains(g.mul(a, b))) return false;
  }
  return true;
}

/// Conjugacy class id per element (classes numbered by smallest member).
inline std::vector<uint32_t> conjugacy_classes(const CayleyTable& g, std::vector<uint32_t>* reps = nullptr) {
  uint32_t n = g.order();
  std::vector<uint32_t> cls(n, UINT32_MAX);
  uint32_t next = 0;
  for (uint32_t x = 0; x < n; ++x) {
    if (cls[x] != UINT32_MAX) continue;
    if (reps) reps->push_back(x);
    for (uint32_t a = 0; a < n; ++a) {
      uint32_t c = g.conj(a, x);
      if (cls[c] == UINT32_MAX) cls[c] = next;
    }
    ++next;
  }
  return cls;
}

/// Extracts the subgroup S of G as its own validated CayleyTable.
/// Elements are reindexed in increasing order; identity lands at 0.
/// `back` (optional) receives the original index of each new element.
inline CayleyTable reindex_subgroup(const CayleyTable& g, const ElementSet& s, std::vector<uint32_t>* back = nullptr) {
  auto members = s.to_vector();
  require(!members.empty() && members[0] == 0, errc::internal, "subgroup must contain identity");
  uint32_t m = static_cast<uint32_t>(members.size());
  std::vector<uint32_t> fwd(g.order(), UINT32_MAX);
  for (uint32_t i = 0; i < m; ++i) fwd[members[i]] = i;
  std::vector<uint32_t> flat(size_t(m) * m);
  for (uint32_t i = 0; i < m; ++i)
    for (uint32_t j = 0; j < m; ++j) {
      uint32_t p = g.mul(members[i], members[j]);
      require(fwd[p] != UINT32_MAX, errc::internal, "set not closed under product");
      flat[size_t(i) * m + j] = fwd[p];
    }
  if (back) *back = members;
  return CayleyTable::validated(std::move(flat), m, g.label() + "|sub" + std::to_string(m));
}

}  // namespace wlg
