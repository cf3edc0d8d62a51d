#pragma once

#include <cstdint>
#include <vector>

#include "wlg/cayley.hpp"
#include "wlg/common.hpp"

namespace wlg {

namespace detail {

/// Scratch for canonical closure enumeration, reusable across calls.
/// `idx` maps element -> first-visit index, reset lazily via epochs.
struct ClosureScratch {
  std::vector<uint32_t> idx;
  std::vector<uint32_t> epoch;
  std::vector<uint32_t> order;  // visit order: canonical index -> element
  uint32_t cur_epoch = 0;

  void reset(uint32_t n) {
    if (idx.size() < n) {
      idx.assign(n, 0);
      epoch.assign(n, 0);
      cur_epoch = 0;
    }
    ++cur_epoch;
    order.clear();
  }
  bool seen(uint32_t x) const { return epoch[x] == cur_epoch; }
  uint32_t index_of(uint32_t x) const { return idx[x]; }
  uint32_t visit(uint32_t x) {
    epoch[x] = cur_epoch;
    idx[x] = static_cast<uint32_t>(order.size());
    order.push_back(x);
    return idx[x];
  }
};

/// Canonical enumeration of <tuple>: seed the visit list with the tuple
/// entries in order, then close under right-multiplication by the tuple
/// entries (column order = tuple order). The emitted trace is identical for
/// two tuples exactly when the entry-wise map extends to an isomorphism of
/// the generated subgroups.
///
/// sink(v) receives, in order: k entry indices, then one index per
/// (visited element, tuple position) product.
template <typename Sink>
inline uint32_t closure_trace(const CayleyTable& g, const uint32_t* tuple, int k, ClosureScratch& scratch,
                              Sink&& sink) {
  scratch.reset(g.order());
  for (int i = 0; i < k; ++i) {
    uint32_t e = tuple[i];
    uint32_t ix = scratch.seen(e) ? scratch.index_of(e) : scratch.visit(e);
    sink(ix);
  }
  for (size_t q = 0; q < scratch.order.size(); ++q) {
    uint32_t x = scratch.order[q];
    for (int i = 0; i < k; ++i) {
      uint32_t p = g.mul(x, tuple[i]);
      uint32_t ix = scratch.seen(p) ? scratch.index_of(p) : scratch.visit(p);
      sink(ix);
    }
  }
  return static_cast<uint32_t>(scratch.order.size());
}

}  // namespace detail

/// True iff g_i -> h_i extends to an isomorphism of the generated subgroups.
/// Runs both canonical closures in lockstep; any trace divergence is a
/// conflict. Optionally emits the bijection (pairs of element indices in
/// visit order).
inline bool marked_isomorphism(const CayleyTable& g, const std::vector<uint32_t>& gt, const CayleyTable& h,
                               const std::vector<uint32_t>& ht,
                               std::vector<std::pair<uint32_t, uint32_t>>* out_bijection = nullptr) {
  require(gt.size() == ht.size(), errc::entry_out_of_range, "tuple length mismatch");
  int k = static_cast<int>(gt.size());
  if (k == 0) {
    if (out_bijection) out_bijection->assign(1, {0u, 0u});
    return true;  // trivial subgroups
  }
  for (uint32_t x : gt) require(x < g.order(), errc::entry_out_of_range, "tuple entry");
  for (uint32_t x : ht) require(x < h.order(), errc::entry_out_of_range, "tuple entry");

  thread_local detail::ClosureScratch sa, sb;
  sa.reset(g.order());
  sb.reset(h.order());
  auto step = [](detail::ClosureScratch& s, uint32_t e) {
    return s.seen(e) ? s.index_of(e) : s.visit(e);
  };
  for (int i = 0; i < k; ++i)
    if (step(sa, gt[i]) != step(sb, ht[i])) return false;
  for (size_t q = 0; q < sa.order.size(); ++q) {
    if (q >= sb.order.size()) return false;
    uint32_t x = sa.order[q], y = sb.order[q];
    for (int i = 0; i < k; ++i) {
      uint32_t ia = step(sa, g.mul(x, gt[i]));
      uint32_t ib = step(sb, h.mul(y, ht[i]));
      if (ia != ib) return false;
    }
  }
  if (sa.order.size() != sb.order.size()) return false;
  if (out_bijection) {
    out_bijection->clear();
    for (size_t q = 0; q < sa.order.size(); ++q) out_bijection->push_back({sa.order[q], sb.order[q]});
  }
  return true;
}

/// Verifies that `map` (g -> h over all indices) is a bijective homomorphism,
/// checking all n^2 products.
inline bool verify_isomorphism(const CayleyTable& g, const CayleyTable& h, const std::vector<uint32_t>& map) {
  uint32_t n = g.order();
  if (h.order() != n || map.size() != n) return false;
  std::vector<uint8_t> seen(n, 0);
  for (uint32_t v : map) {
    if (v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  if (map[0] != 0) return false;
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = 0; b < n; ++b)
      if (map[g.mul(a, b)] != h.mul(map[a], map[b])) return false;
  return true;
}

}  // namespace wlg
