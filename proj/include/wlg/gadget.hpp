#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "wlg/wl.hpp"

namespace wlg {

/// Multiplication-gadget graph: group vertices [0,n), then a,b,c,d blocks in
/// pair-major order. Gadget M(g,h) contributes edges
/// {g,a},{h,b},{b,c},{c,d},{gh,d}; |V| = n + 4n^2, |E| = 5n^2.
struct GadgetGraph {
  enum class Kind : uint8_t { group, a, b, c, d };

  uint32_t n = 0;          // group order
  uint32_t vertices = 0;   // n + 4n^2
  uint64_t edges = 0;      // 5n^2
  std::vector<uint32_t> csr_offset;
  std::vector<uint32_t> csr_adj;  // sorted neighbor lists
  std::vector<uint32_t> colors;   // vertex coloring

  static constexpr uint32_t kGadgetToken = 0xFFFFFFFFu;

  Kind kind_of(uint32_t v) const {
    if (v < n) return Kind::group;
    uint32_t block = (v - n) / (n * n);
    return static_cast<Kind>(1 + block);
  }
  /// For a gadget vertex, the (g,h) pair of its gadget.
  std::pair<uint32_t, uint32_t> pair_of(uint32_t v) const {
    uint32_t p = (v - n) % (n * n);
    return {p / n, p % n};
  }
  uint32_t group_vertex(uint32_t g) const { return g; }
  uint32_t gadget_vertex(Kind kind, uint32_t g, uint32_t h) const {
    return n + (static_cast<uint32_t>(kind) - 1) * n * n + g * n + h;
  }
  bool adjacent(uint32_t u, uint32_t v) const {
    const uint32_t* b = csr_adj.data() + csr_offset[u];
    const uint32_t* e = csr_adj.data() + csr_offset[u + 1];
    return std::binary_search(b, e, v);
  }
};

inline GadgetGraph build_gadget_graph(const ColoredGroup& a, uint64_t memory_budget = default_tuple_budget()) {
  const CayleyTable& g = *a.group;
  uint32_t n = g.order();
  uint64_t nv = uint64_t(n) + 4 * uint64_t(n) * n;
  require(nv * 2 <= memory_budget, errc::memory_budget,
          "gadget graph with " + std::to_string(nv) + " vertices exceeds budget");
  GadgetGraph gg;
  gg.n = n;
  gg.vertices = static_cast<uint32_t>(nv);
  gg.edges = 5 * uint64_t(n) * n;

  // one gadget per ordered pair, including g = h and products with identity
  std::vector<uint32_t> deg(gg.vertices, 0);
  auto each_edge = [&](auto&& fn) {
    for (uint32_t x = 0; x < n; ++x)
      for (uint32_t y = 0; y < n; ++y) {
        uint32_t va = gg.gadget_vertex(GadgetGraph::Kind::a, x, y);
        uint32_t vb = gg.gadget_vertex(GadgetGraph::Kind::b, x, y);
        uint32_t vc = gg.gadget_vertex(GadgetGraph::Kind::c, x, y);
        uint32_t vd = gg.gadget_vertex(GadgetGraph::Kind::d, x, y);
        fn(x, va);
        fn(y, vb);
        fn(vb, vc);
        fn(vc, vd);
        fn(g.mul(x, y), vd);
      }
  };
  each_edge([&](uint32_t u, uint32_t v) {
    ++deg[u];
    ++deg[v];
  });
  gg.csr_offset.assign(gg.vertices + 1, 0);
  for (uint32_t v = 0; v < gg.vertices; ++v) gg.csr_offset[v + 1] = gg.csr_offset[v] + deg[v];
  gg.csr_adj.assign(gg.csr_offset.back(), 0);
  std::vector<uint32_t> cursor(gg.csr_offset.begin(), gg.csr_offset.end() - 1);
  each_edge([&](uint32_t u, uint32_t v) {
    gg.csr_adj[cursor[u]++] = v;
    gg.csr_adj[cursor[v]++] = u;
  });
  for (uint32_t v = 0; v < gg.vertices; ++v)
    std::sort(gg.csr_adj.begin() + gg.csr_offset[v], gg.csr_adj.begin() + gg.csr_offset[v + 1]);

  gg.colors.assign(gg.vertices, GadgetGraph::kGadgetToken);
  for (uint32_t v = 0; v < n; ++v) {
    uint32_t c = a.color_of(v);
    require(c != GadgetGraph::kGadgetToken, errc::token_collision, "group color collides with gadget token");
    gg.colors[v] = c;
  }
  return gg;
}

inline GadgetGraph build_gadget_graph(const CayleyTable& g, uint64_t memory_budget = default_tuple_budget()) {
  return build_gadget_graph(ColoredGroup(g), memory_budget);
}

/// Plain edge-list text export: header "n_vertices n_edges", one "u v" line
/// per edge (u < v), plus a vertex-kind comment block.
inline std::string to_edge_list(const GadgetGraph& gg) {
  std::string out = std::to_string(gg.vertices) + " " + std::to_string(gg.edges) + "\n";
  for (uint32_t u = 0; u < gg.vertices; ++u)
    for (uint32_t i = gg.csr_offset[u]; i < gg.csr_offset[u + 1]; ++i) {
      uint32_t v = gg.csr_adj[i];
      if (u < v) out += std::to_string(u) + " " + std::to_string(v) + "\n";
    }
  out += "# kinds: group [0," + std::to_string(gg.n) + ")";
  out += ", a [" + std::to_string(gg.n) + "," + std::to_string(gg.n + gg.n * gg.n) + ")";
  out += ", then b, c, d blocks of " + std::to_string(gg.n * gg.n) + " in pair-major order\n";
  return out;
}

namespace detail {

inline TupleColoring initial_coloring_graph(const GadgetGraph& a, const GadgetGraph* b, int k,
                                            const WlLimits& limits) {
  require(k >= 1, errc::dimension_zero, "k >= 1");
  require(k <= 8, errc::memory_budget, "k too large");
  TupleColoring tc;
  tc.k = k;
  tc.sides = b ? 2 : 1;
  tc.n = {a.vertices, b ? b->vertices : 0};
  uint64_t total = 0;
  for (int s = 0; s < tc.sides; ++s) {
    uint64_t c = 1;
    for (int i = 0; i < k; ++i) {
      c *= tc.n[s];
      require(c <= (uint64_t(1) << 40), errc::memory_budget, "tuple space overflow");
    }
    tc.count[s] = c;
    tc.offset[s] = total;
    total += c;
  }
  tc.total = total;
  require(total <= limits.tuple_budget, errc::memory_budget,
          "tuple records " + std::to_string(total) + " exceed budget (graph WL)");
  tc.round = 1;

  std::vector<hash128> hashes(total);
  for (int side = 0; side < tc.sides; ++side) {
    const GadgetGraph& gg = side == 0 ? a : *b;
    uint32_t n = tc.n[side];
    uint64_t base = tc.offset[side];
    parallel_for(tc.count[side], [&](uint64_t bgn, uint64_t end) {
      std::array<uint32_t, 8> e{};
      for (uint64_t t = bgn; t < end; ++t) {
        decode_tuple(t, n, k, e.data());
        hash_stream hs;
        uint64_t eq = 0, adj = 0;
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) {
            eq = (eq << 1) | (e[i] == e[j] ? 1 : 0);
            adj = (adj << 1) | (i != j && gg.adjacent(e[i], e[j]) ? 1 : 0);
          }
        hs.put(eq);
        hs.put(adj);
        for (int i = 0; i < k; ++i) hs.put(gg.colors[e[i]]);
        hashes[base + t] = hs.digest();
      }
    });
  }
  assign_ids(hashes, tc);
  return tc;
}

}  // namespace detail

/// k-WL on two (gadget) graphs; pullback restricted to group vertices.
inline RunResult run_wl_graph(const GadgetGraph& g1, const GadgetGraph& g2, const WlOptions& opt) {
  detail::WlLimits limits{opt.tuple_budget, opt.deadline};
  TupleColoring tc = detail::initial_coloring_graph(g1, &g2, opt.k, limits);
  RunResult res = detail::drive(std::move(tc), 2, opt.counting, opt.max_rounds, limits);
  res.version = WlVersion::III;
  // restrict the diagonal pullback to group vertices via the back-map
  res.element_colors[0].resize(g1.n);
  res.element_colors[1].resize(g2.n);
  return res;
}

/// Version III: build both gadget graphs, run graph WL, pull colors back.
inline RunResult version3_group_test(const ColoredGroup& a, const ColoredGroup& b, const WlOptions& opt) {
  GadgetGraph ga = build_gadget_graph(a, opt.tuple_budget);
  GadgetGraph gb = build_gadget_graph(b, opt.tuple_budget);
  return run_wl_graph(ga, gb, opt);
}

inline RunResult version3_group_test(const CayleyTable& a, const CayleyTable& b, const WlOptions& opt) {
  return version3_group_test(ColoredGroup(a), ColoredGroup(b), opt);
}

}  // namespace wlg
