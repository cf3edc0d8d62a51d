#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "wlg/analysis.hpp"
#include "wlg/gadget.hpp"
#include "wlg/generators.hpp"
#include "wlg/wl.hpp"

namespace wlg {

enum class iso_status { isomorphic, non_isomorphic, wl_indistinguishable };

inline const char* iso_status_name(iso_status s) {
  switch (s) {
    case iso_status::isomorphic: return "isomorphic";
    case iso_status::non_isomorphic: return "non_isomorphic";
    case iso_status::wl_indistinguishable: return "wl_indistinguishable";
  }
  return "?";
}

struct IsoVerdict {
  iso_status status = iso_status::non_isomorphic;
  std::string method;
  std::vector<uint32_t> witness;  // g -> h, verified before return
  std::string evidence;
  int k = 0;
  int rounds = 0;
  double millis = 0;
};

namespace detail {

struct StopWatch {
  clock::time_point t0 = clock::now();
  double ms() const { return std::chrono::duration<double, std::milli>(clock::now() - t0).count(); }
};

inline std::vector<uint32_t> order_histogram(const CayleyTable& g) {
  std::vector<uint32_t> h(g.order() + 1, 0);
  for (uint32_t x = 0; x < g.order(); ++x) ++h[element_order(g, x)];
  return h;
}

}  // namespace detail

/// Greedy generating sequence: each next generator maximizes subgroup growth
/// (ties broken by smallest index). Not guaranteed minimal, always generating.
inline std::vector<uint32_t> greedy_generators(const CayleyTable& g) {
  uint32_t n = g.order();
  std::vector<uint32_t> gens;
  ElementSet cur(n);
  cur.add(0);
  while (cur.size() < n) {
    uint32_t best = 0, best_size = 0;
    for (uint32_t x = 0; x < n; ++x) {
      if (cur.contains(x)) continue;
      auto trial = gens;
      trial.push_back(x);
      uint32_t sz = subgroup_closure(g, trial).size();
      if (sz > best_size) {
        best_size = sz;
        best = x;
        if (sz == n) break;
      }
    }
    gens.push_back(best);
    cur = subgroup_closure(g, gens);
  }
  return gens;
}

struct OracleOptions {
  uint32_t cap = 512;
  bool count_mode = false;   // enumerate all isomorphisms instead of stopping at one
  uint32_t count_cap = 256;  // tighter cap for counting, lifted for semisimple inputs
};

namespace detail {

/// DFS over generator images with order and incremental marked-isomorphism
/// pruning. Returns the number of full extensions found (stops at 1 unless
/// counting).
inline uint64_t oracle_dfs(const CayleyTable& g, const CayleyTable& h, const std::vector<uint32_t>& gens,
                           std::vector<uint32_t>& images, size_t depth, bool count_all,
                           std::vector<uint32_t>* out_witness) {
  uint32_t n = g.order();
  if (depth == gens.size()) {
    std::vector<std::pair<uint32_t, uint32_t>> bij;
    if (!marked_isomorphism(g, gens, h, images, &bij)) return 0;
    if (bij.size() != n) return 0;
    if (out_witness) {
      out_witness->assign(n, 0);
      for (auto [a, b] : bij) (*out_witness)[a] = b;
    }
    return 1;
  }
  uint32_t want = element_order(g, gens[depth]);
  uint64_t found = 0;
  for (uint32_t cand = 0; cand < h.order(); ++cand) {
    if (element_order(h, cand) != want) continue;
    images.push_back(cand);
    if (marked_isomorphism(g, {gens.begin(), gens.begin() + depth + 1}, h,
                           {images.begin(), images.end()})) {
      found += oracle_dfs(g, h, gens, images, depth + 1, count_all, out_witness);
      if (found && !count_all) {
        images.pop_back();
        return found;
      }
    }
    images.pop_back();
  }
  return found;
}

}  // namespace detail

/// Brute-force generator-enumeration isomorphism test (desk-scale ground
/// truth). Witnesses are verified on all n^2 products before returning.
inline IsoVerdict oracle_isomorphic(const CayleyTable& g, const CayleyTable& h, const OracleOptions& opt = {}) {
  detail::StopWatch sw;
  IsoVerdict v;
  v.method = "oracle";
  if (g.order() != h.order()) {
    v.status = iso_status::non_isomorphic;
    v.evidence = "orders differ";
    v.millis = sw.ms();
    return v;
  }
  require(g.order() <= opt.cap, errc::oracle_cap_exceeded,
          "order " + std::to_string(g.order()) + " above oracle cap " + std::to_string(opt.cap));
  if (detail::order_histogram(g) != detail::order_histogram(h)) {
    v.status = iso_status::non_isomorphic;
    v.evidence = "element order multisets differ";
    v.millis = sw.ms();
    return v;
  }
  auto gens = greedy_generators(g);
  std::vector<uint32_t> images;
  std::vector<uint32_t> witness;
  uint64_t found = detail::oracle_dfs(g, h, gens, images, 0, false, &witness);
  if (found) {
    require(verify_isomorphism(g, h, witness), errc::internal, "oracle produced an invalid witness");
    v.status = iso_status::isomorphic;
    v.witness = std::move(witness);
  } else {
    v.status = iso_status::non_isomorphic;
    v.evidence = "generator image enumeration exhausted";
  }
  v.millis = sw.ms();
  return v;
}

/// Exact number of isomorphisms G -> H (|Aut(G)| when G = H).
inline uint64_t oracle_isomorphism_count(const CayleyTable& g, const CayleyTable& h, OracleOptions opt = {}) {
  if (g.order() != h.order()) return 0;
  if (g.order() > opt.count_cap)
    require(is_semisimple(g), errc::oracle_cap_exceeded,
            "order " + std::to_string(g.order()) + " above count cap and not semisimple");
  if (detail::order_histogram(g) != detail::order_histogram(h)) return 0;
  auto gens = greedy_generators(g);
  std::vector<uint32_t> images;
  return detail::oracle_dfs(g, h, gens, images, 0, true, nullptr);
}

// --- Abelian pipeline --------------------------------------------------------

namespace detail {

/// Basis of an Abelian p-group (as a sub-table): repeatedly lift a
/// maximal-order coset of S/<B> to an element of equal order.
inline std::vector<uint32_t> abelian_p_basis(const CayleyTable& s) {
  std::vector<uint32_t> basis;
  if (s.order() == 1) return basis;
  for (;;) {
    ElementSet span = subgroup_closure(s, basis);
    if (span.size() == s.order()) break;
    Quotient q = quotient(s, span);
    uint32_t best_coset = 0, best_ord = 0;
    for (uint32_t c = 0; c < q.table.order(); ++c) {
      uint32_t o = element_order(q.table, c);
      if (o > best_ord) {
        best_ord = o;
        best_coset = c;
      }
    }
    uint32_t lift = UINT32_MAX;
    for (uint32_t x = 0; x < s.order(); ++x)
      if (q.coset_of[x] == best_coset && element_order(s, x) == best_ord) {
        lift = x;
        break;
      }
    require(lift != UINT32_MAX, errc::internal, "no pure lift found");
    basis.push_back(lift);
  }
  return basis;
}

struct AbelianBasis {
  std::vector<uint32_t> elems;   // basis elements, indices in the parent group
  std::vector<uint32_t> orders;  // prime-power orders, sorted spec below
};

/// Primary basis of an Abelian group: per-prime bases concatenated, each
/// sorted by descending order. Element coordinates follow by enumeration.
inline AbelianBasis abelian_primary_basis(const CayleyTable& g) {
  AbelianBasis out;
  uint32_t n = g.order();
  if (n == 1) return out;
  for (uint32_t p : prime_factors(n)) {
    ElementSet sylow(n);
    for (uint32_t x = 0; x < n; ++x) {
      uint32_t o = element_order(g, x);
      while (o % p == 0) o /= p;
      if (o == 1) sylow.add(x);
    }
    std::vector<uint32_t> back;
    CayleyTable sub = reindex_subgroup(g, sylow, &back);
    auto pb = abelian_p_basis(sub);
    std::vector<std::pair<uint32_t, uint32_t>> with_orders;  // (order, parent index)
    for (uint32_t b : pb) with_orders.push_back({element_order(sub, b), back[b]});
    std::sort(with_orders.begin(), with_orders.end(),
              [](auto& a, auto& b) { return a.first > b.first; });
    for (auto& [o, e] : with_orders) {
      out.elems.push_back(e);
      out.orders.push_back(o);
    }
  }
  return out;
}

}  // namespace detail

/// Order-multiset test for Abelian groups; equal multisets come with a
/// matched-primary-basis witness.
inline IsoVerdict abelian_iso(const CayleyTable& g, const CayleyTable& h) {
  detail::StopWatch sw;
  require(is_abelian(g) && is_abelian(h), errc::not_abelian, "abelian_iso needs Abelian inputs");
  IsoVerdict v;
  v.method = "abelian";
  if (g.order() != h.order()) {
    v.status = iso_status::non_isomorphic;
    v.evidence = "orders differ";
    v.millis = sw.ms();
    return v;
  }
  auto ha = detail::order_histogram(g), hb = detail::order_histogram(h);
  if (ha != hb) {
    for (uint32_t o = 1; o < ha.size(); ++o)
      if (ha[o] != hb[o]) {
        v.evidence = "order " + std::to_string(o) + " multiplicity " + std::to_string(ha[o]) + " vs " +
                     std::to_string(hb[o]);
        break;
      }
    v.status = iso_status::non_isomorphic;
    v.millis = sw.ms();
    return v;
  }
  auto ba = detail::abelian_primary_basis(g);
  auto bb = detail::abelian_primary_basis(h);
  require(ba.orders == bb.orders, errc::internal, "equal order multisets but mismatched primary type");
  uint32_t n = g.order();
  // map every product of basis powers across
  std::vector<uint32_t> witness(n, UINT32_MAX);
  size_t t = ba.elems.size();
  std::vector<uint32_t> exps(t, 0);
  for (;;) {
    uint32_t eg = 0, eh = 0;
    for (size_t i = 0; i < t; ++i) {
      eg = g.mul(eg, g.pow(ba.elems[i], exps[i]));
      eh = h.mul(eh, h.pow(bb.elems[i], exps[i]));
    }
    witness[eg] = eh;
    size_t i = 0;
    for (; i < t; ++i) {
      if (++exps[i] < ba.orders[i]) break;
      exps[i] = 0;
    }
    if (i == t) break;
    if (t == 0) break;
  }
  require(verify_isomorphism(g, h, witness), errc::internal, "abelian basis match failed to verify");
  v.status = iso_status::isomorphic;
  v.witness = std::move(witness);
  v.millis = sw.ms();
  return v;
}

/// The count-free hard family: G_n = (Z/2)^n x (Z/4)^n,
/// H_n = (Z/2)^{n-2} x (Z/4)^{n+1}.
inline std::pair<CayleyTable, CayleyTable> countfree_family(uint32_t n, uint32_t cap = kDefaultOrderCap) {
  require(n >= 2, errc::entry_out_of_range, "n >= 2");
  std::vector<uint32_t> fg, fh;
  for (uint32_t i = 0; i < n; ++i) fg.push_back(2);
  for (uint32_t i = 0; i < n; ++i) fg.push_back(4);
  for (uint32_t i = 0; i + 2 < n; ++i) fh.push_back(2);
  for (uint32_t i = 0; i < n + 1; ++i) fh.push_back(4);
  return {make_abelian(fg, cap), make_abelian(fh, cap)};
}

// --- semisimple pipeline -----------------------------------------------------

struct IsoListOptions {
  bool decision_only = false;          // stop after the first verified witness
  uint64_t wl_accept_budget = uint64_t(1) << 21;  // 2n^2 above this skips the WL accept path
  uint32_t full_verify_limit = 1024;   // n <= limit: witnesses checked on all n^2 products
  int wl_round_floor = 4;
};

struct IsoList {
  IsoVerdict verdict;
  std::vector<uint32_t> socle_gens;            // 2 per factor of Soc(G)
  std::vector<std::vector<uint32_t>> images;   // accepted image tuples, deduplicated
  uint64_t candidates = 0;
  uint64_t wl_accepts = 0;
  int max_stab_rounds = 0;

  uint64_t count() const { return images.size(); }
};

/// Groups socle factors into isomorphism classes via the oracle.
inline void classify_socle_factors(const CayleyTable& g, SocleData& soc) {
  soc.iso_classes.clear();
  std::vector<CayleyTable> tables;
  for (const auto& f : soc.factors) tables.push_back(reindex_subgroup(g, f));
  std::vector<int> cls(tables.size(), -1);
  for (size_t i = 0; i < tables.size(); ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = static_cast<int>(soc.iso_classes.size());
    soc.iso_classes.push_back({static_cast<uint32_t>(i)});
    for (size_t j = i + 1; j < tables.size(); ++j) {
      if (cls[j] >= 0 || tables[j].order() != tables[i].order()) continue;
      if (oracle_isomorphic(tables[i], tables[j]).status == iso_status::isomorphic) {
        cls[j] = cls[i];
        soc.iso_classes[cls[i]].push_back(static_cast<uint32_t>(j));
      }
    }
  }
}

/// Expands an accepted image tuple into the full element map.
inline std::vector<uint32_t> expand_semisimple_witness(const CayleyTable& g, const CayleyTable& h,
                                                       const std::vector<uint32_t>& socle_gens,
                                                       const std::vector<uint32_t>& image_tuple) {
  uint32_t n = g.order();
  std::vector<std::pair<uint32_t, uint32_t>> bij;
  require(marked_isomorphism(g, socle_gens, h, image_tuple, &bij), errc::internal, "witness failed to close");
  std::vector<uint32_t> fmap(n, UINT32_MAX);
  for (auto [a, b] : bij) fmap[a] = b;
  if (bij.size() == n) return fmap;
  // unique extension: h must mirror conjugation on the socle generators
  std::vector<uint32_t> full(n, UINT32_MAX);
  for (uint32_t x = 0; x < n; ++x) {
    for (uint32_t cand = 0; cand < n; ++cand) {
      bool ok = true;
      for (uint32_t s : socle_gens) {
        uint32_t lhs = fmap[g.conj(x, s)];
        if (lhs == UINT32_MAX || lhs != h.conj(cand, fmap[s])) {
          ok = false;
          break;
        }
      }
      if (ok) {
        full[x] = cand;
        break;  // uniqueness: the centralizer of the socle is trivial
      }
    }
    require(full[x] != UINT32_MAX, errc::internal, "no extension at element " + std::to_string(x));
  }
  return full;
}

namespace detail {

/// WL-based accept: individualize the socle generators with shared tokens on
/// both sides, refine with counting (2,r)-WL Version II, accept iff the
/// element coloring is discrete and matched across sides.
inline bool wl_accept_candidate(const CayleyTable& g, const CayleyTable& h,
                                const std::vector<uint32_t>& socle_gens, const std::vector<uint32_t>& images,
                                std::vector<uint32_t>& out_map, int& rounds_out) {
  std::vector<std::pair<uint32_t, uint32_t>> ag, ah;
  for (size_t i = 0; i < socle_gens.size(); ++i) {
    ag.push_back({socle_gens[i], static_cast<uint32_t>(i + 1)});
    ah.push_back({images[i], static_cast<uint32_t>(i + 1)});
  }
  ColoredGroup ca = individualize(ColoredGroup(g), ag);
  ColoredGroup cb = individualize(ColoredGroup(h), ah);
  WlOptions wopt;
  wopt.k = 2;
  wopt.version = WlVersion::II;
  wopt.counting = true;
  wopt.max_rounds = 0;  // stabilization, floor handled by the engine loop
  RunResult r = run_wl(ca, cb, wopt);
  rounds_out = r.rounds_used;
  if (r.distinguished) return false;
  uint32_t n = g.order();
  std::map<uint32_t, uint32_t> color_to_h;
  for (uint32_t v = 0; v < n; ++v) {
    auto [it, fresh] = color_to_h.emplace(r.element_colors[1][v], v);
    if (!fresh) return false;  // H side not discrete
  }
  out_map.assign(n, UINT32_MAX);
  std::vector<uint8_t> used(n, 0);
  for (uint32_t v = 0; v < n; ++v) {
    auto it = color_to_h.find(r.element_colors[0][v]);
    if (it == color_to_h.end()) return false;  // G side color missing in H
    if (used[it->second]) return false;        // G side not discrete
    used[it->second] = 1;
    out_map[v] = it->second;
  }
  return true;
}

}  // namespace detail

/// Individualize-and-refine listing of all isomorphisms from a semisimple G
/// onto H: match socle factors, enumerate factor bijections and generator
/// images, accept via WL (within budget) or via the unique conjugation
/// extension, and verify.
inline IsoList semisimple_iso_list(const CayleyTable& g, const CayleyTable& h, const IsoListOptions& opt = {}) {
  detail::StopWatch sw;
  require(is_semisimple(g), errc::not_semisimple, "semisimple_iso_list needs semisimple G");
  IsoList out;
  out.verdict.method = "semisimple";
  auto finish = [&](iso_status s, const std::string& ev) {
    out.verdict.status = s;
    out.verdict.evidence = ev;
    out.verdict.millis = sw.ms();
    return out;
  };
  if (g.order() != h.order()) return finish(iso_status::non_isomorphic, "orders differ");
  if (!is_semisimple(h)) return finish(iso_status::non_isomorphic, "H has an Abelian normal subgroup");

  SocleData sg = socle_factors(g), sh = socle_factors(h);
  if (sg.factors.size() != sh.factors.size())
    return finish(iso_status::non_isomorphic, "socle factor counts differ");
  classify_socle_factors(g, sg);

  size_t nf = sg.factors.size();
  if (nf == 0) {
    if (g.order() == 1) {
      out.verdict.witness = {0};
      out.images.push_back({});
      return finish(iso_status::isomorphic, "trivial groups");
    }
    return finish(iso_status::non_isomorphic, "trivial socle");
  }

  // Match H factors to G factor classes by representative isomorphism.
  std::vector<CayleyTable> gfac, hfac;
  for (const auto& f : sg.factors) gfac.push_back(reindex_subgroup(g, f));
  for (const auto& f : sh.factors) hfac.push_back(reindex_subgroup(h, f));
  std::vector<int> hclass(nf, -1);
  for (size_t j = 0; j < nf; ++j) {
    for (size_t ci = 0; ci < sg.iso_classes.size(); ++ci) {
      const auto& rep = gfac[sg.iso_classes[ci][0]];
      if (rep.order() != hfac[j].order()) continue;
      if (oracle_isomorphic(rep, hfac[j]).status == iso_status::isomorphic) {
        hclass[j] = static_cast<int>(ci);
        break;
      }
    }
    if (hclass[j] < 0) return finish(iso_status::non_isomorphic, "unmatched socle factor in H");
  }
  for (size_t ci = 0; ci < sg.iso_classes.size(); ++ci) {
    size_t want = sg.iso_classes[ci].size();
    size_t got = static_cast<size_t>(std::count(hclass.begin(), hclass.end(), static_cast<int>(ci)));
    if (want != got) return finish(iso_status::non_isomorphic, "socle factor iso-multisets differ");
  }

  std::vector<uint32_t> gclass_of(nf);
  for (size_t ci = 0; ci < sg.iso_classes.size(); ++ci)
    for (uint32_t i : sg.iso_classes[ci]) gclass_of[i] = static_cast<uint32_t>(ci);

  // Fixed generator pairs per G factor.
  out.socle_gens.clear();
  std::vector<std::vector<uint32_t>> gfac_back(nf);
  for (size_t i = 0; i < nf; ++i) {
    reindex_subgroup(g, sg.factors[i], &gfac_back[i]);
    auto gens = greedy_generators(gfac[i]);
    require(gens.size() <= 2, errc::internal, "simple factor needed more than 2 generators");
    while (gens.size() < 2) gens.push_back(gens.empty() ? 0 : gens[0]);
    for (uint32_t e : gens) out.socle_gens.push_back(gfac_back[i][e]);
  }

  // Per (G factor, H factor in the matching class): valid image pairs,
  // pruned by element order and marked isomorphism.
  std::vector<std::vector<std::vector<std::vector<uint32_t>>>> pair_images(nf);  // [i][j] -> list of (h1,h2)
  std::vector<std::vector<uint32_t>> hfac_back(nf);
  for (size_t j = 0; j < nf; ++j) reindex_subgroup(h, sh.factors[j], &hfac_back[j]);
  for (size_t i = 0; i < nf; ++i) {
    pair_images[i].resize(nf);
    uint32_t a = out.socle_gens[2 * i], b = out.socle_gens[2 * i + 1];
    uint32_t oa = element_order(g, a), ob = element_order(g, b);
    for (size_t j = 0; j < nf; ++j) {
      if (hclass[j] != static_cast<int>(gclass_of[i])) continue;
      for (uint32_t h1 : hfac_back[j]) {
        if (element_order(h, h1) != oa) continue;
        for (uint32_t h2 : hfac_back[j]) {
          if (element_order(h, h2) != ob) continue;
          if (marked_isomorphism(g, {a, b}, h, {h1, h2})) pair_images[i][j].push_back({h1, h2});
        }
      }
    }
  }

  // Enumerate class-respecting bijections psi, then image choices per factor.
  std::vector<std::vector<uint32_t>> class_h_members(sg.iso_classes.size());
  for (size_t j = 0; j < nf; ++j) class_h_members[hclass[j]].push_back(static_cast<uint32_t>(j));
  for (auto& v : class_h_members) std::sort(v.begin(), v.end());

  std::set<std::vector<uint32_t>> seen_tuples;
  uint32_t n = g.order();
  bool socle_is_whole = (sg.socle.size() == n);

  std::vector<std::vector<uint32_t>> perms = class_h_members;  // current permutation per class
  bool psi_done = false;
  while (!psi_done) {
    // psi: G factor i (position within its class) -> H factor
    std::vector<uint32_t> psi(nf);
    {
      std::vector<uint32_t> cursor(sg.iso_classes.size(), 0);
      for (size_t ci = 0; ci < sg.iso_classes.size(); ++ci)
        for (uint32_t i : sg.iso_classes[ci]) psi[i] = perms[ci][cursor[ci]++];
    }
    // odometer over image choices
    std::vector<uint32_t> choice(nf, 0);
    bool any_empty = false;
    for (size_t i = 0; i < nf; ++i)
      if (pair_images[i][psi[i]].empty()) any_empty = true;
    while (!any_empty) {
      std::vector<uint32_t> tuple;
      for (size_t i = 0; i < nf; ++i) {
        const auto& pr = pair_images[i][psi[i]][choice[i]];
        tuple.push_back(pr[0]);
        tuple.push_back(pr[1]);
      }
      ++out.candidates;

      std::vector<uint32_t> fmap;
      bool accepted = false;
      uint64_t wl_records = 2 * uint64_t(n) * n;
      if (wl_records <= opt.wl_accept_budget) {
        int rounds = 0;
        accepted = detail::wl_accept_candidate(g, h, out.socle_gens, tuple, fmap, rounds);
        out.max_stab_rounds = std::max(out.max_stab_rounds, rounds);
        if (accepted) ++out.wl_accepts;
      } else {
        // construction route: socle closure plus unique conjugation extension
        std::vector<std::pair<uint32_t, uint32_t>> bij;
        if (marked_isomorphism(g, out.socle_gens, h, tuple, &bij)) {
          if (socle_is_whole) {
            if (bij.size() == n) {
              fmap.assign(n, UINT32_MAX);
              for (auto [x, y] : bij) fmap[x] = y;
              accepted = true;
            }
          } else {
            try {
              fmap = expand_semisimple_witness(g, h, out.socle_gens, tuple);
              accepted = true;
            } catch (const group_error&) {
              accepted = false;
            }
          }
        }
      }
      if (accepted) {
        bool ok = true;
        if (n <= opt.full_verify_limit) ok = verify_isomorphism(g, h, fmap);
        if (ok && seen_tuples.insert(tuple).second) {
          out.images.push_back(tuple);
          if (opt.decision_only) {
            out.verdict.witness = fmap;
            return finish(iso_status::isomorphic, "first witness (decision mode)");
          }
        }
      }
      // advance odometer
      size_t i = 0;
      for (; i < nf; ++i) {
        if (++choice[i] < pair_images[i][psi[i]].size()) break;
        choice[i] = 0;
      }
      if (i == nf) break;
    }
    // advance psi odometer: next_permutation per class
    size_t ci = 0;
    for (; ci < perms.size(); ++ci) {
      if (std::next_permutation(perms[ci].begin(), perms[ci].end())) break;
      // wrapped to sorted order; carry to next class
    }
    if (ci == perms.size()) psi_done = true;
  }

  if (out.images.empty()) return finish(iso_status::non_isomorphic, "no socle isomorphism extends");
  out.verdict.witness = expand_semisimple_witness(g, h, out.socle_gens, out.images.front());
  if (n <= opt.full_verify_limit)
    require(verify_isomorphism(g, h, out.verdict.witness), errc::internal, "semisimple witness failed");
  return finish(iso_status::isomorphic, std::to_string(out.images.size()) + " isomorphisms");
}

// --- canonization --------------------------------------------------------------

struct CanonicalForm {
  bool ok = false;
  std::string warning;             // NonCanonicalWarning text when !ok
  std::vector<uint32_t> psi;       // element -> canonical color value
  CayleyTable table;               // canonical relabeled copy, identity at 0
  std::vector<uint32_t> labels;    // psi values in canonical index order
  std::vector<uint32_t> gens;      // individualized generator sequence
  int iterations = 0;

  bool same_as(const CanonicalForm& o) const {
    return ok && o.ok && table == o.table && labels == o.labels;
  }
};

struct CanonOptions {
  bool counting = true;
  int rounds = 0;  // rounds per WL call; 0 = run to stabilization (enables warm start)
  uint64_t tuple_budget = default_tuple_budget();
};

/// Iterated individualize-and-refine canonization: runs (k+1, r)-WL on the
/// colored group, records singleton classes into psi, individualizes the
/// argmin-color element outside <Gens> (smallest index on ties) until psi is
/// injective. Returns an explicit NonCanonicalWarning instead of a wrong
/// answer when psi fails to separate G.
inline CanonicalForm canonical_form(const CayleyTable& g, int k, WlVersion version, const CanonOptions& opt = {}) {
  uint32_t n = g.order();
  CanonicalForm out;
  int dim = k + 1;  // the identification premise for k runs dimension k+1
  detail::WlLimits limits{opt.tuple_budget, {}};

  std::vector<uint32_t> psi(n, UINT32_MAX);
  std::vector<uint32_t> gens;
  ElementSet span(n);
  span.add(0);

  GadgetGraph gg;
  bool use_graph = version == WlVersion::III;
  if (use_graph) gg = build_gadget_graph(g, opt.tuple_budget);

  bool warm = opt.rounds == 0;
  TupleColoring prev_stable;
  bool have_prev = false;

  int max_iter = 1;
  while ((1u << max_iter) < n) ++max_iter;  // log2(n)+1 individualization bound
  max_iter += 2;

  for (out.iterations = 0; out.iterations <= max_iter; ++out.iterations) {
    // colored structure from psi (token = psi value + 1; 0 = unset)
    std::vector<uint32_t> ucolors;
    uint32_t units = use_graph ? gg.vertices : n;
    ucolors.assign(units, 0);
    if (use_graph)
      for (uint32_t v = n; v < gg.vertices; ++v) ucolors[v] = GadgetGraph::kGadgetToken;
    for (uint32_t v = 0; v < n; ++v)
      if (psi[v] != UINT32_MAX) ucolors[v] = psi[v] + 1;

    TupleColoring tc;
    if (have_prev && warm) {
      tc = detail::meet_with_colors(prev_stable, ucolors);
    } else if (use_graph) {
      GadgetGraph colored = gg;
      colored.colors = ucolors;
      tc = detail::initial_coloring_graph(colored, nullptr, dim, limits);
    } else {
      ColoredGroup cg(g, ucolors);
      tc = initial_coloring(cg, nullptr, dim, version, limits);
    }
    // refine to stabilization or for opt.rounds rounds
    int rounds_cap = opt.rounds;
    for (;;) {
      if (rounds_cap > 0 && tc.round >= rounds_cap) break;
      TupleColoring next = detail::refine_round_impl(tc, opt.counting, limits);
      if (next.num_classes == tc.num_classes) break;
      tc = std::move(next);
    }
    if (warm) {
      prev_stable = tc;
      have_prev = true;
    }

    // diagonal pullback over group elements
    std::vector<uint32_t> chi(n);
    for (uint32_t v = 0; v < n; ++v) chi[v] = tc.colors[tc.diag_index(0, v)];
    std::map<uint32_t, uint32_t> class_size;
    for (uint32_t v = 0; v < n; ++v) ++class_size[chi[v]];
    for (uint32_t v = 0; v < n; ++v)
      if (class_size[chi[v]] == 1) psi[v] = chi[v];

    bool total = true;
    std::set<uint32_t> distinct;
    for (uint32_t v = 0; v < n; ++v) {
      if (psi[v] == UINT32_MAX) total = false;
      distinct.insert(psi[v]);
    }
    if (total && distinct.size() == n) {
      out.ok = true;
      break;
    }

    // argmin color among non-singleton classes outside <Gens>
    uint32_t pick = UINT32_MAX, pick_color = UINT32_MAX;
    for (uint32_t v = 0; v < n; ++v) {
      if (span.contains(v) || class_size[chi[v]] == 1) continue;
      if (chi[v] < pick_color || (chi[v] == pick_color && v < pick)) {
        pick_color = chi[v];
        pick = v;
      }
    }
    if (pick == UINT32_MAX) {
      out.warning = "NonCanonicalWarning: no refinable class outside <Gens>, psi not injective";
      out.psi = psi;
      return out;
    }
    psi[pick] = chi[pick];
    gens.push_back(pick);
    span = subgroup_closure(g, gens);
  }
  if (!out.ok) {
    out.warning = "NonCanonicalWarning: psi not injective within the iteration bound";
    out.psi = psi;
    return out;
  }

  out.psi = psi;
  out.gens = gens;
  // canonical order: by psi value, with the identity rotated to the front so
  // the table stays a valid .cay (identity at index 0)
  std::vector<uint32_t> by_psi(n);
  std::iota(by_psi.begin(), by_psi.end(), 0);
  std::sort(by_psi.begin(), by_psi.end(), [&](uint32_t a, uint32_t b) { return psi[a] < psi[b]; });
  uint32_t id_rank = 0;
  for (uint32_t r = 0; r < n; ++r)
    if (by_psi[r] == 0) id_rank = r;
  std::vector<uint32_t> pi(n);
  for (uint32_t r = 0; r < n; ++r) {
    uint32_t elem = by_psi[r];
    uint32_t target = (r == id_rank) ? 0 : (r < id_rank ? r + 1 : r);
    pi[elem] = target;
  }
  out.table = relabel(g, pi);
  out.table.set_label("canon:" + g.label());
  out.labels.assign(n, 0);
  for (uint32_t v = 0; v < n; ++v) out.labels[pi[v]] = psi[v];
  return out;
}

// --- dispatcher ------------------------------------------------------------------

struct AutoOptions {
  OracleOptions oracle;
  uint32_t canon_limit = 256;  // skip the canonization step above this order
  uint64_t tuple_budget = default_tuple_budget();
};

/// Dispatch order: order check, Abelian test, semisimple lister, counting
/// 3-WL Version II, canonical-form comparison, oracle fallback.
inline IsoVerdict auto_pipeline(const CayleyTable& g, const CayleyTable& h, const AutoOptions& opt = {}) {
  detail::StopWatch sw;
  IsoVerdict v;
  if (g.order() != h.order()) {
    v.status = iso_status::non_isomorphic;
    v.method = "order";
    v.evidence = "orders differ";
    v.millis = sw.ms();
    return v;
  }
  if (is_abelian(g) && is_abelian(h)) {
    v = abelian_iso(g, h);
    v.millis = sw.ms();
    return v;
  }
  if (is_semisimple(g)) {
    IsoListOptions lo;
    lo.decision_only = true;
    IsoList list = semisimple_iso_list(g, h, lo);
    v = list.verdict;
    v.millis = sw.ms();
    return v;
  }
  // counting 3-WL Version II
  {
    WlOptions wopt;
    wopt.k = 3;
    wopt.version = WlVersion::II;
    wopt.counting = true;
    wopt.tuple_budget = opt.tuple_budget;
    try {
      RunResult r = run_wl(g, h, wopt);
      if (r.distinguished) {
        v.status = iso_status::non_isomorphic;
        v.method = "wl";
        v.k = 3;
        v.rounds = r.distinguished_round;
        v.evidence = "counting 3-WL Version II distinguished at round " + std::to_string(r.distinguished_round);
        v.millis = sw.ms();
        return v;
      }
    } catch (const group_error& e) {
      if (e.code() != errc::memory_budget) throw;
    }
  }
  if (g.order() <= opt.canon_limit) {
    try {
      CanonicalForm ca = canonical_form(g, 2, WlVersion::II);
      CanonicalForm cb = canonical_form(h, 2, WlVersion::II);
      if (ca.ok && cb.ok) {
        if (ca.same_as(cb)) {
          // compose the canonical labelings into an explicit witness
          uint32_t n = g.order();
          std::map<uint32_t, uint32_t> psi_to_new_g, psi_to_new_h;
          for (uint32_t r = 0; r < n; ++r) {
            psi_to_new_g[ca.labels[r]] = r;
            psi_to_new_h[cb.labels[r]] = r;
          }
          std::vector<uint32_t> witness(n);
          std::map<uint32_t, uint32_t> new_to_old_h;
          for (uint32_t x = 0; x < n; ++x) new_to_old_h[psi_to_new_h[cb.psi[x]]] = x;
          for (uint32_t x = 0; x < n; ++x) witness[x] = new_to_old_h[psi_to_new_g[ca.psi[x]]];
          if (verify_isomorphism(g, h, witness)) {
            v.status = iso_status::isomorphic;
            v.method = "canon";
            v.witness = std::move(witness);
            v.millis = sw.ms();
            return v;
          }
        } else {
          v.status = iso_status::non_isomorphic;
          v.method = "canon";
          v.evidence = "canonical forms differ";
          v.millis = sw.ms();
          return v;
        }
      }
    } catch (const group_error& e) {
      if (e.code() != errc::memory_budget) throw;
    }
  }
  if (g.order() <= opt.oracle.cap) {
    v = oracle_isomorphic(g, h, opt.oracle);
    v.millis = sw.ms();
    return v;
  }
  v.status = iso_status::wl_indistinguishable;
  v.method = "wl";
  v.k = 3;
  v.evidence = "not distinguished by counting 3-WL Version II; above oracle cap";
  v.millis = sw.ms();
  return v;
}

}  // namespace wlg
