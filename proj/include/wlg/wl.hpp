#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wlg/cayley.hpp"
#include "wlg/common.hpp"
#include "wlg/marked_iso.hpp"

namespace wlg {

enum class WlVersion { I, II, III };

inline const char* wl_version_name(WlVersion v) {
  switch (v) {
    case WlVersion::I: return "I";
    case WlVersion::II: return "II";
    case WlVersion::III: return "III";
  }
  return "?";
}

/// A group plus an element coloring (uniform by default).
struct ColoredGroup {
  const CayleyTable* group = nullptr;
  std::vector<uint32_t> colors;  // empty = all elements share token 0

  explicit ColoredGroup(const CayleyTable& g) : group(&g) {}
  ColoredGroup(const CayleyTable& g, std::vector<uint32_t> c) : group(&g), colors(std::move(c)) {
    require(colors.empty() || colors.size() == g.order(), errc::entry_out_of_range, "color vector size");
  }
  uint32_t color_of(uint32_t v) const { return colors.empty() ? 0 : colors[v]; }
};

/// Assigns fresh distinct tokens to selected elements.
inline ColoredGroup individualize(const ColoredGroup& a, const std::vector<std::pair<uint32_t, uint32_t>>& assignments) {
  uint32_t n = a.group->order();
  ColoredGroup out(*a.group);
  out.colors.resize(n);
  for (uint32_t v = 0; v < n; ++v) out.colors[v] = a.color_of(v);
  for (const auto& [elem, token] : assignments) {
    require(elem < n, errc::entry_out_of_range, "element index");
    for (uint32_t v = 0; v < n; ++v)
      require(out.colors[v] != token, errc::token_collision, "token " + std::to_string(token) + " already in use");
    out.colors[elem] = token;
  }
  return out;
}

/// Round-stamped coloring of the k-tuple space of one or two structures,
/// sharing one color dictionary. Refinement is pure index manipulation, so
/// the same object serves group and graph WL.
struct TupleColoring {
  int k = 0;
  int sides = 1;
  std::array<uint32_t, 2> n{0, 0};          // units per side
  std::array<uint64_t, 2> count{0, 0};      // n^k per side
  std::array<uint64_t, 2> offset{0, 0};     // tuple index base per side
  uint64_t total = 0;
  std::vector<uint32_t> colors;             // per tuple, dense ids
  uint32_t num_classes = 0;
  int round = 0;                            // initial coloring = round 1

  uint64_t diag_index(int side, uint32_t v) const {
    uint64_t stride_sum = 0, p = 1;
    for (int i = 0; i < k; ++i) {
      stride_sum += p;
      p *= n[side];
    }
    return offset[side] + stride_sum * v;
  }
};

struct SideSignature {
  std::vector<std::pair<uint32_t, uint64_t>> classes;  // (color id, multiplicity), sorted

  friend bool operator==(const SideSignature& a, const SideSignature& b) { return a.classes == b.classes; }
};

struct RunResult {
  bool distinguished = false;
  int distinguished_round = 0;  // first round where side signatures differed
  int rounds_used = 0;
  bool stabilized = false;
  std::array<SideSignature, 2> side_signature;
  std::array<std::vector<uint32_t>, 2> element_colors;  // diagonal pullback
  uint32_t num_classes = 0;
  int k = 0;
  WlVersion version = WlVersion::I;
  bool counting = true;
};

namespace detail {

using clock = std::chrono::steady_clock;

struct WlLimits {
  uint64_t tuple_budget = default_tuple_budget();
  clock::time_point deadline{};  // epoch value means "no deadline"

  void check_deadline() const {
    if (deadline != clock::time_point{} && clock::now() > deadline)
      fail(errc::time_budget, "WL run exceeded its time budget");
  }
};

inline void assign_ids(const std::vector<hash128>& hashes, TupleColoring& tc) {
  std::unordered_map<hash128, uint32_t, hash128_hasher> distinct;
  distinct.reserve(1024);
  for (const hash128& h : hashes) distinct.emplace(h, 0);
  std::vector<hash128> keys;
  keys.reserve(distinct.size());
  for (const auto& [h, _] : distinct) keys.push_back(h);
  std::sort(keys.begin(), keys.end());
  for (uint32_t i = 0; i < keys.size(); ++i) distinct[keys[i]] = i;
  tc.colors.resize(hashes.size());
  parallel_for(hashes.size(), [&](uint64_t b, uint64_t e) {
    for (uint64_t t = b; t < e; ++t) tc.colors[t] = distinct.find(hashes[t])->second;
  });
  tc.num_classes = static_cast<uint32_t>(keys.size());
}

inline void decode_tuple(uint64_t t, uint32_t n, int k, uint32_t* digits) {
  for (int i = k; i-- > 0;) {
    digits[i] = static_cast<uint32_t>(t % n);
    t /= n;
  }
}

/// One refinement round: new signature per tuple = (old id, aggregate over
/// substitutions). Counting aggregates a multiset hash; count-free sorts and
/// deduplicates the substitution items.
inline TupleColoring refine_round_impl(const TupleColoring& tc, bool counting, const WlLimits& limits) {
  limits.check_deadline();
  TupleColoring out = tc;
  out.round = tc.round + 1;
  std::vector<hash128> hashes(tc.total);

  int k = tc.k;
  uint32_t bits = 1;
  while ((uint64_t(1) << bits) < tc.num_classes) ++bits;
  bool packable = uint64_t(bits) * k <= 64;

  for (int side = 0; side < tc.sides; ++side) {
    uint32_t n = tc.n[side];
    uint64_t base = tc.offset[side];
    parallel_for(tc.count[side], [&](uint64_t bgn, uint64_t end) {
      std::array<uint32_t, 8> digits{};
      std::array<uint64_t, 8> stride{};
      std::array<uint64_t, 8> sub_base{};
      std::vector<uint64_t> scratch;
      for (uint64_t t = bgn; t < end; ++t) {
        decode_tuple(t, n, k, digits.data());
        uint64_t p = 1;
        for (int i = k; i-- > 0;) {
          stride[i] = p;
          p *= n;
        }
        for (int i = 0; i < k; ++i) sub_base[i] = base + t - uint64_t(digits[i]) * stride[i];
        hash_stream hs;
        hs.put(tc.colors[base + t]);
        if (counting) {
          multiset_hash acc;
          for (uint32_t x = 0; x < n; ++x) {
            uint64_t item;
            if (packable) {
              item = 0;
              for (int i = 0; i < k; ++i)
                item = (item << bits) | tc.colors[sub_base[i] + uint64_t(x) * stride[i]];
            } else {
              item = 0x9e3779b97f4a7c15ULL;
              for (int i = 0; i < k; ++i) item = mix64(item ^ tc.colors[sub_base[i] + uint64_t(x) * stride[i]]);
            }
            acc.add(item);
          }
          hs.put(acc.s1);
          hs.put(acc.s2);
          hs.put(acc.cnt);
        } else {
          scratch.clear();
          for (uint32_t x = 0; x < n; ++x) {
            uint64_t item;
            if (packable) {
              item = 0;
              for (int i = 0; i < k; ++i)
                item = (item << bits) | tc.colors[sub_base[i] + uint64_t(x) * stride[i]];
            } else {
              item = 0x9e3779b97f4a7c15ULL;
              for (int i = 0; i < k; ++i) item = mix64(item ^ tc.colors[sub_base[i] + uint64_t(x) * stride[i]]);
            }
            scratch.push_back(item);
          }
          std::sort(scratch.begin(), scratch.end());
          scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
          for (uint64_t v : scratch) hs.put(v);
        }
        hashes[base + t] = hs.digest();
      }
    });
  }
  assign_ids(hashes, out);
  return out;
}

inline SideSignature side_signature(const TupleColoring& tc, int side) {
  std::unordered_map<uint32_t, uint64_t> hist;
  for (uint64_t t = 0; t < tc.count[side]; ++t) ++hist[tc.colors[tc.offset[side] + t]];
  SideSignature s;
  s.classes.assign(hist.begin(), hist.end());
  std::sort(s.classes.begin(), s.classes.end());
  return s;
}

inline bool sides_differ(const SideSignature& a, const SideSignature& b, bool counting) {
  if (counting) return !(a == b);
  // count-free: compare the sets of colors present
  if (a.classes.size() != b.classes.size()) return true;
  for (size_t i = 0; i < a.classes.size(); ++i)
    if (a.classes[i].first != b.classes[i].first) return true;
  return false;
}

/// Meet of a previous (single-side) tuple coloring with a new element
/// coloring: the refinement fixpoint from this start equals a fresh
/// stabilization run under the finer element colors, at lower cost.
inline TupleColoring meet_with_colors(const TupleColoring& prev, const std::vector<uint32_t>& unit_colors) {
  TupleColoring out = prev;
  out.round = 1;
  std::vector<hash128> hashes(prev.total);
  uint32_t n = prev.n[0];
  int k = prev.k;
  parallel_for(prev.total, [&](uint64_t bgn, uint64_t end) {
    std::array<uint32_t, 8> e{};
    for (uint64_t t = bgn; t < end; ++t) {
      decode_tuple(t, n, k, e.data());
      hash_stream hs;
      hs.put(prev.colors[t]);
      for (int i = 0; i < k; ++i) hs.put(unit_colors.empty() ? 0 : unit_colors[e[i]]);
      hashes[t] = hs.digest();
    }
  });
  assign_ids(hashes, out);
  return out;
}

/// True when two colorings induce the same partition of the tuple space.
inline bool same_partition(const TupleColoring& a, const TupleColoring& b) {
  if (a.total != b.total || a.num_classes != b.num_classes) return false;
  std::unordered_map<uint32_t, uint32_t> fwd;
  fwd.reserve(a.num_classes * 2);
  for (uint64_t t = 0; t < a.total; ++t) {
    auto [it, fresh] = fwd.emplace(a.colors[t], b.colors[t]);
    if (!fresh && it->second != b.colors[t]) return false;
  }
  return true;
}

}  // namespace detail

/// Initial coloring (round 1) for one or two colored groups sharing a
/// dictionary. Version I hashes the multiplication/equality pattern; Version
/// II hashes the canonical closure trace, so equal ids coincide with marked
/// isomorphism.
inline TupleColoring initial_coloring(const ColoredGroup& a, const ColoredGroup* b, int k, WlVersion version,
                                      const detail::WlLimits& limits = {}) {
  require(k >= 1, errc::dimension_zero, "k >= 1");
  require(k <= 8, errc::memory_budget, "k too large");
  require(version != WlVersion::III, errc::internal, "Version III goes through the gadget graph");
  TupleColoring tc;
  tc.k = k;
  tc.sides = b ? 2 : 1;
  tc.n = {a.group->order(), b ? b->group->order() : 0};
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
  require(total <= limits.tuple_budget,
          errc::memory_budget, "tuple records " + std::to_string(total) + " exceed budget " +
                                   std::to_string(limits.tuple_budget));
  tc.round = 1;

  std::vector<hash128> hashes(total);
  for (int side = 0; side < tc.sides; ++side) {
    const ColoredGroup& cg = side == 0 ? a : *b;
    const CayleyTable& g = *cg.group;
    uint32_t n = tc.n[side];
    uint64_t base = tc.offset[side];
    parallel_for(tc.count[side], [&](uint64_t bgn, uint64_t end) {
      std::array<uint32_t, 8> e{};
      detail::ClosureScratch scratch;
      for (uint64_t t = bgn; t < end; ++t) {
        detail::decode_tuple(t, n, k, e.data());
        hash_stream hs;
        if (version == WlVersion::I) {
          uint64_t eq = 0;
          for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) eq = (eq << 1) | (e[i] == e[j] ? 1 : 0);
          hs.put(eq);
          uint64_t mult = 0;
          int bit = 0;
          for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
              for (int l = 0; l < k; ++l) {
                mult = (mult << 1) | (g.mul(e[i], e[j]) == e[l] ? 1 : 0);
                if (++bit == 64) {
                  hs.put(mult);
                  mult = 0;
                  bit = 0;
                }
              }
          if (bit) hs.put(mult);
        } else {
          detail::closure_trace(g, e.data(), k, scratch, [&hs](uint32_t v) { hs.put(v); });
        }
        for (int i = 0; i < k; ++i) hs.put(cg.color_of(e[i]));
        hashes[base + t] = hs.digest();
      }
    });
  }
  detail::assign_ids(hashes, tc);
  return tc;
}

inline TupleColoring initial_coloring(const ColoredGroup& a, const ColoredGroup& b, int k, WlVersion version) {
  return initial_coloring(a, &b, k, version);
}

/// One refinement round; counting aggregates a multiset, count-free a set.
inline TupleColoring refine_round(const TupleColoring& tc, bool counting) {
  return detail::refine_round_impl(tc, counting, {});
}

struct WlOptions {
  int k = 2;
  WlVersion version = WlVersion::II;
  int max_rounds = 0;  // 0 = run to stabilization
  bool counting = true;
  uint64_t tuple_budget = default_tuple_budget();
  detail::clock::time_point deadline{};
};

namespace detail {

/// Shared driver: iterate refinement, comparing sides each round, until
/// distinguished, stable, or out of rounds.
inline RunResult drive(TupleColoring tc, int sides, bool counting, int max_rounds, const WlLimits& limits) {
  RunResult res;
  res.k = tc.k;
  res.counting = counting;
  auto snapshot = [&](const TupleColoring& cur) {
    for (int s = 0; s < sides; ++s) res.side_signature[s] = side_signature(cur, s);
  };
  auto compare = [&](const TupleColoring& cur) {
    if (sides < 2) return false;
    snapshot(cur);
    return sides_differ(res.side_signature[0], res.side_signature[1], counting);
  };
  res.rounds_used = tc.round;
  if (compare(tc)) {
    res.distinguished = true;
    res.distinguished_round = tc.round;
  } else {
    while (max_rounds == 0 || tc.round < max_rounds) {
      TupleColoring next = refine_round_impl(tc, counting, limits);
      if (next.num_classes == tc.num_classes) {
        res.stabilized = true;  // refinement is split-only: equal counts = fixpoint
        break;
      }
      tc = std::move(next);
      res.rounds_used = tc.round;
      if (compare(tc)) {
        res.distinguished = true;
        res.distinguished_round = tc.round;
        break;
      }
    }
    if (sides == 1) snapshot(tc);
  }
  res.num_classes = tc.num_classes;
  for (int s = 0; s < sides; ++s) {
    res.element_colors[s].resize(tc.n[s]);
    for (uint32_t v = 0; v < tc.n[s]; ++v) res.element_colors[s][v] = tc.colors[tc.diag_index(s, v)];
  }
  return res;
}

}  // namespace detail

/// Runs (k, r)-WL Version I/II on two colored groups. The initial coloring is
/// round 1; the run stops as soon as the side signatures differ.
inline RunResult run_wl(const ColoredGroup& a, const ColoredGroup& b, const WlOptions& opt) {
  require(opt.version != WlVersion::III, errc::internal, "use version3_group_test for Version III");
  detail::WlLimits limits{opt.tuple_budget, opt.deadline};
  TupleColoring tc = initial_coloring(a, &b, opt.k, opt.version, limits);
  RunResult res = detail::drive(std::move(tc), 2, opt.counting, opt.max_rounds, limits);
  res.version = opt.version;
  return res;
}

inline RunResult run_wl(const CayleyTable& a, const CayleyTable& b, const WlOptions& opt) {
  return run_wl(ColoredGroup(a), ColoredGroup(b), opt);
}

/// Single-structure run; the stable element coloring feeds canonization.
inline RunResult run_wl_single(const ColoredGroup& a, const WlOptions& opt) {
  require(opt.version != WlVersion::III, errc::internal, "use graph engine for Version III");
  detail::WlLimits limits{opt.tuple_budget, opt.deadline};
  TupleColoring tc = initial_coloring(a, nullptr, opt.k, opt.version, limits);
  RunResult res = detail::drive(std::move(tc), 1, opt.counting, opt.max_rounds, limits);
  res.version = opt.version;
  return res;
}

/// element -> color of the diagonal tuple, per side.
inline std::array<std::vector<uint32_t>, 2> pullback_element_colors(const RunResult& r) {
  return r.element_colors;
}

}  // namespace wlg
