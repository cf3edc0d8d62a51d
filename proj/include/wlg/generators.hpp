#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "wlg/cayley.hpp"

namespace wlg {

inline CayleyTable make_cyclic(uint32_t m, uint32_t cap = kDefaultOrderCap) {
  require(m >= 1, errc::entry_out_of_range, "m >= 1");
  require(m <= cap, errc::order_cap_exceeded, "cyclic order " + std::to_string(m));
  std::vector<uint32_t> flat(size_t(m) * m);
  for (uint32_t i = 0; i < m; ++i)
    for (uint32_t j = 0; j < m; ++j) flat[size_t(i) * m + j] = (i + j) % m;
  return CayleyTable::validated(std::move(flat), m, "cyclic:" + std::to_string(m));
}

/// Direct product of cyclic groups given by a list of factors (each >= 2).
/// Elements are mixed-radix tuples, most significant factor first.
inline CayleyTable make_abelian(const std::vector<uint32_t>& factors, uint32_t cap = kDefaultOrderCap) {
  uint64_t n = 1;
  for (uint32_t f : factors) {
    require(f >= 2, errc::entry_out_of_range, "factors >= 2");
    n *= f;
    require(n <= cap, errc::order_cap_exceeded, "abelian order " + std::to_string(n));
  }
  uint32_t nn = static_cast<uint32_t>(n);
  size_t k = factors.size();
  std::vector<uint32_t> flat(size_t(nn) * nn);
  std::vector<uint32_t> da(k), db(k);
  for (uint32_t i = 0; i < nn; ++i) {
    uint32_t x = i;
    for (size_t d = k; d-- > 0;) {
      da[d] = x % factors[d];
      x /= factors[d];
    }
    for (uint32_t j = 0; j < nn; ++j) {
      uint32_t y = j;
      for (size_t d = k; d-- > 0;) {
        db[d] = y % factors[d];
        y /= factors[d];
      }
      uint32_t enc = 0;
      for (size_t d = 0; d < k; ++d) enc = enc * factors[d] + (da[d] + db[d]) % factors[d];
      flat[size_t(i) * nn + j] = enc;
    }
  }
  std::string lbl = "abelian:";
  for (size_t d = 0; d < k; ++d) lbl += (d ? "," : "") + std::to_string(factors[d]);
  return CayleyTable::validated(std::move(flat), nn, lbl);
}

/// Dihedral group of order 2m: index f*m + s encodes x -> (-1)^f x + s.
inline CayleyTable make_dihedral(uint32_t m, uint32_t cap = kDefaultOrderCap) {
  require(m >= 1, errc::entry_out_of_range, "m >= 1");
  uint32_t n = 2 * m;
  require(n <= cap, errc::order_cap_exceeded, "dihedral order " + std::to_string(n));
  std::vector<uint32_t> flat(size_t(n) * n);
  auto enc = [m](uint32_t f, uint32_t s) { return f * m + s; };
  for (uint32_t f1 = 0; f1 < 2; ++f1)
    for (uint32_t s1 = 0; s1 < m; ++s1)
      for (uint32_t f2 = 0; f2 < 2; ++f2)
        for (uint32_t s2 = 0; s2 < m; ++s2) {
          // composition of x -> (-1)^f1 x + s1 after x -> (-1)^f2 x + s2
          uint32_t f = f1 ^ f2;
          uint32_t s = f1 ? (m - s2 % m + s1) % m : (s1 + s2) % m;
          flat[size_t(enc(f1, s1)) * n + enc(f2, s2)] = enc(f, s);
        }
  return CayleyTable::validated(std::move(flat), n, "dihedral:" + std::to_string(m));
}

namespace detail {

inline std::vector<std::vector<uint8_t>> permutations_lex(uint32_t m, bool even_only) {
  std::vector<uint8_t> p(m);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<uint8_t>> out;
  do {
    if (even_only) {
      uint32_t inversions = 0;
      for (uint32_t i = 0; i < m; ++i)
        for (uint32_t j = i + 1; j < m; ++j)
          if (p[i] > p[j]) ++inversions;
      if (inversions & 1) continue;
    }
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline CayleyTable permutation_group_table(uint32_t m, bool even_only, const std::string& lbl, uint32_t cap) {
  require(m >= 1, errc::entry_out_of_range, "m >= 1");
  uint64_t fact = 1;
  for (uint32_t i = 2; i <= m; ++i) {
    fact *= i;
    require(fact <= uint64_t(cap) * 2, errc::order_cap_exceeded, lbl);
  }
  uint64_t n64 = even_only ? std::max<uint64_t>(1, fact / 2) : fact;
  require(n64 <= cap, errc::order_cap_exceeded, lbl + " order " + std::to_string(n64));
  auto perms = permutations_lex(m, even_only);
  uint32_t n = static_cast<uint32_t>(perms.size());
  std::map<std::vector<uint8_t>, uint32_t> index;
  for (uint32_t i = 0; i < n; ++i) index[perms[i]] = i;
  std::vector<uint32_t> flat(size_t(n) * n);
  std::vector<uint8_t> comp(m);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j) {
      for (uint32_t x = 0; x < m; ++x) comp[x] = perms[i][perms[j][x]];
      flat[size_t(i) * n + j] = index.at(comp);
    }
  return CayleyTable::validated(std::move(flat), n, lbl);
}

}  // namespace detail

inline CayleyTable make_symmetric(uint32_t m, uint32_t cap = kDefaultOrderCap) {
  return detail::permutation_group_table(m, false, "sym:" + std::to_string(m), cap);
}

inline CayleyTable make_alternating(uint32_t m, uint32_t cap = kDefaultOrderCap) {
  return detail::permutation_group_table(m, true, "alt:" + std::to_string(m), cap);
}

/// Pair (i,j) encoded as i*|H| + j.
inline CayleyTable direct_product(const CayleyTable& g, const CayleyTable& h, uint32_t cap = kDefaultOrderCap) {
  uint64_t n64 = uint64_t(g.order()) * h.order();
  require(n64 <= cap, errc::order_cap_exceeded, "product order " + std::to_string(n64));
  uint32_t n = static_cast<uint32_t>(n64), m = h.order();
  std::vector<uint32_t> flat(size_t(n) * n);
  for (uint32_t a = 0; a < g.order(); ++a)
    for (uint32_t b = 0; b < m; ++b)
      for (uint32_t c = 0; c < g.order(); ++c)
        for (uint32_t d = 0; d < m; ++d)
          flat[size_t(a * m + b) * n + (c * m + d)] = g.mul(a, c) * m + h.mul(b, d);
  return CayleyTable::validated(std::move(flat), n, "dp:" + g.label() + "x" + h.label());
}

/// Action of H on N by automorphisms: map[h] permutes N's indices.
/// Validity requires each map[h] to preserve N's table, map[0] = id, and
/// map[h1*h2] = map[h1] o map[h2] (apply map[h2] first), which is what
/// associativity of the semidirect product needs.
struct Action {
  const CayleyTable* domain = nullptr;  // H
  const CayleyTable* target = nullptr;  // N
  std::vector<std::vector<uint32_t>> map;

  void validate() const {
    require(domain && target, errc::invalid_action, "null groups");
    uint32_t hs = domain->order(), ns = target->order();
    require(map.size() == hs, errc::invalid_action, "map size");
    std::vector<uint8_t> seen(ns);
    for (uint32_t h = 0; h < hs; ++h) {
      const auto& p = map[h];
      require(p.size() == ns, errc::invalid_action, "permutation size");
      std::fill(seen.begin(), seen.end(), 0);
      for (uint32_t v : p) {
        require(v < ns && !seen[v], errc::invalid_action, "not a bijection");
        seen[v] = 1;
      }
      require(p[0] == 0, errc::invalid_action, "automorphism must fix identity");
      for (uint32_t a = 0; a < ns; ++a)
        for (uint32_t b = 0; b < ns; ++b)
          if (p[target->mul(a, b)] != target->mul(p[a], p[b]))
            fail(errc::invalid_action, "map[" + std::to_string(h) + "] is not an automorphism");
    }
    for (uint32_t i = 0; i < ns; ++i)
      require(map[0][i] == i, errc::invalid_action, "map[identity] must be the identity permutation");
    for (uint32_t h1 = 0; h1 < hs; ++h1)
      for (uint32_t h2 = 0; h2 < hs; ++h2) {
        uint32_t h12 = domain->mul(h1, h2);
        for (uint32_t x = 0; x < ns; ++x)
          if (map[h12][x] != map[h1][map[h2][x]])
            fail(errc::invalid_action, "map is not a homomorphism at (" + std::to_string(h1) + "," +
                                           std::to_string(h2) + ")");
      }
  }

  static Action trivial(const CayleyTable& h, const CayleyTable& n) {
    Action a;
    a.domain = &h;
    a.target = &n;
    std::vector<uint32_t> id(n.order());
    std::iota(id.begin(), id.end(), 0);
    a.map.assign(h.order(), id);
    return a;
  }
};

/// (h1, n1)(h2, n2) = (h1 h2, theta_{h2^-1}(n1) n2), pair (h,n) -> h*|N| + n.
inline CayleyTable semidirect_product(const CayleyTable& h, const CayleyTable& n, const Action& theta,
                                      uint32_t cap = kDefaultOrderCap) {
  require(theta.domain == &h && theta.target == &n, errc::invalid_action, "action endpoints");
  theta.validate();
  uint64_t total64 = uint64_t(h.order()) * n.order();
  require(total64 <= cap, errc::order_cap_exceeded, "product order " + std::to_string(total64));
  uint32_t total = static_cast<uint32_t>(total64), ns = n.order();
  std::vector<uint32_t> flat(size_t(total) * total);
  for (uint32_t h1 = 0; h1 < h.order(); ++h1)
    for (uint32_t n1 = 0; n1 < ns; ++n1)
      for (uint32_t h2 = 0; h2 < h.order(); ++h2) {
        const auto& twist = theta.map[h.inv(h2)];
        for (uint32_t n2 = 0; n2 < ns; ++n2)
          flat[size_t(h1 * ns + n1) * total + (h2 * ns + n2)] =
              h.mul(h1, h2) * ns + n.mul(twist[n1], n2);
      }
  return CayleyTable::validated(std::move(flat), total, "sdp:" + h.label() + ":" + n.label());
}

/// Quaternion group of order 8: 1, -1, i, -i, j, -j, k, -k.
inline CayleyTable make_quaternion8() {
  // index: 0:1 1:-1 2:i 3:-i 4:j 5:-j 6:k 7:-k
  auto neg = [](uint32_t x) { return x ^ 1u; };
  auto base = [&](uint32_t a, uint32_t b) -> uint32_t {
    // products of {1,i,j,k} (even indices), sign tracked by caller
    if (a == 0) return b;
    if (b == 0) return a;
    if (a == b) return 1;  // i*i = j*j = k*k = -1
    // i*j=k, j*k=i, k*i=j; reverse order negates
    if (a == 2 && b == 4) return 6;
    if (a == 4 && b == 6) return 2;
    if (a == 6 && b == 2) return 4;
    if (a == 4 && b == 2) return 7;
    if (a == 6 && b == 4) return 3;
    if (a == 2 && b == 6) return 5;
    fail(errc::internal, "q8");
  };
  std::vector<uint32_t> flat(64);
  for (uint32_t x = 0; x < 8; ++x)
    for (uint32_t y = 0; y < 8; ++y) {
      uint32_t sign = (x & 1) ^ (y & 1);
      uint32_t p = base(x & ~1u, y & ~1u);
      if (sign) p = neg(p);
      flat[x * 8 + y] = p;
    }
  return CayleyTable::validated(std::move(flat), 8, "q8");
}

}  // namespace wlg
