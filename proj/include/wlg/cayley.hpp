#pragma once

#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "wlg/common.hpp"

namespace wlg {

constexpr uint32_t kDefaultOrderCap = 5040;

/// A finite group as an n x n multiplication table over element indices.
/// Identity is pinned at index 0; every table is fully validated on
/// construction (Latin square, identity row/column, associativity, inverses).
class CayleyTable {
 public:
  CayleyTable() = default;

  uint32_t order() const { return n_; }
  uint32_t mul(uint32_t i, uint32_t j) const { return t_[size_t(i) * n_ + j]; }
  uint32_t inv(uint32_t i) const { return inv_[i]; }
  const std::vector<uint32_t>& raw() const { return t_; }
  const std::string& label() const { return label_; }
  void set_label(std::string s) { label_ = std::move(s); }

  uint32_t conj(uint32_t g, uint32_t x) const {  // g x g^-1
    return mul(mul(g, x), inv(g));
  }
  uint32_t commutator(uint32_t g, uint32_t h) const {  // g^-1 h^-1 g h
    return mul(mul(inv(g), inv(h)), mul(g, h));
  }
  uint32_t pow(uint32_t g, uint64_t e) const {
    uint32_t acc = 0, base = g;
    while (e) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1;
    }
    return acc;
  }

  friend bool operator==(const CayleyTable& a, const CayleyTable& b) {
    return a.n_ == b.n_ && a.t_ == b.t_;
  }

  static CayleyTable validated(std::vector<uint32_t> flat, uint32_t n, std::string label);

 private:
  uint32_t n_ = 0;
  std::vector<uint32_t> t_;
  std::vector<uint32_t> inv_;
  std::string label_;
};

namespace detail {

// Light's associativity test: full check against a generating set only.
// a*(x*b) == (a*x)*b for all a,b and x in a generating set S implies full
// associativity when the operation already has an identity and S generates.
inline void check_associativity(const std::vector<uint32_t>& t, uint32_t n) {
  auto at = [&](uint32_t i, uint32_t j) { return t[size_t(i) * n + j]; };
  // Build a small generating set greedily by closure growth.
  std::vector<uint8_t> in_closure(n, 0);
  std::vector<uint32_t> closure;
  std::vector<uint32_t> gens;
  in_closure[0] = 1;
  closure.push_back(0);
  while (closure.size() < n) {
    uint32_t next = 0;
    bool found = false;
    for (uint32_t g = 1; g < n; ++g) {
      if (!in_closure[g]) {
        next = g;
        found = true;
        break;
      }
    }
    if (!found) break;
    gens.push_back(next);
    // right-multiplication closure over current generator set
    size_t head = 0;
    if (!in_closure[next]) {
      in_closure[next] = 1;
      closure.push_back(next);
    }
    head = 0;
    while (head < closure.size()) {
      uint32_t x = closure[head++];
      for (uint32_t g : gens) {
        uint32_t p = at(x, g);
        if (p >= n) return;  // caught later by range check
        if (!in_closure[p]) {
          in_closure[p] = 1;
          closure.push_back(p);
        }
      }
    }
  }
  for (uint32_t x : gens) {
    for (uint32_t a = 0; a < n; ++a) {
      uint32_t ax = at(a, x);
      for (uint32_t b = 0; b < n; ++b) {
        if (at(ax, b) != at(a, at(x, b)))
          fail(errc::not_associative,
               "triple (" + std::to_string(a) + "," + std::to_string(x) + "," + std::to_string(b) + ")");
      }
    }
  }
}

}  // namespace detail

inline CayleyTable CayleyTable::validated(std::vector<uint32_t> flat, uint32_t n, std::string label) {
  require(n >= 1 && flat.size() == size_t(n) * n, errc::entry_out_of_range, "table shape");
  for (uint32_t v : flat)
    if (v >= n) fail(errc::entry_out_of_range, "entry " + std::to_string(v) + " out of [0," + std::to_string(n) + ")");
  auto at = [&](uint32_t i, uint32_t j) { return flat[size_t(i) * n + j]; };

  // Identity must sit at index 0. If some other index acts as identity we
  // report it separately so callers can offer a relabel.
  bool zero_id = true;
  for (uint32_t j = 0; j < n && zero_id; ++j)
    if (at(0, j) != j || at(j, 0) != j) zero_id = false;
  if (!zero_id) {
    for (uint32_t e = 1; e < n; ++e) {
      bool is_id = true;
      for (uint32_t j = 0; j < n && is_id; ++j)
        if (at(e, j) != j || at(j, e) != j) is_id = false;
      if (is_id)
        fail(errc::no_identity_at_zero,
             "identity found at index " + std::to_string(e) + "; relabel so it sits at index 0");
    }
  }

  // Latin square before anything else: rows and columns are permutations.
  std::vector<uint8_t> seen(n);
  for (uint32_t i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    for (uint32_t j = 0; j < n; ++j) {
      uint32_t v = at(i, j);
      if (seen[v]) fail(errc::not_latin_square, "row " + std::to_string(i) + " repeats " + std::to_string(v));
      seen[v] = 1;
    }
  }
  for (uint32_t j = 0; j < n; ++j) {
    std::fill(seen.begin(), seen.end(), 0);
    for (uint32_t i = 0; i < n; ++i) {
      uint32_t v = at(i, j);
      if (seen[v]) fail(errc::not_latin_square, "column " + std::to_string(j) + " repeats " + std::to_string(v));
      seen[v] = 1;
    }
  }
  if (!zero_id) fail(errc::not_latin_square, "no identity element");

  detail::check_associativity(flat, n);

  CayleyTable g;
  g.n_ = n;
  g.t_ = std::move(flat);
  g.label_ = std::move(label);
  g.inv_.assign(n, 0);
  for (uint32_t i = 0; i < n; ++i) {
    bool found = false;
    for (uint32_t j = 0; j < n; ++j) {
      if (g.mul(i, j) == 0) {
        require(g.mul(j, i) == 0, errc::internal, "one-sided inverse");
        g.inv_[i] = j;
        found = true;
        break;
      }
    }
    require(found, errc::not_latin_square, "element without inverse");
  }
  return g;
}

/// Validates a raw matrix as a group table; errors name the first violated
/// axiom.
inline CayleyTable validate_group(const std::vector<std::vector<uint32_t>>& rows, std::string label = "") {
  uint32_t n = static_cast<uint32_t>(rows.size());
  require(n >= 1, errc::entry_out_of_range, "empty table");
  std::vector<uint32_t> flat;
  flat.reserve(size_t(n) * n);
  for (const auto& r : rows) {
    require(r.size() == n, errc::entry_out_of_range, "non-square table");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return CayleyTable::validated(std::move(flat), n, std::move(label));
}

/// Smallest m >= 1 with g^m = identity.
inline uint32_t element_order(const CayleyTable& g, uint32_t x) {
  require(x < g.order(), errc::entry_out_of_range, "element index");
  uint32_t m = 1, cur = x;
  while (cur != 0) {
    cur = g.mul(cur, x);
    ++m;
  }
  return m;
}

/// Membership bitmap over [0, n).
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(uint32_t n) : n_(n), w_((n + 63) / 64, 0) {}

  uint32_t universe() const { return n_; }
  bool contains(uint32_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void add(uint32_t i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
  void remove(uint32_t i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }

  uint32_t size() const {
    uint32_t c = 0;
    for (uint64_t x : w_) c += static_cast<uint32_t>(__builtin_popcountll(x));
    return c;
  }
  bool empty() const {
    for (uint64_t x : w_)
      if (x) return false;
    return true;
  }
  std::vector<uint32_t> to_vector() const {
    std::vector<uint32_t> out;
    out.reserve(size());
    for (uint32_t i = 0; i < n_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }
  bool subset_of(const ElementSet& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  ElementSet union_with(const ElementSet& o) const {
    ElementSet r(n_);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] | o.w_[i];
    return r;
  }
  ElementSet intersect(const ElementSet& o) const {
    ElementSet r(n_);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
  }
  friend bool operator==(const ElementSet& a, const ElementSet& b) { return a.n_ == b.n_ && a.w_ == b.w_; }
  friend bool operator<(const ElementSet& a, const ElementSet& b) { return a.w_ < b.w_; }

  static ElementSet of(uint32_t n, std::initializer_list<uint32_t> xs) {
    ElementSet s(n);
    for (uint32_t x : xs) s.add(x);
    return s;
  }
  static ElementSet full(uint32_t n) {
    ElementSet s(n);
    for (uint32_t i = 0; i < n; ++i) s.add(i);
    return s;
  }

 private:
  uint32_t n_ = 0;
  std::vector<uint64_t> w_;
};

/// table'[pi(i)][pi(j)] = pi(table[i][j]); pi must fix 0.
inline CayleyTable relabel(const CayleyTable& g, const std::vector<uint32_t>& pi) {
  uint32_t n = g.order();
  require(pi.size() == n, errc::not_a_permutation, "size mismatch");
  std::vector<uint8_t> seen(n, 0);
  for (uint32_t v : pi) {
    require(v < n, errc::not_a_permutation, "value out of range");
    require(!seen[v], errc::not_a_permutation, "repeated value");
    seen[v] = 1;
  }
  require(pi[0] == 0, errc::identity_moved, "relabel must fix index 0");
  std::vector<uint32_t> flat(size_t(n) * n);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j) flat[size_t(pi[i]) * n + pi[j]] = pi[g.mul(i, j)];
  return CayleyTable::validated(std::move(flat), n, g.label() + "~relabel");
}

// --- .cay serialization ------------------------------------------------------
// line 1: n; lines 2..n+1: n space-separated 0-based indices; optional
// trailing '#' comment lines. LF newlines, single spaces, byte-stable.

inline std::string to_cay(const CayleyTable& g, const std::vector<std::string>& comments = {}) {
  std::string out = std::to_string(g.order());
  out += '\n';
  for (uint32_t i = 0; i < g.order(); ++i) {
    for (uint32_t j = 0; j < g.order(); ++j) {
      if (j) out += ' ';
      out += std::to_string(g.mul(i, j));
    }
    out += '\n';
  }
  for (const auto& c : comments) {
    out += "# ";
    out += c;
    out += '\n';
  }
  return out;
}

inline void save_cay(const CayleyTable& g, const std::string& path, const std::vector<std::string>& comments = {}) {
  std::ofstream f(path, std::ios::binary);
  require(f.good(), errc::io_error, "cannot open " + path);
  f << to_cay(g, comments);
  require(f.good(), errc::io_error, "write failed for " + path);
}

/// Parses the .cay format. With `auto_relabel`, a table whose identity sits
/// at a nonzero index is relabeled (identity swapped to 0) instead of
/// rejected.
inline CayleyTable parse_cay(const std::string& text, bool auto_relabel = false, std::string label = "") {
  std::istringstream in(text);
  std::string line;
  uint32_t n = 0;
  bool have_n = false;
  std::vector<std::vector<uint32_t>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t ws = line.find_first_not_of(" \t");
    if (ws == std::string::npos) continue;
    if (line[ws] == '#') continue;
    std::istringstream ls(line);
    if (!have_n) {
      long long v;
      require(static_cast<bool>(ls >> v) && v >= 1, errc::parse_error, "bad order line");
      n = static_cast<uint32_t>(v);
      have_n = true;
      continue;
    }
    std::vector<uint32_t> row;
    long long v;
    while (ls >> v) {
      require(v >= 0, errc::parse_error, "negative entry");
      row.push_back(static_cast<uint32_t>(v));
    }
    require(row.size() == n, errc::parse_error, "row " + std::to_string(rows.size()) + " has wrong length");
    rows.push_back(std::move(row));
    if (rows.size() == n) break;
  }
  require(have_n && rows.size() == n, errc::parse_error, "truncated table");
  if (auto_relabel) {
    // Find the identity; if displaced, swap it into index 0 first.
    for (uint32_t e = 0; e < n; ++e) {
      bool is_id = true;
      for (uint32_t j = 0; j < n && is_id; ++j)
        if (rows[e][j] != j || rows[j][e] != j) is_id = false;
      if (!is_id) continue;
      if (e == 0) break;
      std::vector<uint32_t> pi(n);
      std::iota(pi.begin(), pi.end(), 0);
      std::swap(pi[0], pi[e]);  // pi moves e -> 0 and 0 -> e
      std::vector<std::vector<uint32_t>> out(n, std::vector<uint32_t>(n));
      for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) out[pi[i]][pi[j]] = pi[rows[i][j]];
      rows = std::move(out);
      break;
    }
  }
  return validate_group(rows, std::move(label));
}

inline CayleyTable load_cay(const std::string& path, bool auto_relabel = false) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), errc::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_cay(ss.str(), auto_relabel, path);
}

}  // namespace wlg
