#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace wlg {

enum class errc {
  not_latin_square,
  no_identity_at_zero,
  not_associative,
  entry_out_of_range,
  not_a_permutation,
  identity_moved,
  order_cap_exceeded,
  invalid_action,
  not_abelian,
  not_central,
  not_normal,
  abelian_input,
  not_semisimple,
  oracle_cap_exceeded,
  token_collision,
  dimension_zero,
  memory_budget,
  time_budget,
  parse_error,
  io_error,
  internal,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::not_latin_square: return "NotLatinSquare";
    case errc::no_identity_at_zero: return "NoIdentityAtZero";
    case errc::not_associative: return "NotAssociative";
    case errc::entry_out_of_range: return "EntryOutOfRange";
    case errc::not_a_permutation: return "NotAPermutation";
    case errc::identity_moved: return "IdentityMoved";
    case errc::order_cap_exceeded: return "OrderCapExceeded";
    case errc::invalid_action: return "InvalidAction";
    case errc::not_abelian: return "NotAbelian";
    case errc::not_central: return "NotCentral";
    case errc::not_normal: return "NotNormal";
    case errc::abelian_input: return "AbelianInput";
    case errc::not_semisimple: return "NotSemisimple";
    case errc::oracle_cap_exceeded: return "OracleCapExceeded";
    case errc::token_collision: return "TokenCollision";
    case errc::dimension_zero: return "DimensionZero";
    case errc::memory_budget: return "MemoryBudget";
    case errc::time_budget: return "TimeBudget";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
    case errc::internal: return "Internal";
  }
  return "Unknown";
}

class group_error : public std::runtime_error {
 public:
  group_error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw group_error(code, msg); }

inline void require(bool ok, errc code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

// --- deterministic hashing -------------------------------------------------
//
// Color ids are assigned from 128-bit signature digests sorted as byte
// strings. The digest is a fixed-constant function of the signature stream,
// so ids are reproducible across runs, machines, and thread counts.

inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct hash128 {
  uint64_t lo = 0;
  uint64_t hi = 0;

  friend bool operator==(const hash128& a, const hash128& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
  friend bool operator<(const hash128& a, const hash128& b) {
    return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
  }
};

struct hash128_hasher {
  size_t operator()(const hash128& h) const { return static_cast<size_t>(h.lo ^ (h.hi * 0x9e3779b97f4a7c15ULL)); }
};

// Sequential stream hash; order of put() calls matters.
class hash_stream {
 public:
  void put(uint64_t v) {
    a_ = mix64(a_ ^ mix64(v + 0x8e9f0d1a2b3c4d5eULL));
    b_ = mix64(b_ + (v ^ 0xc6a4a7935bd1e995ULL)) ^ (a_ >> 17);
    ++len_;
  }
  hash128 digest() const {
    hash128 h;
    h.lo = mix64(a_ ^ (len_ * 0xff51afd7ed558ccdULL));
    h.hi = mix64(b_ + (len_ ^ 0xc4ceb9fe1a85ec53ULL));
    return h;
  }

 private:
  uint64_t a_ = 0x6a09e667f3bcc908ULL;
  uint64_t b_ = 0xbb67ae8584caa73bULL;
  uint64_t len_ = 0;
};

// Commutative accumulator: hashes a multiset independent of insertion order.
struct multiset_hash {
  uint64_t s1 = 0, s2 = 0, cnt = 0;
  void add(uint64_t v) {
    s1 += mix64(v ^ 0x2545f4914f6cdd1dULL);
    s2 += mix64(v + 0x9e6c63d0876a9a35ULL);
    ++cnt;
  }
};

// --- small parallel helper --------------------------------------------------

inline unsigned worker_count() {
  static unsigned n = [] {
    if (const char* s = std::getenv("WLG_THREADS")) {
      long v = std::strtol(s, nullptr, 10);
      if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1u : hc;
  }();
  return n;
}

// Splits [0,n) into chunks; fn(begin,end) must only write to disjoint state.
inline void parallel_for(uint64_t n, const std::function<void(uint64_t, uint64_t)>& fn) {
  unsigned workers = worker_count();
  if (workers <= 1 || n < 4096) {
    fn(0, n);
    return;
  }
  uint64_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> ts;
  for (unsigned w = 0; w < workers; ++w) {
    uint64_t b = w * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    ts.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : ts) t.join();
}

inline uint64_t default_tuple_budget() {
  if (const char* s = std::getenv("WLG_TUPLE_BUDGET")) {
    long long v = std::strtoll(s, nullptr, 10);
    if (v > 0) return static_cast<uint64_t>(v);
  }
  return uint64_t(1) << 27;
}

}  // namespace wlg
