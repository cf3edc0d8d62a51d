#pragma once

#include <atomic>
#include <cctype>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "wlg/generators.hpp"
#include "wlg/pipelines.hpp"
#include "wlg/report.hpp"

namespace wlg {

// --- group spec grammar -------------------------------------------------------
//
//   spec := cyclic:m | abelian:a,b,c | dihedral:m | sym:m | alt:m
//         | dp:<spec>x<spec> | sdp:<H-spec>:<N-spec>:<action-id>
//         | cfpair:n | file:<path>
//
// Action ids: trivial | inv | pow:k | mat:a,b,c,d | dmat:a,b,c,d:e,f,g,h
// (matrix actions act on abelian:p,p; inv needs cyclic-even or dihedral H).

struct ParsedGroup {
  CayleyTable table;
  std::string family;
  std::vector<uint32_t> params;
};

struct SpecOptions {
  uint32_t order_cap = kDefaultOrderCap;
  bool auto_relabel = false;
};

namespace detail {

struct SpecParser {
  const std::string& s;
  size_t pos = 0;
  const SpecOptions& opt;

  [[noreturn]] void err(const std::string& msg) const {
    fail(errc::parse_error, msg + " at position " + std::to_string(pos) + " in '" + s + "'");
  }
  bool eof() const { return pos >= s.size(); }
  char peek() const { return eof() ? '\0' : s[pos]; }
  void expect(char c) {
    if (peek() != c) err(std::string("expected '") + c + "'");
    ++pos;
  }
  std::string ident() {
    size_t b = pos;
    while (!eof() && std::islower(static_cast<unsigned char>(s[pos]))) ++pos;
    if (b == pos) err("expected a name");
    return s.substr(b, pos - b);
  }
  uint32_t number() {
    size_t b = pos;
    while (!eof() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (b == pos) err("expected a number");
    return static_cast<uint32_t>(std::stoul(s.substr(b, pos - b)));
  }
  std::vector<uint32_t> number_list() {
    std::vector<uint32_t> xs{number()};
    while (peek() == ',') {
      ++pos;
      xs.push_back(number());
    }
    return xs;
  }

  Action make_action(const ParsedGroup& h, const ParsedGroup& n, const std::string& id,
                     const std::vector<std::vector<uint32_t>>& args) {
    Action a;
    a.domain = &h.table;
    a.target = &n.table;
    uint32_t hs = h.table.order(), ns = n.table.order();
    std::vector<uint32_t> idperm(ns);
    std::iota(idperm.begin(), idperm.end(), 0);
    a.map.assign(hs, idperm);
    auto power_of_perm = [&](const std::vector<uint32_t>& p, uint32_t e) {
      std::vector<uint32_t> r = idperm;
      for (uint32_t i = 0; i < e; ++i) {
        std::vector<uint32_t> t(ns);
        for (uint32_t x = 0; x < ns; ++x) t[x] = p[r[x]];
        r = t;
      }
      return r;
    };
    if (id == "trivial") return a;
    if (id == "inv") {
      std::vector<uint32_t> inv_perm(ns);
      for (uint32_t x = 0; x < ns; ++x) inv_perm[x] = n.table.inv(x);
      if (h.family == "cyclic") {
        if (h.params[0] % 2 != 0) err("inv needs an even cyclic complement");
        for (uint32_t i = 0; i < hs; ++i)
          if (i % 2) a.map[i] = inv_perm;
      } else if (h.family == "dihedral") {
        uint32_t m = h.params[0];
        for (uint32_t i = 0; i < hs; ++i)
          if (i >= m) a.map[i] = inv_perm;  // reflections invert
      } else {
        err("inv supports cyclic or dihedral complements");
      }
      return a;
    }
    if (id == "pow") {
      if (h.family != "cyclic") err("pow needs a cyclic complement");
      uint32_t k = args.at(0).at(0);
      std::vector<uint32_t> base(ns);
      for (uint32_t x = 0; x < ns; ++x) base[x] = n.table.pow(x, k);
      for (uint32_t i = 0; i < hs; ++i) a.map[i] = power_of_perm(base, i);
      return a;
    }
    if (id == "mat" || id == "dmat") {
      if (n.family != "abelian" || n.params.size() != 2 || n.params[0] != n.params[1])
        err(id + " acts on abelian:p,p");
      uint32_t p = n.params[0];
      auto mat_perm = [&](const std::vector<uint32_t>& m4) {
        std::vector<uint32_t> perm(ns);
        for (uint32_t x = 0; x < p; ++x)
          for (uint32_t y = 0; y < p; ++y) {
            uint32_t nx = (m4[0] * x + m4[1] * y) % p;
            uint32_t ny = (m4[2] * x + m4[3] * y) % p;
            perm[x * p + y] = nx * p + ny;
          }
        return perm;
      };
      if (id == "mat") {
        if (h.family != "cyclic") err("mat needs a cyclic complement");
        std::vector<uint32_t> base = mat_perm(args.at(0));
        for (uint32_t i = 0; i < hs; ++i) a.map[i] = power_of_perm(base, i);
      } else {
        if (h.family != "dihedral") err("dmat needs a dihedral complement");
        uint32_t m = h.params[0];
        std::vector<uint32_t> rot = mat_perm(args.at(0));
        std::vector<uint32_t> refl = mat_perm(args.at(1));
        for (uint32_t f = 0; f < 2; ++f)
          for (uint32_t sft = 0; sft < m; ++sft) {
            // (f, s) = r^s * refl^f, and the action is a homomorphism
            std::vector<uint32_t> perm = power_of_perm(rot, sft);
            if (f) {
              std::vector<uint32_t> t(ns);
              for (uint32_t x = 0; x < ns; ++x) t[x] = perm[refl[x]];
              perm = t;
            }
            a.map[f * m + sft] = perm;
          }
      }
      return a;
    }
    err("unknown action id '" + id + "'");
  }

  std::vector<ParsedGroup> parse() {
    auto out = parse_one();
    if (!eof()) err("trailing characters");
    return out;
  }

  std::vector<ParsedGroup> parse_one() {
    std::string fam = ident();
    if (fam == "file") {
      expect(':');
      std::string path = s.substr(pos);
      pos = s.size();
      ParsedGroup pg{load_cay(path, opt.auto_relabel), "file", {}};
      return {std::move(pg)};
    }
    expect(':');
    if (fam == "cyclic") {
      uint32_t m = number();
      return {{make_cyclic(m, opt.order_cap), fam, {m}}};
    }
    if (fam == "abelian") {
      auto xs = number_list();
      return {{make_abelian(xs, opt.order_cap), fam, xs}};
    }
    if (fam == "dihedral") {
      uint32_t m = number();
      return {{make_dihedral(m, opt.order_cap), fam, {m}}};
    }
    if (fam == "sym") {
      uint32_t m = number();
      return {{make_symmetric(m, opt.order_cap), fam, {m}}};
    }
    if (fam == "alt") {
      uint32_t m = number();
      return {{make_alternating(m, opt.order_cap), fam, {m}}};
    }
    if (fam == "cfpair") {
      uint32_t m = number();
      auto [g, h] = countfree_family(m, opt.order_cap);
      return {{std::move(g), "cfpair_g", {m}}, {std::move(h), "cfpair_h", {m}}};
    }
    if (fam == "dp") {
      auto left = parse_one();
      if (left.size() != 1) err("dp needs single-group operands");
      expect('x');
      auto right = parse_one();
      if (right.size() != 1) err("dp needs single-group operands");
      ParsedGroup pg{direct_product(left[0].table, right[0].table, opt.order_cap), "dp", {}};
      return {std::move(pg)};
    }
    if (fam == "sdp") {
      auto hs = parse_one();
      if (hs.size() != 1) err("sdp needs single-group operands");
      expect(':');
      auto ns = parse_one();
      if (ns.size() != 1) err("sdp needs single-group operands");
      expect(':');
      std::string id = ident();
      std::vector<std::vector<uint32_t>> args;
      if (id == "pow" || id == "mat" || id == "dmat") {
        expect(':');
        args.push_back(number_list());
        if (id == "dmat") {
          expect(':');
          args.push_back(number_list());
        }
      }
      Action a = make_action(hs[0], ns[0], id, args);
      ParsedGroup pg{semidirect_product(hs[0].table, ns[0].table, a, opt.order_cap), "sdp", {}};
      pg.table.set_label("sdp:" + hs[0].table.label() + ":" + ns[0].table.label() + ":" + id);
      return {std::move(pg)};
    }
    err("unknown family '" + fam + "'");
  }
};

}  // namespace detail

inline std::vector<ParsedGroup> parse_group_spec(const std::string& spec, const SpecOptions& opt = {}) {
  detail::SpecParser p{spec, 0, opt};
  return p.parse();
}

inline CayleyTable group_from_spec(const std::string& spec, const SpecOptions& opt = {}) {
  auto v = parse_group_spec(spec, opt);
  require(v.size() == 1, errc::parse_error, "spec '" + spec + "' yields " + std::to_string(v.size()) + " groups");
  CayleyTable t = std::move(v[0].table);
  t.set_label(spec);
  return t;
}

// --- corpora -------------------------------------------------------------------

struct CorpusEntry {
  std::string spec;
  CayleyTable table;
};

namespace detail {

inline void abelian_types_rec(const std::vector<std::pair<uint32_t, uint32_t>>& pe, size_t i,
                              std::vector<uint32_t> acc, std::vector<std::vector<uint32_t>>& out) {
  if (i == pe.size()) {
    out.push_back(acc);
    return;
  }
  auto [p, e] = pe[i];
  // partitions of e, each part becomes a factor p^part
  std::vector<std::vector<uint32_t>> parts;
  std::vector<uint32_t> cur;
  std::function<void(uint32_t, uint32_t)> gen = [&](uint32_t left, uint32_t maxp) {
    if (left == 0) {
      parts.push_back(cur);
      return;
    }
    for (uint32_t part = std::min(left, maxp); part >= 1; --part) {
      cur.push_back(part);
      gen(left - part, part);
      cur.pop_back();
    }
  };
  gen(e, e);
  for (const auto& pr : parts) {
    auto next = acc;
    for (uint32_t ex : pr) {
      uint32_t q = 1;
      for (uint32_t t = 0; t < ex; ++t) q *= p;
      next.push_back(q);
    }
    abelian_types_rec(pe, i + 1, std::move(next), out);
  }
}

}  // namespace detail

/// All Abelian group types of order n, as prime-power factor lists.
inline std::vector<std::vector<uint32_t>> abelian_types(uint32_t n) {
  if (n == 1) return {{}};
  std::vector<std::pair<uint32_t, uint32_t>> pe;
  uint32_t m = n;
  for (uint32_t p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      uint32_t e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      pe.push_back({p, e});
    }
  if (m > 1) pe.push_back({m, 1});
  std::vector<std::vector<uint32_t>> out;
  detail::abelian_types_rec(pe, 0, {}, out);
  return out;
}

/// The shipped-constructor corpus up to a given order: cyclic, all Abelian
/// types, dihedral, symmetric, alternating, Q8, the count-free pair, and a
/// handful of direct/semidirect products (some deliberately isomorphic to
/// other entries under different tables).
inline std::vector<CorpusEntry> standard_corpus(uint32_t max_order) {
  std::vector<CorpusEntry> out;
  auto add_spec = [&](const std::string& spec) {
    auto groups = parse_group_spec(spec);
    for (auto& pg : groups) {
      uint32_t n = pg.table.order();
      if (n > max_order) continue;
      bool dup = false;
      for (const auto& e : out)
        if (e.table.raw() == pg.table.raw()) {
          dup = true;  // drop literal duplicates, keep isomorphic-but-distinct tables
          break;
        }
      if (dup) continue;
      pg.table.set_label(spec);
      out.push_back({spec, std::move(pg.table)});
    }
  };
  for (uint32_t m = 1; m <= max_order; ++m) add_spec("cyclic:" + std::to_string(m));
  for (uint32_t n = 4; n <= max_order; ++n)
    for (const auto& type : abelian_types(n)) {
      if (type.size() <= 1) continue;  // cyclic covered above
      std::string spec = "abelian:";
      for (size_t i = 0; i < type.size(); ++i) spec += (i ? "," : "") + std::to_string(type[i]);
      add_spec(spec);
    }
  for (uint32_t m = 2; 2 * m <= max_order; ++m) add_spec("dihedral:" + std::to_string(m));
  for (uint32_t m = 3; m <= 7; ++m) {
    uint64_t f = 1;
    for (uint32_t i = 2; i <= m; ++i) f *= i;
    if (f <= max_order) add_spec("sym:" + std::to_string(m));
    if (f / 2 <= max_order && m >= 4) add_spec("alt:" + std::to_string(m));
  }
  if (max_order >= 8) {
    CayleyTable q8 = make_quaternion8();
    out.push_back({"q8", std::move(q8)});
  }
  if (max_order >= 64) add_spec("cfpair:2");
  // products; several are isomorphic to earlier entries via different tables
  for (const char* spec : {"dp:cyclic:2xcyclic:3", "dp:cyclic:2xsym:3", "dp:cyclic:2xdihedral:4",
                           "dp:sym:3xsym:3", "dp:alt:4xcyclic:2", "dp:cyclic:3xcyclic:3",
                           "dp:alt:5xcyclic:2", "dp:alt:5xalt:5"})
    add_spec(spec);
  // coprime semidirect products
  for (const char* spec :
       {"sdp:cyclic:3:cyclic:7:pow:2", "sdp:cyclic:3:cyclic:7:pow:4", "sdp:cyclic:4:cyclic:5:pow:2",
        "sdp:cyclic:2:cyclic:9:inv", "sdp:cyclic:3:abelian:7,7:mat:2,0,0,2",
        "sdp:cyclic:3:abelian:7,7:mat:2,0,0,4", "sdp:cyclic:3:abelian:7,7:mat:4,0,0,2",
        "sdp:cyclic:2:abelian:5,5:mat:4,0,0,4", "sdp:cyclic:2:abelian:5,5:mat:1,0,0,4",
        "sdp:dihedral:3:abelian:5,5:dmat:0,1,4,4:0,1,1,0", "sdp:dihedral:3:abelian:5,5:dmat:1,0,0,1:0,1,1,0"})
    try {
      add_spec(spec);
    } catch (const group_error&) {
      // entries above the cap are skipped silently
    }
  return out;
}

// --- experiments ------------------------------------------------------------------

struct ExperimentSpec {
  std::vector<std::string> corpus_specs;
  uint32_t corpus_max_order = 0;  // adds the standard corpus up to this order
  int twins = 0;                  // random relabeled twin pairs drawn from the corpus
  uint64_t seed = 1;
  std::vector<int> ks = {1, 2};
  std::vector<WlVersion> versions = {WlVersion::I, WlVersion::II};
  std::vector<bool> counting_modes = {true};
  int max_rounds = 0;
  bool with_oracle = true;
  uint32_t oracle_cap = 512;
  double row_time_budget_ms = 0;
  uint64_t tuple_budget = default_tuple_budget();
  bool timing = true;  // off: CSV millis column fixed to 0.000 for byte-stable diffs
  std::string out_csv;
  std::string out_json;
  unsigned threads = 0;  // 0 = hardware
};

inline ExperimentSpec parse_experiment_spec(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    size_t eq = line.find('=');
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    require(eq != std::string::npos, errc::parse_error, "line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string v) {
      size_t b = v.find_first_not_of(" \t");
      size_t e = v.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    auto split = [&](char sep) {
      std::vector<std::string> parts;
      std::istringstream vs(val);
      std::string p;
      while (std::getline(vs, p, sep))
        if (!p.empty()) parts.push_back(p);
      return parts;
    };
    if (key == "corpus") {
      for (auto& p : split(';')) spec.corpus_specs.push_back(p);
    } else if (key == "corpus_max_order") {
      spec.corpus_max_order = static_cast<uint32_t>(std::stoul(val));
    } else if (key == "twins") {
      spec.twins = std::stoi(val);
    } else if (key == "seed") {
      spec.seed = std::stoull(val);
    } else if (key == "k") {
      spec.ks.clear();
      for (auto& p : split(',')) spec.ks.push_back(std::stoi(p));
    } else if (key == "versions") {
      spec.versions.clear();
      for (auto& p : split(',')) {
        if (p == "I") spec.versions.push_back(WlVersion::I);
        else if (p == "II") spec.versions.push_back(WlVersion::II);
        else if (p == "III") spec.versions.push_back(WlVersion::III);
        else fail(errc::parse_error, "unknown version " + p);
      }
    } else if (key == "counting") {
      spec.counting_modes.clear();
      for (auto& p : split(',')) {
        if (p == "yes" || p == "true") spec.counting_modes.push_back(true);
        else if (p == "no" || p == "false" || p == "countfree") spec.counting_modes.push_back(false);
        else if (p == "both") {
          spec.counting_modes.push_back(true);
          spec.counting_modes.push_back(false);
        } else fail(errc::parse_error, "unknown counting mode " + p);
      }
    } else if (key == "max_rounds") {
      spec.max_rounds = std::stoi(val);
    } else if (key == "oracle") {
      spec.with_oracle = (val == "yes" || val == "true");
    } else if (key == "oracle_cap") {
      spec.oracle_cap = static_cast<uint32_t>(std::stoul(val));
    } else if (key == "row_time_budget_ms") {
      spec.row_time_budget_ms = std::stod(val);
    } else if (key == "tuple_budget") {
      spec.tuple_budget = std::stoull(val);
    } else if (key == "timing") {
      spec.timing = (val == "yes" || val == "true");
    } else if (key == "out_csv") {
      spec.out_csv = val;
    } else if (key == "out_json") {
      spec.out_json = val;
    } else if (key == "threads") {
      spec.threads = static_cast<unsigned>(std::stoul(val));
    } else {
      fail(errc::parse_error, "unknown key '" + key + "' on line " + std::to_string(lineno));
    }
  }
  return spec;
}

struct ReportRow {
  std::string left, right;
  std::string method;  // e.g. "wl(k=2,II,counting)"
  int k = 0;
  int rounds_used = 0;
  std::string verdict;         // distinguished | indistinguishable | isomorphic | non_isomorphic | skipped:budget
  std::string oracle_verdict;  // isomorphic | non_isomorphic | (empty)
  bool agree = true;
  double millis = 0;
};

struct ExperimentResult {
  std::vector<ReportRow> rows;
  uint64_t contradictions = 0;
  nlohmann::json summary;

  std::string csv() const {
    std::string out = "# wlgroups-csv v1\n";
    out += "left,right,method,k,rounds_used,verdict,oracle_verdict,agree,millis\n";
    for (const auto& r : rows) {
      std::ostringstream ms;
      ms.setf(std::ios::fixed);
      ms.precision(3);
      ms << r.millis;
      out += r.left + "," + r.right + "," + r.method + "," + std::to_string(r.k) + "," +
             std::to_string(r.rounds_used) + "," + r.verdict + "," + r.oracle_verdict + "," +
             (r.agree ? "yes" : "no") + "," + ms.str() + "\n";
    }
    return out;
  }
};

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  // corpus assembly
  std::vector<CorpusEntry> corpus;
  if (spec.corpus_max_order) corpus = standard_corpus(spec.corpus_max_order);
  for (const auto& s : spec.corpus_specs) {
    auto groups = parse_group_spec(s);
    for (auto& pg : groups) {
      pg.table.set_label(s);
      corpus.push_back({s, std::move(pg.table)});
    }
  }

  struct Task {
    const CayleyTable* a;
    const CayleyTable* b;
    std::string la, lb;
    int k;
    WlVersion version;
    bool counting;
  };
  std::vector<Task> tasks;
  std::vector<std::pair<CayleyTable, CayleyTable>> twin_storage;

  // pairs: all equal-order corpus pairs, plus seeded relabeled twins
  for (size_t i = 0; i < corpus.size(); ++i)
    for (size_t j = i + 1; j < corpus.size(); ++j) {
      if (corpus[i].table.order() != corpus[j].table.order()) continue;
      for (int k : spec.ks)
        for (WlVersion v : spec.versions)
          for (bool c : spec.counting_modes)
            tasks.push_back({&corpus[i].table, &corpus[j].table, corpus[i].spec, corpus[j].spec, k, v, c});
    }
  std::mt19937_64 rng(spec.seed);
  twin_storage.reserve(spec.twins);
  for (int t = 0; t < spec.twins && !corpus.empty(); ++t) {
    const auto& entry = corpus[rng() % corpus.size()];
    uint32_t n = entry.table.order();
    std::vector<uint32_t> pi(n);
    std::iota(pi.begin(), pi.end(), 0);
    for (uint32_t i = n - 1; i >= 2; --i) std::swap(pi[i], pi[1 + rng() % i]);
    twin_storage.push_back({entry.table, relabel(entry.table, pi)});
  }
  for (int t = 0; t < static_cast<int>(twin_storage.size()); ++t) {
    std::string lbl = "twin" + std::to_string(t);
    for (int k : spec.ks)
      for (WlVersion v : spec.versions)
        for (bool c : spec.counting_modes)
          tasks.push_back({&twin_storage[t].first, &twin_storage[t].second, twin_storage[t].first.label(),
                           lbl, k, v, c});
  }

  ExperimentResult result;
  result.rows.resize(tasks.size());
  std::map<std::pair<const CayleyTable*, const CayleyTable*>, std::string> oracle_cache;
  // oracle verdicts are shared between grid points; precompute sequentially
  if (spec.with_oracle) {
    for (const auto& t : tasks) {
      auto key = std::make_pair(t.a, t.b);
      if (oracle_cache.count(key)) continue;
      if (t.a->order() > spec.oracle_cap) {
        oracle_cache[key] = "";
        continue;
      }
      OracleOptions oo;
      oo.cap = spec.oracle_cap;
      oracle_cache[key] = iso_status_name(oracle_isomorphic(*t.a, *t.b, oo).status);
    }
  }

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      ReportRow row;
      row.left = t.la;
      row.right = t.lb;
      row.k = t.k;
      row.method = std::string("wl(k=") + std::to_string(t.k) + "," + wl_version_name(t.version) + "," +
                   (t.counting ? "counting" : "countfree") + ")";
      detail::StopWatch sw;
      try {
        WlOptions wopt;
        wopt.k = t.k;
        wopt.version = t.version;
        wopt.counting = t.counting;
        wopt.max_rounds = spec.max_rounds;
        wopt.tuple_budget = spec.tuple_budget;
        if (spec.row_time_budget_ms > 0)
          wopt.deadline = detail::clock::now() +
                          std::chrono::milliseconds(static_cast<int64_t>(spec.row_time_budget_ms));
        RunResult r = t.version == WlVersion::III ? version3_group_test(*t.a, *t.b, wopt)
                                                  : run_wl(*t.a, *t.b, wopt);
        row.rounds_used = r.rounds_used;
        row.verdict = r.distinguished ? "distinguished" : "indistinguishable";
      } catch (const group_error& e) {
        if (e.code() == errc::memory_budget || e.code() == errc::time_budget) {
          row.verdict = "skipped:budget";
        } else {
          row.verdict = std::string("error:") + errc_name(e.code());
        }
      } catch (const std::exception&) {
        row.verdict = "error:Internal";
      }
      row.millis = spec.timing ? sw.ms() : 0.0;
      auto it = oracle_cache.find(std::make_pair(t.a, t.b));
      if (it != oracle_cache.end() && !it->second.empty()) {
        row.oracle_verdict = it->second;
        // a WL distinction on an oracle-isomorphic pair is a soundness break
        row.agree = !(row.verdict == "distinguished" && row.oracle_verdict == "isomorphic");
      }
      result.rows[i] = std::move(row);
    }
  };
  unsigned workers = spec.threads ? spec.threads : worker_count();
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  uint64_t disagreements = 0, skipped = 0;
  for (const auto& r : result.rows) {
    if (!r.agree) ++disagreements;
    if (r.verdict.rfind("skipped", 0) == 0) ++skipped;
  }
  result.contradictions = disagreements;
  result.summary = nlohmann::json{{"schema", "wlgroups/experiment/v1"},
                                  {"rows", result.rows.size()},
                                  {"corpus_size", corpus.size()},
                                  {"twins", twin_storage.size()},
                                  {"seed", spec.seed},
                                  {"contradictions", disagreements},
                                  {"skipped", skipped}};
  return result;
}

}  // namespace wlg
