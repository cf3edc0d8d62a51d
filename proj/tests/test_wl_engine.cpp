#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "wlg/generators.hpp"
#include "wlg/marked_iso.hpp"
#include "wlg/pipelines.hpp"
#include "wlg/wl.hpp"

using namespace wlg;

namespace {

std::vector<uint32_t> random_perm_fixing_zero(uint32_t n, std::mt19937& rng) {
  std::vector<uint32_t> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::shuffle(pi.begin() + 1, pi.end(), rng);
  return pi;
}

uint32_t tuple_color(const TupleColoring& tc, int side, std::initializer_list<uint32_t> digits) {
  uint64_t t = 0;
  for (uint32_t d : digits) t = t * tc.n[side] + d;
  return tc.colors[tc.offset[side] + t];
}

std::vector<std::set<uint32_t>> partition_of(const std::vector<uint32_t>& colors) {
  std::map<uint32_t, std::set<uint32_t>> by_color;
  for (uint32_t v = 0; v < colors.size(); ++v) by_color[colors[v]].insert(v);
  std::vector<std::set<uint32_t>> out;
  for (auto& [c, s] : by_color) out.push_back(std::move(s));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("Version II initial colors at k=1 encode the cyclic subgroup type") {
  CayleyTable z12 = make_cyclic(12);
  ColoredGroup a(z12);
  TupleColoring tc = initial_coloring(a, a, 1, WlVersion::II);
  for (uint32_t x = 0; x < 12; ++x)
    for (uint32_t y = 0; y < 12; ++y) {
      bool same = tuple_color(tc, 0, {x}) == tuple_color(tc, 1, {y});
      CHECK(same == (element_order(z12, x) == element_order(z12, y)));
    }
}

TEST_CASE("Version I initial colors separate idempotent patterns at k=2") {
  CayleyTable z4 = make_cyclic(4);
  ColoredGroup a(z4);
  TupleColoring tc = initial_coloring(a, a, 2, WlVersion::I);
  // (0,0) has g*g = g; (1,1) does not
  CHECK(tuple_color(tc, 0, {0, 0}) != tuple_color(tc, 1, {1, 1}));
  // same multiplication pattern on both sides gets the same color
  CHECK(tuple_color(tc, 0, {1, 1}) == tuple_color(tc, 1, {1, 1}));
}

TEST_CASE("Version II initial ids coincide with marked isomorphism on samples") {
  CayleyTable d4 = make_dihedral(4);
  CayleyTable q8 = make_quaternion8();
  ColoredGroup a(d4), b(q8);
  TupleColoring tc = initial_coloring(a, b, 2, WlVersion::II);
  CHECK(tuple_color(tc, 0, {1, 4}) != tuple_color(tc, 1, {2, 4}));  // (r,s) vs (i,j)

  std::mt19937 rng(31);
  for (int t = 0; t < 150; ++t) {
    uint32_t x1 = static_cast<uint32_t>(rng() % 8), x2 = static_cast<uint32_t>(rng() % 8);
    uint32_t y1 = static_cast<uint32_t>(rng() % 8), y2 = static_cast<uint32_t>(rng() % 8);
    bool same = tuple_color(tc, 0, {x1, x2}) == tuple_color(tc, 1, {y1, y2});
    CHECK(same == marked_isomorphism(d4, {x1, x2}, q8, {y1, y2}));
  }
}

TEST_CASE("refine_round is a fixpoint on stable input") {
  CayleyTable g = make_dihedral(4);
  ColoredGroup a(g);
  TupleColoring tc = initial_coloring(a, a, 2, WlVersion::II);
  for (;;) {
    TupleColoring next = refine_round(tc, true);
    if (next.num_classes == tc.num_classes) {
      CHECK(detail::same_partition(tc, next));
      TupleColoring again = refine_round(next, true);
      CHECK(detail::same_partition(next, again));
      break;
    }
    CHECK(next.num_classes > tc.num_classes);  // monotone refinement
    tc = std::move(next);
  }
}

TEST_CASE("counting 1-WL distinguishes Z4 from Z2xZ2 at round 1") {
  WlOptions opt;
  opt.k = 1;
  opt.version = WlVersion::II;
  RunResult r = run_wl(make_cyclic(4), make_abelian({2, 2}), opt);
  CHECK(r.distinguished);
  CHECK(r.distinguished_round == 1);
}

TEST_CASE("count-free 1-WL never separates the count-free family") {
  auto [g2, h2] = countfree_family(2);
  WlOptions opt;
  opt.k = 1;
  opt.version = WlVersion::II;
  opt.counting = false;
  RunResult r = run_wl(g2, h2, opt);
  CHECK_FALSE(r.distinguished);
  CHECK(r.stabilized);
}

TEST_CASE("a group is never distinguished from itself") {
  for (const auto& g : {make_symmetric(4), make_dihedral(5)}) {
    for (WlVersion v : {WlVersion::I, WlVersion::II})
      for (bool counting : {true, false}) {
        WlOptions opt;
        opt.k = 2;
        opt.version = v;
        opt.counting = counting;
        RunResult r = run_wl(g, g, opt);
        CHECK_FALSE(r.distinguished);
        CHECK(r.stabilized);
      }
  }
}

TEST_CASE("counting (2,2)-WL Version II separates non-isomorphic Abelian pairs") {
  std::vector<CayleyTable> groups;
  groups.push_back(make_abelian({8}));
  groups.push_back(make_abelian({2, 4}));
  groups.push_back(make_abelian({2, 2, 2}));
  for (size_t i = 0; i < groups.size(); ++i)
    for (size_t j = i + 1; j < groups.size(); ++j) {
      WlOptions opt;
      opt.k = 2;
      opt.version = WlVersion::II;
      opt.max_rounds = 2;
      RunResult r = run_wl(groups[i], groups[j], opt);
      CHECK(r.distinguished);
      CHECK(r.distinguished_round <= 2);
    }
}

TEST_CASE("individualize") {
  CayleyTable z12 = make_cyclic(12);
  ColoredGroup base(z12);

  SECTION("duplicate token is rejected") {
    ColoredGroup c = individualize(base, {{1, 7}});
    CHECK_THROWS_AS(individualize(c, {{2, 7}}), group_error);
    CHECK_THROWS_AS(individualize(base, {{1, 0}}), group_error);  // collides with default
  }

  SECTION("individualizing the identity leaves the round-1 partition unchanged (Version I, k=2)") {
    ColoredGroup c = individualize(base, {{0, 9}});
    TupleColoring plain = initial_coloring(base, nullptr, 2, WlVersion::I);
    TupleColoring marked = initial_coloring(c, nullptr, 2, WlVersion::I);
    CHECK(detail::same_partition(plain, marked));
  }

  SECTION("individualizing a generator of Z12 makes counting 2-WL discrete") {
    ColoredGroup c = individualize(base, {{1, 9}});
    WlOptions opt;
    opt.k = 2;
    opt.version = WlVersion::II;
    RunResult r = run_wl_single(c, opt);
    std::set<uint32_t> distinct(r.element_colors[0].begin(), r.element_colors[0].end());
    CHECK(distinct.size() == 12);
  }
}

TEST_CASE("pullback element colors") {
  SECTION("Z4 diagonal classes: identity, involution, two generators") {
    WlOptions opt;
    opt.k = 1;
    opt.version = WlVersion::II;
    RunResult r = run_wl_single(ColoredGroup(make_cyclic(4)), opt);
    std::set<uint32_t> distinct(r.element_colors[0].begin(), r.element_colors[0].end());
    CHECK(distinct.size() == 3);
  }

  SECTION("pullback colors match across a relabeled pair") {
    CayleyTable g = make_dihedral(6);
    std::mt19937 rng(41);
    auto pi = random_perm_fixing_zero(12, rng);
    CayleyTable h = relabel(g, pi);
    WlOptions opt;
    opt.k = 2;
    opt.version = WlVersion::II;
    RunResult r = run_wl(g, h, opt);
    CHECK_FALSE(r.distinguished);
    for (uint32_t x = 0; x < 12; ++x) CHECK(r.element_colors[0][x] == r.element_colors[1][pi[x]]);
  }
}

TEST_CASE("count-free distinguishing implies counting distinguishing no later") {
  std::vector<std::pair<CayleyTable, CayleyTable>> pairs;
  pairs.push_back({make_cyclic(4), make_abelian({2, 2})});
  pairs.push_back({make_dihedral(4), make_quaternion8()});
  pairs.push_back({make_symmetric(3), make_cyclic(6)});
  for (const auto& [g, h] : pairs)
    for (int k : {1, 2})
      for (WlVersion v : {WlVersion::I, WlVersion::II}) {
        WlOptions opt;
        opt.k = k;
        opt.version = v;
        opt.counting = false;
        RunResult cf = run_wl(g, h, opt);
        if (!cf.distinguished) continue;
        opt.counting = true;
        RunResult ct = run_wl(g, h, opt);
        REQUIRE(ct.distinguished);
        CHECK(ct.distinguished_round <= cf.distinguished_round);
      }
}

TEST_CASE("dictionary determinism: identical runs produce identical ids") {
  CayleyTable g = make_symmetric(4);
  CayleyTable h = make_dihedral(12);
  WlOptions opt;
  opt.k = 2;
  opt.version = WlVersion::II;
  RunResult r1 = run_wl(g, h, opt);
  RunResult r2 = run_wl(g, h, opt);
  CHECK(r1.element_colors[0] == r2.element_colors[0]);
  CHECK(r1.element_colors[1] == r2.element_colors[1]);
  CHECK(r1.side_signature[0].classes == r2.side_signature[0].classes);
  CHECK(r1.rounds_used == r2.rounds_used);
}

TEST_CASE("order finding: counting Version II separates element orders at round 1") {
  for (const auto& g : {make_dihedral(8), make_abelian({3, 9}), make_symmetric(4)}) {
    ColoredGroup a(g);
    TupleColoring tc = initial_coloring(a, nullptr, 1, WlVersion::II);
    for (uint32_t x = 0; x < g.order(); ++x)
      for (uint32_t y = x + 1; y < g.order(); ++y)
        if (element_order(g, x) != element_order(g, y)) CHECK(tc.colors[x] != tc.colors[y]);
  }
}

TEST_CASE("memory guard refuses oversized tuple spaces") {
  WlOptions opt;
  opt.k = 3;
  opt.version = WlVersion::I;
  opt.tuple_budget = 1000;
  CHECK_THROWS_MATCHES(run_wl(make_symmetric(4), make_symmetric(4), opt), group_error,
                       Catch::Matchers::Predicate<group_error>(
                           [](const group_error& e) { return e.code() == errc::memory_budget; }));
  CHECK_THROWS_AS(initial_coloring(ColoredGroup(make_cyclic(2)), nullptr, 0, WlVersion::I), group_error);
}

TEST_CASE("partitions refine monotonically across rounds") {
  CayleyTable g = make_dihedral(6);
  ColoredGroup a(g);
  TupleColoring tc = initial_coloring(a, a, 2, WlVersion::I);
  for (int round = 0; round < 6; ++round) {
    TupleColoring next = refine_round(tc, true);
    if (next.num_classes == tc.num_classes) break;
    // every new class sits inside one old class
    auto np = partition_of(next.colors);
    for (const auto& cls : np) {
      uint32_t rep = *cls.begin();
      uint32_t old_color = tc.colors[rep];
      for (uint32_t t : cls) CHECK(tc.colors[t] == old_color);
    }
    tc = std::move(next);
  }
}
