#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "wlg/analysis.hpp"
#include "wlg/generators.hpp"

using namespace wlg;

namespace {

std::vector<uint32_t> random_perm_fixing_zero(uint32_t n, std::mt19937& rng) {
  std::vector<uint32_t> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::shuffle(pi.begin() + 1, pi.end(), rng);
  return pi;
}

/// Subgroup lattice by closure BFS; feasible for small Abelian groups.
std::vector<ElementSet> all_subgroups(const CayleyTable& g) {
  std::vector<ElementSet> found;
  std::vector<ElementSet> frontier;
  ElementSet triv(g.order());
  triv.add(0);
  found.push_back(triv);
  frontier.push_back(triv);
  while (!frontier.empty()) {
    std::vector<ElementSet> next;
    for (const auto& s : frontier) {
      for (uint32_t x = 1; x < g.order(); ++x) {
        if (s.contains(x)) continue;
        ElementSet ext = subgroup_closure(g, s.union_with(ElementSet::of(g.order(), {x})));
        if (std::find(found.begin(), found.end(), ext) == found.end()) {
          found.push_back(ext);
          next.push_back(ext);
        }
      }
    }
    frontier = std::move(next);
  }
  return found;
}

/// x splits from Abelian A iff some subgroup K has <x> ∩ K = 1 and |<x>||K| = |A|.
bool splits_brute_force(const CayleyTable& a, uint32_t x) {
  ElementSet cx = subgroup_closure(a, std::vector<uint32_t>{x});
  for (const auto& k : all_subgroups(a)) {
    if (uint64_t(k.size()) * cx.size() != a.order()) continue;
    if (k.intersect(cx).size() != 1) continue;
    return true;
  }
  return false;
}

}  // namespace

TEST_CASE("rank_of computes BFS word lengths") {
  CayleyTable z6 = make_cyclic(6);

  SECTION("full generating set gives rank 1 everywhere") {
    ElementSet c(6);
    for (uint32_t x = 1; x < 6; ++x) c.add(x);
    RankTable rt = rank_of(z6, c);
    CHECK(rt.rank[0] == 0);
    for (uint32_t x = 1; x < 6; ++x) CHECK(rt.rank[x] == 1);
  }

  SECTION("generator pair gives shortest-word metric") {
    RankTable rt = rank_of(z6, ElementSet::of(6, {1, 5}));
    CHECK(rt.rank[3] == 3);
    CHECK(rt.rank[2] == 2);
    CHECK(rt.diameter == 3);
  }

  SECTION("elements outside <C> get the infinity sentinel") {
    RankTable rt = rank_of(z6, ElementSet::of(6, {2}));
    CHECK(rt.rank[2] == 1);
    CHECK(rt.rank[4] == 1);  // the inverse joins C during symmetrization
    CHECK(rt.rank[1] == kRankInfinity);
    CHECK(rt.symmetrized);
  }

  SECTION("commutator set of Q8") {
    CayleyTable q8 = make_quaternion8();
    RankTable rt = rank_of(q8, commutator_set(q8));
    CHECK(rt.rank[1] == 1);  // -1 is a commutator
    for (uint32_t x = 2; x < 8; ++x) CHECK(rt.rank[x] == kRankInfinity);
  }
}

TEST_CASE("rank subadditivity and relabel equivariance") {
  std::mt19937 rng(5);
  for (const auto& g : {make_dihedral(6), make_symmetric(4)}) {
    ElementSet c(g.order());
    c.add(1);
    c.add(2);
    RankTable rt = rank_of(g, c);
    for (int t = 0; t < 200; ++t) {
      uint32_t a = static_cast<uint32_t>(rng() % g.order()), b = static_cast<uint32_t>(rng() % g.order());
      if (rt.rank[a] == kRankInfinity || rt.rank[b] == kRankInfinity) continue;
      uint32_t ab = g.mul(a, b);
      REQUIRE(rt.rank[ab] != kRankInfinity);
      CHECK(rt.rank[ab] <= rt.rank[a] + rt.rank[b]);
    }
    auto pi = random_perm_fixing_zero(g.order(), rng);
    CayleyTable h = relabel(g, pi);
    ElementSet pc(g.order());
    for (uint32_t x : rt.base.to_vector()) pc.add(pi[x]);
    RankTable rt2 = rank_of(h, pc);
    for (uint32_t x = 0; x < g.order(); ++x) CHECK(rt2.rank[pi[x]] == rt.rank[x]);
  }
}

TEST_CASE("commutator width") {
  CayleyTable q8 = make_quaternion8();
  CHECK(commutator_width(q8, 0) == 0);
  CHECK(commutator_width(q8, 1) == 1);
  CHECK(commutator_width(q8, 2) == kRankInfinity);  // i lies outside [Q8,Q8]

  CayleyTable s4 = make_symmetric(4);
  ElementSet comm = commutator_subgroup(s4);
  for (uint32_t x = 0; x < 24; ++x) {
    bool finite = commutator_width(s4, x) != kRankInfinity;
    CHECK(finite == comm.contains(x));
  }
}

TEST_CASE("splits_from_abelian matches the stated examples") {
  CayleyTable z4 = make_cyclic(4);
  CHECK(splits_from_abelian(z4, 0));
  CHECK_FALSE(splits_from_abelian(z4, 2));  // the involution is a square
  CHECK(splits_from_abelian(z4, 1));

  CayleyTable a = make_abelian({2, 4});
  CHECK(splits_from_abelian(a, 4));        // (1,0): order 2, no p-th power drops it
  CHECK_FALSE(splits_from_abelian(a, 2));  // (0,2): the square inside Z/4

  CHECK_THROWS_AS(splits_from_abelian(make_symmetric(3), 1), group_error);
}

TEST_CASE("splits_from_abelian agrees with brute-force complement search on small groups") {
  for (const auto& factors :
       {std::vector<uint32_t>{4}, {2, 4}, {8}, {2, 2, 4}, {9, 3}, {2, 6}}) {
    CayleyTable a = make_abelian(factors);
    for (uint32_t x = 0; x < a.order(); ++x) {
      INFO("order " << a.order() << " element " << x);
      CHECK(splits_from_abelian(a, x) == splits_brute_force(a, x));
    }
  }
}

TEST_CASE("splits_from_group") {
  CayleyTable q8 = make_quaternion8();
  CHECK_FALSE(splits_from_group(q8, 1));                   // -1 lies in [Q8,Q8]
  CHECK_THROWS_AS(splits_from_group(q8, 2), group_error);  // i is not central

  CayleyTable g = direct_product(make_quaternion8(), make_cyclic(3));
  CHECK(element_order(g, 1) == 3);  // central order-3 element
  CHECK(splits_from_group(g, 1));

  CayleyTable a = make_abelian({2, 4});
  for (uint32_t x = 0; x < 8; ++x) CHECK(splits_from_group(a, x) == splits_from_abelian(a, x));
}

TEST_CASE("quotient") {
  CayleyTable s3 = make_symmetric(3);
  ElementSet a3(6);
  for (uint32_t x = 0; x < 6; ++x)
    if (element_order(s3, x) != 2) a3.add(x);
  Quotient q = quotient(s3, a3);
  CHECK(q.table.order() == 2);

  CHECK(quotient(s3, ElementSet::of(6, {0})).table.order() == 6);
  CHECK(quotient(s3, ElementSet::full(6)).table.order() == 1);

  ElementSet not_normal(6);
  not_normal.add(0);
  for (uint32_t x = 1; x < 6; ++x)
    if (element_order(s3, x) == 2) {
      not_normal.add(x);
      break;
    }
  CHECK_THROWS_AS(quotient(s3, not_normal), group_error);
}

TEST_CASE("non-commuting graph") {
  CayleyTable a = make_abelian({2, 4});
  NonCommutingGraph xa = non_commuting_graph(a);
  for (uint32_t v = 0; v < 8; ++v) CHECK(xa.adj[v].empty());

  CayleyTable s3 = make_symmetric(3);
  NonCommutingGraph xs = non_commuting_graph(s3);
  ElementSet noncentral(6);
  for (uint32_t v = 1; v < 6; ++v) noncentral.add(v);
  auto comps = xs.components(noncentral);
  CHECK(comps.size() == 1);
  CHECK(comps[0].size() == 5);

  CayleyTable d4 = make_dihedral(4);
  NonCommutingGraph xd = non_commuting_graph(d4);
  for (uint32_t z : center(d4).to_vector()) CHECK(xd.adj[z].empty());
}

TEST_CASE("non_abelian_components") {
  CHECK_THROWS_AS(non_abelian_components(make_cyclic(6)), group_error);

  SECTION("directly indecomposable: one component equal to G") {
    ComponentDecomposition d = non_abelian_components(make_quaternion8());
    REQUIRE(d.generated.size() == 1);
    CHECK(d.generated[0].size() == 8);
  }

  SECTION("S3 x S3: two components recovering the factors") {
    CayleyTable s3 = make_symmetric(3);
    CayleyTable g = direct_product(s3, s3);
    ComponentDecomposition d = non_abelian_components(g);
    REQUIRE(d.generated.size() == 2);
    ElementSet left(36), right(36);
    for (uint32_t x = 0; x < 6; ++x) left.add(x * 6);
    for (uint32_t y = 0; y < 6; ++y) right.add(y);
    bool match = (d.generated[0] == left && d.generated[1] == right) ||
                 (d.generated[0] == right && d.generated[1] == left);
    CHECK(match);
  }

  SECTION("A5 x Z2: one component generating A5 times the center") {
    CayleyTable g = direct_product(make_alternating(5), make_cyclic(2));
    ComponentDecomposition d = non_abelian_components(g);
    REQUIRE(d.generated.size() == 1);
    CHECK(d.generated[0].size() == 120);  // A5 * Z(G) is everything here
  }

  SECTION("relabel equivariance, stagewise") {
    CayleyTable g = direct_product(make_symmetric(3), make_symmetric(3));
    std::mt19937 rng(9);
    auto pi = random_perm_fixing_zero(36, rng);
    CayleyTable h = relabel(g, pi);
    ComponentDecomposition dg = non_abelian_components(g);
    ComponentDecomposition dh = non_abelian_components(h);
    REQUIRE(dg.stages.size() == dh.stages.size());
    for (size_t s = 0; s < dg.stages.size(); ++s)
      for (uint32_t x = 0; x < 36; ++x) CHECK(dg.stages[s].contains(x) == dh.stages[s].contains(pi[x]));
    auto imgs = dg.generated;
    for (auto& set : imgs) {
      ElementSet mapped(36);
      for (uint32_t x : set.to_vector()) mapped.add(pi[x]);
      set = mapped;
    }
    std::sort(imgs.begin(), imgs.end());
    auto expect = dh.generated;
    std::sort(expect.begin(), expect.end());
    CHECK(imgs == expect);
  }
}

TEST_CASE("simplicity") {
  CHECK(is_simple(make_cyclic(5)));
  CHECK_FALSE(is_simple(make_cyclic(6)));
  CHECK(is_simple(make_alternating(5)));
  CHECK_FALSE(is_simple(make_symmetric(5)));  // normal closure of a 3-cycle is A5
}

TEST_CASE("semisimplicity") {
  CHECK_FALSE(is_semisimple(make_cyclic(4)));
  CHECK_FALSE(is_semisimple(make_abelian({2, 2})));
  CHECK(is_semisimple(make_alternating(5)));
  CHECK(is_semisimple(make_symmetric(5)));
  CHECK(is_semisimple(direct_product(make_alternating(5), make_alternating(5))));
  CHECK_FALSE(is_semisimple(make_symmetric(3)));  // A3 is an Abelian normal subgroup
  CHECK_FALSE(is_semisimple(direct_product(make_alternating(5), make_cyclic(2))));
}

TEST_CASE("socle factors") {
  SECTION("A5: the group itself") {
    SocleData sd = socle_factors(make_alternating(5));
    REQUIRE(sd.factors.size() == 1);
    CHECK(sd.factors[0].size() == 60);
    CHECK(sd.socle.size() == 60);
  }

  SECTION("A5 x A5: two elementwise-commuting factors") {
    CayleyTable g = direct_product(make_alternating(5), make_alternating(5));
    SocleData sd = socle_factors(g);
    REQUIRE(sd.factors.size() == 2);
    for (const auto& f : sd.factors) CHECK(f.size() == 60);
    auto m0 = sd.factors[0].to_vector();
    auto m1 = sd.factors[1].to_vector();
    for (uint32_t x : m0)
      for (uint32_t y : m1) CHECK(g.mul(x, y) == g.mul(y, x));
    CHECK(sd.factors[0].intersect(sd.factors[1]).size() == 1);
    CHECK(sd.socle.size() == 3600);
  }

  SECTION("S5: socle is A5, not S5") {
    SocleData sd = socle_factors(make_symmetric(5));
    REQUIRE(sd.factors.size() == 1);
    CHECK(sd.factors[0].size() == 60);
    CHECK(sd.socle.size() == 60);
  }

  SECTION("factors are simple and the order product divides |G|") {
    CayleyTable g = make_symmetric(5);
    SocleData sd = socle_factors(g);
    uint64_t prod = 1;
    for (const auto& f : sd.factors) {
      CHECK(is_simple_subgroup(g, f));
      prod *= f.size();
    }
    CHECK(g.order() % prod == 0);
  }

  SECTION("errors on non-semisimple input") {
    CHECK_THROWS_AS(socle_factors(make_cyclic(6)), group_error);
  }

  SECTION("accelerated equals reference on A5 and S5") {
    for (const auto& g : {make_alternating(5), make_symmetric(5)}) {
      SocleData fast = socle_factors(g);
      SocleData ref = socle_factors_reference(g);
      CHECK(fast.factors == ref.factors);
      CHECK(fast.socle == ref.socle);
    }
  }

  SECTION("relabel equivariance") {
    CayleyTable g = make_symmetric(5);
    std::mt19937 rng(13);
    auto pi = random_perm_fixing_zero(120, rng);
    CayleyTable h = relabel(g, pi);
    SocleData sg = socle_factors(g), sh = socle_factors(h);
    auto imgs = sg.factors;
    for (auto& set : imgs) {
      ElementSet mapped(120);
      for (uint32_t x : set.to_vector()) mapped.add(pi[x]);
      set = mapped;
    }
    std::sort(imgs.begin(), imgs.end());
    CHECK(imgs == sh.factors);
  }
}
