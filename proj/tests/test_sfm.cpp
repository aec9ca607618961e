#include "doctest.h"

#include <memory>
#include <random>
#include <stdexcept>

#include "mif/sfm.hpp"
#include "test_support.hpp"

using namespace mif;

namespace {

std::shared_ptr<BitSharingSource> example_model() {
  return std::make_shared<BitSharingSource>(
      std::vector<BitSharingSource::Bit>{{"a", Rational(1)},
                                         {"b", Rational(1, 5)},
                                         {"c", Rational(2, 5)},
                                         {"d", Rational(2, 5)}},
      std::map<NodeId, std::set<std::string>>{{1, {"a", "b"}},
                                              {2, {"b", "c"}},
                                              {3, {"c"}},
                                              {4, {"b", "d"}}});
}

std::shared_ptr<BitSharingSource> unit_model() {
  return std::make_shared<BitSharingSource>(
      std::vector<BitSharingSource::Bit>{{"a", Rational(1)},
                                         {"b", Rational(1)},
                                         {"c", Rational(1)},
                                         {"d", Rational(1)}},
      std::map<NodeId, std::set<std::string>>{{1, {"a", "b"}},
                                              {2, {"b", "c"}},
                                              {3, {"c"}},
                                              {4, {"b", "d"}}});
}

RateVector rates(Rational a, Rational b, Rational c, Rational d) {
  return {{1, a}, {2, b}, {3, c}, {4, d}};
}

// Random point inside the polyhedron: zero out nodes with no entropy of
// their own (their rate can never be positive), then halve the rest until
// every subset constraint holds.
RateVector random_member(std::mt19937& rng, const EntropyOracle& o) {
  std::uniform_int_distribution<int> num(0, 6);
  RateVector x;
  for (NodeId v : o.ground()) {
    x[v] = o.entropy({v}).is_zero() ? Rational(0) : Rational(num(rng), 5);
  }
  while (!ref::in_polyhedron(o, x)) {
    for (auto& [v, r] : x) r = r / Rational(2);
  }
  return x;
}

}  // namespace

TEST_CASE("constrained sfm frozen example") {
  auto m = example_model();
  // x = (0, 3/5, 0, 0), must contain node 1: minimum 1, minimizers {1,2} and
  // {1,2,3}, so the minimal minimizer is {1,2}.
  SfmResult r = constrained_sfm(*m, rates(Rational(0), Rational(3, 5),
                                          Rational(0), Rational(0)),
                                1, {});
  CHECK(r.min_value == Rational(1));
  CHECK(r.minimal_minimizer == std::set<NodeId>{1, 2});
}

TEST_CASE("constrained sfm respects include and exclude") {
  auto m = example_model();
  RateVector x = rates(Rational(0), Rational(3, 5), Rational(0), Rational(0));
  SfmResult r = constrained_sfm(*m, x, 1, {2});
  // Without node 2 the best sets are {1} (6/5) and {1,3} (6/5+2/5-0... ).
  ref::SubsetMin want =
      ref::subset_min(*m, x, m->to_mask({1}), m->to_mask({2}));
  CHECK(r.min_value == want.value);
  CHECK(m->to_mask(r.minimal_minimizer) == want.intersection);
  CHECK_THROWS_AS(constrained_sfm(*m, x, 2, {2}), std::invalid_argument);
}

TEST_CASE("constrained sfm agrees with enumeration on random instances") {
  std::mt19937 rng(2001);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = gen::random_instance(rng);
    const auto& o = *inst.model;
    std::uniform_int_distribution<int> num(0, 6);
    RateVector x;
    for (NodeId v : o.ground()) x[v] = Rational(num(rng), 5);

    SubsetMask full = (SubsetMask(1) << o.size()) - 1;
    std::uniform_int_distribution<SubsetMask> mask_dist(0, full);
    for (NodeId i : o.ground()) {
      SubsetMask forbid = mask_dist(rng) & ~o.to_mask({i});
      SfmResult got = constrained_sfm(o, x, i, o.to_set(forbid));
      ref::SubsetMin want = ref::subset_min(o, x, o.to_mask({i}), forbid);
      CHECK(got.min_value == want.value);
      CHECK(o.to_mask(got.minimal_minimizer) == want.intersection);
      // The reported minimal minimizer is itself a minimizer (lattice).
      CHECK(ref::excess(o, x, o.to_mask(got.minimal_minimizer)) ==
            want.value);
    }
  }
}

TEST_CASE("saturation capacity frozen examples") {
  auto m = example_model();
  RateVector x = rates(Rational(0), Rational(3, 5), Rational(0), Rational(0));
  CHECK(saturation_capacity(*m, x, 1) == Rational(1));
  CHECK(saturation_capacity(*m, x, 2) == Rational(0));
  CHECK(saturation_capacity(*m, x, 3) == Rational(0));
  CHECK(saturation_capacity(*m, x, 4) == Rational(2, 5));

  RateVector zero = rates(Rational(0), Rational(0), Rational(0), Rational(0));
  CHECK(saturation_capacity(*m, zero, 1) == Rational(6, 5));
  CHECK(saturation_capacity(*m, zero, 3) == Rational(2, 5));

  // Points outside the polyhedron are rejected.
  CHECK_THROWS_AS(saturation_capacity(
                      *m, rates(Rational(2), Rational(0), Rational(0),
                                Rational(0)),
                      1),
                  std::invalid_argument);
}

TEST_CASE("exchange capacity frozen examples") {
  auto m = example_model();
  RateVector x = rates(Rational(0), Rational(3, 5), Rational(0), Rational(0));
  // Raising 3 while lowering 2 can move 2/5.
  CHECK(exchange_capacity(*m, x, 3, 2) == Rational(2, 5));
  // The subset bound for (3, 4) is min over {3}-sets avoiding 4: zero gain.
  CHECK(exchange_capacity(*m, x, 3, 4) == Rational(0));
  // Clamping: the donor has only 1/5 to give even though the subset bound
  // allows 6/5.
  RateVector y = rates(Rational(0), Rational(1, 5), Rational(0), Rational(0));
  CHECK(ref::exchange_bound(*m, y, 1, 2) == Rational(6, 5));
  CHECK(exchange_capacity(*m, y, 1, 2) == Rational(1, 5));
}

TEST_CASE("saturation and exchange are maximal step sizes") {
  std::mt19937 rng(2002);
  const Rational eps(1, 1000);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = gen::random_instance(rng);
    const auto& o = *inst.model;
    RateVector x = random_member(rng, o);

    for (NodeId i : o.ground()) {
      Rational cap = saturation_capacity(o, x, i);
      CHECK(cap == ref::saturation(o, x, i));
      CHECK_FALSE(cap.is_negative());

      RateVector at = x;
      at[i] += cap;
      CHECK(ref::in_polyhedron(o, at));
      at[i] += eps;
      CHECK_FALSE(ref::in_polyhedron(o, at));
    }

    for (NodeId i : o.ground()) {
      for (NodeId j : o.ground()) {
        if (i == j) continue;
        Rational cap = exchange_capacity(o, x, i, j);
        CHECK_FALSE(cap.is_negative());
        CHECK(cap == std::min(ref::exchange_bound(o, x, i, j), x.at(j)));

        RateVector at = x;
        at[i] += cap;
        at[j] -= cap;
        CHECK(ref::in_polyhedron(o, at));
        // One more step breaks membership or drives the donor negative.
        at[i] += eps;
        at[j] -= eps;
        CHECK_FALSE(ref::in_polyhedron(o, at));
      }
    }
  }
}

TEST_CASE("dependence set frozen examples") {
  auto m = example_model();
  RateVector x = rates(Rational(0), Rational(3, 5), Rational(0), Rational(0));
  CHECK(dependence_set(*m, x, 1).empty());  // unsaturated
  CHECK(dependence_set(*m, x, 2) == std::set<NodeId>{2});
  CHECK(dependence_set(*m, x, 3) == std::set<NodeId>{2, 3});
  CHECK(dependence_set(*m, x, 4).empty());

  // Unit-entropy variant at x = (1, 2, 0, 0): node 3 is saturated through
  // {2, 3}, the smallest tight set containing it.
  auto u = unit_model();
  RateVector y = rates(Rational(1), Rational(2), Rational(0), Rational(0));
  CHECK(dependence_set(*u, y, 3) == std::set<NodeId>{2, 3});
}

TEST_CASE("dependence set is the minimal tight set, members are donors") {
  std::mt19937 rng(2003);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = gen::random_instance(rng);
    const auto& o = *inst.model;
    RateVector x = random_member(rng, o);

    for (NodeId i : o.ground()) {
      std::set<NodeId> dep = dependence_set(o, x, i);
      CHECK(dep == ref::dependence(o, x, i));
      if (saturation_capacity(o, x, i) > Rational(0)) {
        CHECK(dep.empty());
        continue;
      }
      REQUIRE(dep.count(i) == 1);
      CHECK(ref::excess(o, x, o.to_mask(dep)) == Rational(0));
      // Membership in the dependence set coincides with a positive
      // pre-clamp exchange bound toward i.
      for (NodeId j : o.ground()) {
        if (j == i) continue;
        bool donor = ref::exchange_bound(o, x, i, j) > Rational(0);
        CHECK(donor == (dep.count(j) == 1));
      }
    }
  }
}

TEST_CASE("node capacity and sweep bundle saturation with dependence") {
  auto m = example_model();
  RateVector x = rates(Rational(0), Rational(3, 5), Rational(0), Rational(0));

  NodeCapacity unsat = node_capacity(*m, x, 1);
  CHECK(unsat.saturation == Rational(1));
  CHECK_FALSE(unsat.dependence.has_value());

  NodeCapacity sat = node_capacity(*m, x, 3);
  CHECK(sat.saturation == Rational(0));
  REQUIRE(sat.dependence.has_value());
  CHECK(sat.dependence->members == std::set<NodeId>{2, 3});
  CHECK(sat.dependence->exchange.at(2) == Rational(2, 5));

  CapacitySweep sweep = capacity_sweep(*m, x);
  CHECK(sweep.saturation ==
        std::map<NodeId, Rational>{{1, Rational(1)},
                                   {2, Rational(0)},
                                   {3, Rational(0)},
                                   {4, Rational(2, 5)}});
  REQUIRE(sweep.dependence.count(2) == 1);
  REQUIRE(sweep.dependence.count(3) == 1);
  CHECK(sweep.dependence.at(3).members == std::set<NodeId>{2, 3});
  CHECK(sweep.dependence.at(3).exchange ==
        std::map<NodeId, Rational>{{2, Rational(2, 5)}});
  CHECK(sweep.dependence.at(2).members == std::set<NodeId>{2});
  CHECK(sweep.dependence.at(2).exchange.empty());
  CHECK(sweep.dependence.count(1) == 0);
  CHECK(sweep.dependence.count(4) == 0);
}

TEST_CASE("sweep matches per-node calls on random instances") {
  std::mt19937 rng(2004);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = gen::random_instance(rng);
    const auto& o = *inst.model;
    RateVector x = random_member(rng, o);
    CapacitySweep sweep = capacity_sweep(o, x);
    for (NodeId i : o.ground()) {
      NodeCapacity nc = node_capacity(o, x, i);
      CHECK(sweep.saturation.at(i) == nc.saturation);
      CHECK(sweep.dependence.count(i) ==
            std::size_t(nc.dependence.has_value() ? 1 : 0));
      if (nc.dependence) {
        CHECK(sweep.dependence.at(i) == *nc.dependence);
      }
    }
  }
}
