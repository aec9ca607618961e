#include "doctest.h"

#include <memory>
#include <random>
#include <stdexcept>

#include "mif/source_model.hpp"
#include "test_support.hpp"

using namespace mif;

namespace {

// Running example: a:1 seen by {1}; b:1/5 by {1,2,4}; c:2/5 by {2,3};
// d:2/5 by {4}.
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

}  // namespace

TEST_CASE("bit sharing entropies") {
  auto m = example_model();
  CHECK(m->ground() == std::vector<NodeId>{1, 2, 3, 4});
  CHECK(m->size() == 4);
  CHECK(m->entropy({}) == Rational(0));
  CHECK(m->entropy({1}) == Rational(6, 5));
  CHECK(m->entropy({2}) == Rational(3, 5));
  CHECK(m->entropy({3}) == Rational(2, 5));
  CHECK(m->entropy({4}) == Rational(3, 5));
  CHECK(m->entropy({2, 3}) == Rational(3, 5));
  CHECK(m->entropy({1, 2, 3, 4}) == Rational(2));
  CHECK(m->entropy_mask(m->to_mask({2, 3})) == Rational(3, 5));
  CHECK(m->to_set(m->to_mask({2, 3})) == std::set<NodeId>{2, 3});
  CHECK_THROWS_AS(m->entropy({9}), std::invalid_argument);
}

TEST_CASE("bit sharing constructor validation") {
  using Bits = std::vector<BitSharingSource::Bit>;
  using Obs = std::map<NodeId, std::set<std::string>>;

  // Duplicate bit id.
  CHECK_THROWS_AS(BitSharingSource(
                      Bits{{"a", Rational(1)}, {"a", Rational(1)}},
                      Obs{{1, {"a"}}}),
                  std::invalid_argument);
  // Nonpositive bit entropy.
  CHECK_THROWS_AS(BitSharingSource(Bits{{"a", Rational(0)}}, Obs{{1, {"a"}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BitSharingSource(Bits{{"a", Rational(-1)}}, Obs{{1, {"a"}}}),
                  std::invalid_argument);
  // Observation of an undeclared bit.
  CHECK_THROWS_AS(BitSharingSource(Bits{{"a", Rational(1)}}, Obs{{1, {"z"}}}),
                  std::invalid_argument);
  // A bit nobody observes.
  CHECK_THROWS_AS(BitSharingSource(
                      Bits{{"a", Rational(1)}, {"z", Rational(1)}},
                      Obs{{1, {"a"}}}),
                  std::invalid_argument);
  // Node with no observations is fine: H({2}) = 0.
  BitSharingSource quiet(Bits{{"a", Rational(1)}}, Obs{{1, {"a"}}, {2, {}}});
  CHECK(quiet.entropy({2}) == Rational(0));
  CHECK(quiet.entropy({1, 2}) == Rational(1));
}

TEST_CASE("table oracle evaluates by mask over the sorted ground set") {
  // Ground {3, 7}: masks 00, 01 ({3}), 10 ({7}), 11.
  TableOracle t({3, 7}, {Rational(0), Rational(1), Rational(1, 2),
                         Rational(5, 4)});
  CHECK(t.entropy({}) == Rational(0));
  CHECK(t.entropy({3}) == Rational(1));
  CHECK(t.entropy({7}) == Rational(1, 2));
  CHECK(t.entropy({3, 7}) == Rational(5, 4));
  CHECK(t.by_mask().size() == 4);
  CHECK_THROWS_AS(TableOracle({1, 2}, {Rational(0)}), std::invalid_argument);
}

TEST_CASE("projected oracle restricts and extends the ground set") {
  auto base = example_model();
  // Drop node 4, add an unknown node 9: H'({X}) = H(X intersect {1,2,3}).
  ProjectedOracle p(base, {1, 2, 3, 9});
  CHECK(p.entropy({1}) == Rational(6, 5));
  CHECK(p.entropy({9}) == Rational(0));
  CHECK(p.entropy({2, 3, 9}) == Rational(3, 5));
  CHECK(p.entropy({1, 2, 3, 9}) == base->entropy({1, 2, 3}));
  CHECK(p.entropy({1, 2, 3}) == Rational(1) + Rational(1, 5) + Rational(2, 5));
}

TEST_CASE("mutual information") {
  auto m = example_model();
  CHECK(mutual_information(*m, {2}, {3}) == Rational(2, 5));
  CHECK(mutual_information(*m, {1}, {1}) == Rational(6, 5));
  CHECK(mutual_information(*m, {1}, {3}) == Rational(0));
  CHECK(mutual_information(*m, {1, 2}, {3, 4}) ==
        m->entropy({1, 2}) + m->entropy({3, 4}) - Rational(2));
}

TEST_CASE("mutual information is nonnegative, zero on disjoint bit sets") {
  std::mt19937 rng(1002);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = gen::random_instance(rng);
    const auto& o = *inst.model;
    SubsetMask full = (SubsetMask(1) << o.size()) - 1;
    std::uniform_int_distribution<SubsetMask> mask_dist(0, full);
    for (int k = 0; k < 10; ++k) {
      std::set<NodeId> x = o.to_set(mask_dist(rng));
      std::set<NodeId> y = o.to_set(mask_dist(rng));
      Rational mi = mutual_information(o, x, y);
      CHECK_FALSE(mi.is_negative());

      std::set<std::string> bits_x;
      std::set<std::string> bits_y;
      for (NodeId v : x) {
        const auto& seen = o.observes().at(v);
        bits_x.insert(seen.begin(), seen.end());
      }
      for (NodeId v : y) {
        const auto& seen = o.observes().at(v);
        bits_y.insert(seen.begin(), seen.end());
      }
      std::set<std::string> shared;
      for (const std::string& b : bits_x) {
        if (bits_y.count(b)) shared.insert(b);
      }
      if (shared.empty()) CHECK(mi == Rational(0));
    }
  }
}

TEST_CASE("polyhedron membership frozen example") {
  auto m = example_model();
  RateVector inside{{1, Rational(1)},
                    {2, Rational(1, 5)},
                    {3, Rational(2, 5)},
                    {4, Rational(2, 5)}};
  CHECK(polyhedron_member(*m, inside).ok());

  // (1, 3/5, 1/5, 0): first violated subset in ascending mask order is {2,3}
  // with x({2,3}) = 4/5 > 3/5 = H({2,3}).
  RateVector outside{{1, Rational(1)},
                     {2, Rational(3, 5)},
                     {3, Rational(1, 5)},
                     {4, Rational(0)}};
  MembershipReport r = polyhedron_member(*m, outside);
  CHECK_FALSE(r.ok());
  CHECK(r.kind == MembershipReport::Kind::SubsetBound);
  CHECK(r.subset == std::set<NodeId>{2, 3});
  CHECK(r.lhs == Rational(4, 5));
  CHECK(r.rhs == Rational(3, 5));

  RateVector negative{{1, Rational(-1, 5)},
                      {2, Rational(0)},
                      {3, Rational(0)},
                      {4, Rational(0)}};
  MembershipReport n = polyhedron_member(*m, negative);
  CHECK_FALSE(n.ok());
  CHECK(n.kind == MembershipReport::Kind::Negative);
  CHECK(n.subset == std::set<NodeId>{1});
  CHECK(n.lhs == Rational(-1, 5));

  CHECK_THROWS_AS(polyhedron_member(*m, RateVector{{1, Rational(0)}}),
                  std::invalid_argument);
}

TEST_CASE("polyhedron membership agrees with brute force") {
  std::mt19937 rng(1003);
  for (int trial = 0; trial < 40; ++trial) {
    auto inst = gen::random_instance(rng);
    const auto& o = *inst.model;
    std::uniform_int_distribution<int> num(-1, 6);
    for (int k = 0; k < 8; ++k) {
      RateVector x;
      for (NodeId v : o.ground()) x[v] = Rational(num(rng), 5);
      CHECK(polyhedron_member(o, x).ok() == ref::in_polyhedron(o, x));
    }
  }
}

TEST_CASE("slepian wolf frozen example") {
  auto m = example_model();

  // Achievable corner: rates from the running example's solution.
  RateVector good{{1, Rational(1)},
                  {2, Rational(1, 5)},
                  {3, Rational(2, 5)},
                  {4, Rational(2, 5)}};
  SlepianWolfReport ok = slepian_wolf_feasible(*m, good);
  CHECK(ok.ok);
  CHECK(ok.sum_rate_equals_total);

  // (1, 1/5, 2/5, 0): first violated subset in ascending mask order is {4},
  // x({4}) = 0 < H(4 | others) = 2/5.
  RateVector low{{1, Rational(1)},
                 {2, Rational(1, 5)},
                 {3, Rational(2, 5)},
                 {4, Rational(0)}};
  SlepianWolfReport bad = slepian_wolf_feasible(*m, low);
  CHECK_FALSE(bad.ok);
  CHECK(bad.subset == std::set<NodeId>{4});
  CHECK(bad.lhs == Rational(0));
  CHECK(bad.rhs == Rational(2, 5));
  CHECK_FALSE(bad.sum_rate_equals_total);
}

TEST_CASE("slepian wolf equals membership exactly at full sum rate") {
  std::mt19937 rng(1004);
  int at_total = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = gen::random_instance(rng);
    const auto& o = *inst.model;
    Rational total = o.entropy_mask((SubsetMask(1) << o.size()) - 1);

    // A random split of the total entropy across the sources.
    std::uniform_int_distribution<int> num(0, 10);
    std::vector<Rational> weights;
    Rational weight_sum;
    for (std::size_t i = 0; i < o.size(); ++i) {
      weights.push_back(Rational(num(rng)));
      weight_sum += weights.back();
    }
    if (weight_sum.is_zero()) continue;
    RateVector x;
    for (std::size_t i = 0; i < o.size(); ++i) {
      x[o.ground()[i]] = total * weights[i] / weight_sum;
    }

    SlepianWolfReport sw = slepian_wolf_feasible(o, x);
    CHECK(sw.sum_rate_equals_total);
    CHECK(sw.ok == polyhedron_member(o, x).ok());
    ++at_total;
  }
  CHECK(at_total > 30);
}

TEST_CASE("oracle validation accepts bit sharing models") {
  std::mt19937 rng(1005);
  CHECK(validate_oracle(*example_model()).ok());
  for (int trial = 0; trial < 25; ++trial) {
    auto inst = gen::random_instance(rng);
    CHECK(validate_oracle(*inst.model).ok());
  }
}

TEST_CASE("oracle validation rejects each axiom violation with a witness") {
  // Normalization: H(empty) = 1.
  TableOracle norm({1}, {Rational(1), Rational(1)});
  OracleValidation v1 = validate_oracle(norm);
  CHECK(v1.failure == OracleValidation::Failure::Normalization);
  CHECK(v1.lhs == Rational(1));

  // Monotonicity: H({1,2}) < H({1}).
  TableOracle mono({1, 2},
                   {Rational(0), Rational(1), Rational(1, 2), Rational(1, 2)});
  OracleValidation v2 = validate_oracle(mono);
  CHECK(v2.failure == OracleValidation::Failure::Monotonicity);
  CHECK(v2.witness_x == std::set<NodeId>{1});
  CHECK(v2.witness_y == std::set<NodeId>{1, 2});
  CHECK(v2.lhs == Rational(1));
  CHECK(v2.rhs == Rational(1, 2));

  // Submodularity: H strictly supermodular on two elements.
  TableOracle super({1, 2}, {Rational(0), Rational(1), Rational(1),
                             Rational(3)});
  OracleValidation v3 = validate_oracle(super);
  CHECK(v3.failure == OracleValidation::Failure::Submodularity);
  CHECK(v3.witness_x == std::set<NodeId>{1});
  CHECK(v3.witness_y == std::set<NodeId>{2});

  CHECK(to_string(OracleValidation::Failure::Normalization) ==
        "normalization");
  CHECK(to_string(OracleValidation::Failure::Monotonicity) == "monotonicity");
  CHECK(to_string(OracleValidation::Failure::Submodularity) ==
        "submodularity");
}
