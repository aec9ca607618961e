#include "doctest.h"

#include <map>
#include <memory>
#include <random>
#include <stdexcept>

#include "mif/distsim.hpp"
#include "test_support.hpp"

using namespace mif;

namespace {

Digraph example_graph() {
  return Digraph({1, 2, 3, 4}, 5,
                 {{1, 2, Rational(1)},
                  {1, 3, Rational(2)},
                  {1, 4, Rational(3)},
                  {2, 5, Rational(3, 5)},
                  {3, 5, Rational(2)},
                  {4, 2, Rational(1)},
                  {5, 4, Rational(1)}});
}

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

void check_log_consistency(const DistributedRun& run) {
  CHECK(run.stats.rounds == (long long)run.round_log.size());
  std::map<MessageKind, long long> counted;
  for (const auto& round : run.round_log) {
    for (const DeliveryRecord& rec : round) {
      ++counted[rec.kind];
      CHECK(rec.from != rec.to);
    }
  }
  for (const auto& [kind, total] : run.stats.messages) {
    long long seen = counted.count(kind) ? counted.at(kind) : 0;
    CHECK(seen == total);
  }
}

}  // namespace

TEST_CASE("message kind names") {
  CHECK(to_string(MessageKind::CapacityReport) == "capacity-report");
  CHECK(to_string(MessageKind::PathProbe) == "path-probe");
  CHECK(to_string(MessageKind::PathReport) == "path-report");
  CHECK(to_string(MessageKind::AugmentCommit) == "augment-commit");
}

TEST_CASE("distributed run matches the centralized solver on the example") {
  Digraph g = example_graph();
  auto m = example_model();

  DistributedRun run = run_distributed(g, *m);
  SolveResult central = solve_mif(g, *m);

  CHECK(run.result == central);
  CHECK(run.result.value == Rational(2));
  CHECK(run.result.termination == Termination::ReachedTotalEntropy);
  REQUIRE(run.result.trace.size() == 3);
  CHECK(run.result.trace[2].source == 4);

  CHECK(run.stats.rounds > 0);
  for (MessageKind kind :
       {MessageKind::CapacityReport, MessageKind::PathProbe,
        MessageKind::PathReport, MessageKind::AugmentCommit}) {
    REQUIRE(run.stats.messages.count(kind) == 1);
    CHECK(run.stats.messages.at(kind) > 0);
  }
  check_log_consistency(run);
}

TEST_CASE("distributed run agrees when no augmenting path remains") {
  Digraph g({1, 2, 3, 4}, 5,
            {{1, 2, Rational(1)},
             {1, 3, Rational(2)},
             {1, 4, Rational(3)},
             {2, 5, Rational(3, 5)},
             {3, 5, Rational(1)},
             {4, 2, Rational(1)},
             {5, 4, Rational(1)}});
  auto m = example_model();
  DistributedRun run = run_distributed(g, *m);
  SolveResult central = solve_mif(g, *m);
  CHECK(run.result == central);
  CHECK(run.result.termination == Termination::NoAugmentingPath);
  CHECK(run.result.value == Rational(8, 5));
  check_log_consistency(run);
}

TEST_CASE("repeated distributed runs are bitwise deterministic") {
  Digraph g = example_graph();
  auto m = example_model();
  DistributedRun a = run_distributed(g, *m);
  DistributedRun b = run_distributed(g, *m);
  CHECK(a.result == b.result);
  CHECK(a.stats == b.stats);
  CHECK(a.round_log.size() == b.round_log.size());
  for (std::size_t i = 0; i < a.round_log.size(); ++i) {
    CHECK(a.round_log[i] == b.round_log[i]);
  }
}

TEST_CASE("distributed runs match the solver on random instances") {
  std::mt19937 rng(5001);
  for (int trial = 0; trial < 25; ++trial) {
    auto inst = gen::random_instance(rng, 5, 5);
    SolveResult central = solve_mif(inst.graph, *inst.model);
    DistributedRun run = run_distributed(inst.graph, *inst.model);
    CHECK(run.result == central);
    check_log_consistency(run);

    DistributedRun again = run_distributed(inst.graph, *inst.model);
    CHECK(again.stats == run.stats);
    CHECK(again.result == run.result);
  }
}

TEST_CASE("distributed run works with invariant checks off") {
  SimConfig config;
  config.check_invariants = false;
  DistributedRun run = run_distributed(example_graph(), *example_model(),
                                       config);
  CHECK(run.result.value == Rational(2));
}

TEST_CASE("distributed run validates the oracle ground set") {
  Digraph g = example_graph();
  TableOracle o({1, 2}, {Rational(0), Rational(1), Rational(1), Rational(2)});
  CHECK_THROWS_AS(run_distributed(g, o), std::invalid_argument);
}

TEST_CASE("single source single hop") {
  Digraph g({1}, 2, {{1, 2, Rational(1)}});
  auto m = std::make_shared<BitSharingSource>(
      std::vector<BitSharingSource::Bit>{{"a", Rational(1)}},
      std::map<NodeId, std::set<std::string>>{{1, {"a"}}});
  DistributedRun run = run_distributed(g, *m);
  SolveResult central = solve_mif(g, *m);
  CHECK(run.result == central);
  CHECK(run.result.value == Rational(1));
  CHECK(run.result.termination == Termination::ReachedTotalEntropy);
  check_log_consistency(run);
}
