#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mif/aux_graph.hpp"
#include "mif/digraph.hpp"
#include "mif/sfm.hpp"
#include "mif/source_model.hpp"

namespace mif {

struct AugmentingPath {
  NodeId source = 0;
  std::vector<AuxArc> arcs;  // consecutive, ending at the sink

  bool operator==(const AugmentingPath& o) const = default;
};

struct IterationRecord {
  int index = 0;  // 1-based
  NodeId source = 0;
  AugmentingPath path;
  Rational beta;
  Flow flow_after;
  RateVector rates_after;

  bool operator==(const IterationRecord& o) const = default;
};

enum class Termination { ReachedTotalEntropy, NoAugmentingPath };

std::string to_string(Termination t);

struct SolveResult {
  Flow flow;
  RateVector rates;
  Rational value;
  Termination termination = Termination::ReachedTotalEntropy;
  std::vector<IterationRecord> trace;

  bool operator==(const SolveResult& o) const = default;
};

// Shortest path to the sink from the best unsaturated source. Ties resolve
// by path length, then smallest source id, then lexicographically smallest
// node sequence; parallel arcs between the same pair resolve Forward, then
// Backward, then Dependence. `unsaturated` pairs each candidate source with
// its saturation capacity, ascending by id.
std::optional<AugmentingPath> find_augmenting_path(
    const AuxiliaryGraph& aux,
    const std::vector<std::pair<NodeId, Rational>>& unsaturated, NodeId sink);

// Pushes beta along the path: +beta on Forward arcs, -beta on the underlying
// edge of Backward arcs; Dependence arcs carry no flow (the rate moves show
// up in the boundary). Requires beta <= capacity on every arc.
Flow augment(const Digraph& g, const Flow& f, const AugmentingPath& path,
             const Rational& beta);

// Repeatedly augments along the best path until the boundary reaches H(V)
// (ReachedTotalEntropy) or no unsaturated source can reach the sink
// (NoAugmentingPath). The start flow must be capacity feasible with boundary
// inside the entropy polyhedron.
SolveResult solve_mif(const Digraph& g, const EntropyOracle& o,
                      const Flow& start);
SolveResult solve_mif(const Digraph& g, const EntropyOracle& o);

struct IntegralityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integral variant: requires integer capacities and an integer-valued oracle
// (checked up front, IntegralityError otherwise), starts from zero, pushes
// one unit per iteration through the uncapacitated residual structure, and
// finishes in exactly H(V) iterations when the sink stays reachable.
SolveResult solve_imif(const Digraph& g, const EntropyOracle& o);

}  // namespace mif
