#pragma once

#include <map>
#include <optional>
#include <set>

#include "mif/aux_graph.hpp"
#include "mif/digraph.hpp"
#include "mif/source_model.hpp"

namespace mif {

struct SfmResult {
  Rational min_value;
  // Intersection of all minimizers. Minimizers of a submodular function are
  // closed under union and intersection, so this is itself a minimizer.
  std::set<NodeId> minimal_minimizer;

  bool operator==(const SfmResult& o) const = default;
};

// Minimize H(X) - x(X) over subsets X of the ground set with include in X
// and X disjoint from exclude, by exhaustive enumeration (ground set capped
// at 20 nodes). The constraint family is a lattice, so the minimal minimizer
// is well defined.
SfmResult constrained_sfm(const EntropyOracle& o, const RateVector& x,
                          NodeId include, const std::set<NodeId>& exclude);

// Largest a such that x + a*1_i stays in the polyhedron:
// min{ H(X) - x(X) : i in X }. Requires x in the polyhedron (a negative
// minimum is rejected); result is >= 0.
Rational saturation_capacity(const EntropyOracle& o, const RateVector& x,
                             NodeId i);

// Largest a such that x + a*(1_i - 1_j) stays in the polyhedron and keeps
// x_j >= 0: min{ H(X) - x(X) : i in X, j not in X } clamped at x_j.
Rational exchange_capacity(const EntropyOracle& o, const RateVector& x,
                           NodeId i, NodeId j);

// Empty when i is unsaturated (saturation capacity > 0); otherwise the
// minimal minimizer of the saturation problem, which always contains i and
// equals { j : exchange capacity from j to i before clamping > 0 } plus i.
std::set<NodeId> dependence_set(const EntropyOracle& o, const RateVector& x,
                                NodeId i);

// Per-node saturation capacity and, for saturated nodes only, the dependence
// set with clamped exchange capacities, in the shape build_auxiliary expects.
struct CapacitySweep {
  std::map<NodeId, Rational> saturation;
  DependenceInfo dependence;
};

struct NodeCapacity {
  Rational saturation;
  std::optional<NodeDependence> dependence;  // set iff saturation == 0
};

NodeCapacity node_capacity(const EntropyOracle& o, const RateVector& x,
                           NodeId i);

CapacitySweep capacity_sweep(const EntropyOracle& o, const RateVector& x);

}  // namespace mif
