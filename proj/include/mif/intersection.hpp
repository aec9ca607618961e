#pragma once

#include <memory>
#include <set>
#include <vector>

#include "mif/digraph.hpp"
#include "mif/source_model.hpp"

namespace mif {

// Total capacity of edges leaving X: tails in X, heads outside (the sink is
// always outside since X holds sources only).
Rational cut_value(const Digraph& g, const std::set<NodeId>& x);

// Characteristic bound of X: the smallest cut among supersets of X,
// min{ cut_value(Y) : X subset of Y subset of V }. Monotone, submodular,
// zero on the empty set. Ground set capped at 20 nodes.
Rational characteristic(const Digraph& g, const std::set<NodeId>& x);

// x >= 0 componentwise and x(X) <= characteristic(X) for every X.
MembershipReport in_flow_polyhedron(const Digraph& g, const RateVector& x);

struct IntersectionBound {
  Rational value;
  std::set<NodeId> witness;  // first minimizing subset in ascending mask order

  bool operator==(const IntersectionBound& o) const = default;
};

// Largest total rate simultaneously inside the entropy polyhedron and the
// flow polyhedron: min over X of H(X) + characteristic(V \ X), with the
// minimizing X as certificate.
IntersectionBound max_independent_value(const Digraph& g,
                                        const EntropyOracle& o);

struct SinkChoice {
  NodeId candidate = 0;
  Rational value;

  bool operator==(const SinkChoice& o) const = default;
};

// Evaluates each candidate as the sink: the remaining nodes become sources
// and the candidate's own observations are dropped from the model (entropy is
// taken over the other nodes only). Returns choices sorted by value
// descending, ties by ascending node id.
std::vector<SinkChoice> sink_select(const Digraph& g,
                                    std::shared_ptr<const EntropyOracle> o,
                                    const std::vector<NodeId>& candidates);

}  // namespace mif
