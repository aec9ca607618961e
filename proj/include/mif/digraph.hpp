#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "mif/rational.hpp"

namespace mif {

using NodeId = int;
using EdgeKey = std::pair<NodeId, NodeId>;  // (tail, head)

struct Edge {
  NodeId tail = 0;
  NodeId head = 0;
  Rational capacity;

  bool operator==(const Edge& o) const = default;
};

// Directed network over source nodes V plus one sink. Construction validates:
// nonnegative capacities, endpoints drawn from V + sink, no self loops, at
// most one edge per ordered pair, and a connected underlying undirected graph.
// Edges incident to the sink are allowed in either direction.
class Digraph {
 public:
  Digraph(std::vector<NodeId> sources, NodeId sink, std::vector<Edge> edges);

  const std::vector<NodeId>& sources() const { return sources_; }  // sorted
  NodeId sink() const { return sink_; }
  const std::vector<Edge>& edges() const { return edges_; }  // by (tail, head)

  bool is_source(NodeId v) const;
  bool has_node(NodeId v) const { return is_source(v) || v == sink_; }
  std::optional<std::size_t> edge_index(NodeId tail, NodeId head) const;
  // Position of a source in sources(); throws for non-sources.
  std::size_t source_index(NodeId v) const;

  bool operator==(const Digraph& o) const = default;

 private:
  std::vector<NodeId> sources_;
  NodeId sink_;
  std::vector<Edge> edges_;
};

// Edge values keyed by (tail, head), defined on exactly the edge set of the
// digraph it was made for. Values are not sign- or capacity-checked here;
// check_capacity_feasible reports violations as data.
class Flow {
 public:
  static Flow zero(const Digraph& g);
  Flow(const Digraph& g, const std::map<EdgeKey, Rational>& values);

  const Rational& at(NodeId tail, NodeId head) const;
  void set(NodeId tail, NodeId head, const Rational& value);
  const std::map<EdgeKey, Rational>& values() const { return values_; }
  bool matches(const Digraph& g) const;

  bool operator==(const Flow& o) const = default;

 private:
  Flow() = default;
  std::map<EdgeKey, Rational> values_;
};

// Per-source rates, one entry for every source of the digraph.
using RateVector = std::map<NodeId, Rational>;

Rational sum(const RateVector& rates);

// Net outflow of X: flow leaving X minus flow entering X, X a set of sources.
Rational boundary(const Digraph& g, const Flow& f, const std::set<NodeId>& x);

// Boundary of every singleton source set.
RateVector rate_vector(const Digraph& g, const Flow& f);

struct CapacityViolation {
  NodeId tail = 0;
  NodeId head = 0;
  Rational flow;
  Rational bound;  // violated bound: capacity, or 0 for a negative value

  bool operator==(const CapacityViolation& o) const = default;
};

// Empty result means 0 <= f(e) <= c(e) on every edge.
std::vector<CapacityViolation> check_capacity_feasible(const Digraph& g,
                                                       const Flow& f);

}  // namespace mif
