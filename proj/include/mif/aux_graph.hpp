#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mif/digraph.hpp"

namespace mif {

enum class ArcKind { Forward, Backward, Dependence };

std::string to_string(ArcKind kind);

struct AuxArc {
  NodeId tail = 0;
  NodeId head = 0;
  ArcKind kind = ArcKind::Forward;
  Rational capacity;

  bool operator==(const AuxArc& o) const = default;
};

struct AuxiliaryGraph {
  // Sorted by (tail, head, kind); every capacity is > 0.
  std::vector<AuxArc> arcs;

  std::vector<AuxArc> out_arcs(NodeId tail) const;
  bool operator==(const AuxiliaryGraph& o) const = default;
};

// Dependence data for one saturated node j: the members of its dependence set
// and, for each member i != j, the rate that can move from i to j.
struct NodeDependence {
  std::set<NodeId> members;
  std::map<NodeId, Rational> exchange;  // donor -> transferable amount

  bool operator==(const NodeDependence& o) const = default;
};

// Keyed by saturated node.
using DependenceInfo = std::map<NodeId, NodeDependence>;

// Arcs of the residual structure for flow f:
//   Forward    (i,j) iff (i,j) in E and f < c, capacity c - f
//   Backward   (j,i) iff (i,j) in E and f > 0, capacity f
//   Dependence (i,j) iff i is a member of dep_info[j] other than j itself,
//              capacity dep_info[j].exchange[i]
// Arcs whose capacity would be zero are omitted.
AuxiliaryGraph build_auxiliary(const Digraph& g, const Flow& f,
                               const DependenceInfo& dep_info);

}  // namespace mif
