#include "mif/aux_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace mif {

std::string to_string(ArcKind kind) {
  switch (kind) {
    case ArcKind::Forward:
      return "forward";
    case ArcKind::Backward:
      return "backward";
    case ArcKind::Dependence:
      return "dependence";
  }
  throw std::logic_error("unknown arc kind");
}

std::vector<AuxArc> AuxiliaryGraph::out_arcs(NodeId tail) const {
  std::vector<AuxArc> out;
  for (const AuxArc& a : arcs) {
    if (a.tail == tail) out.push_back(a);
  }
  return out;
}

AuxiliaryGraph build_auxiliary(const Digraph& g, const Flow& f,
                               const DependenceInfo& dep_info) {
  if (!f.matches(g)) {
    throw std::invalid_argument("flow does not match the digraph's edge set");
  }
  AuxiliaryGraph aux;
  for (const Edge& e : g.edges()) {
    const Rational& v = f.at(e.tail, e.head);
    if (v < e.capacity) {
      aux.arcs.push_back({e.tail, e.head, ArcKind::Forward, e.capacity - v});
    }
    if (v > Rational(0)) {
      aux.arcs.push_back({e.head, e.tail, ArcKind::Backward, v});
    }
  }
  for (const auto& [node, dep] : dep_info) {
    if (!g.is_source(node)) {
      throw std::invalid_argument("dependence info for non-source node " +
                                  std::to_string(node));
    }
    for (NodeId donor : dep.members) {
      if (donor == node) continue;
      auto it = dep.exchange.find(donor);
      if (it == dep.exchange.end()) {
        throw std::invalid_argument("dependence member without exchange value");
      }
      if (it->second.is_negative()) {
        throw std::invalid_argument("negative exchange capacity");
      }
      if (it->second.is_zero()) continue;
      aux.arcs.push_back({donor, node, ArcKind::Dependence, it->second});
    }
  }
  std::sort(aux.arcs.begin(), aux.arcs.end(),
            [](const AuxArc& a, const AuxArc& b) {
              return std::tuple(a.tail, a.head, static_cast<int>(a.kind)) <
                     std::tuple(b.tail, b.head, static_cast<int>(b.kind));
            });
  return aux;
}

}  // namespace mif
