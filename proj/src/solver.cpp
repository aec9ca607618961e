#include "mif/solver.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace mif {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::ReachedTotalEntropy:
      return "reached-total-entropy";
    case Termination::NoAugmentingPath:
      return "no-augmenting-path";
  }
  throw std::logic_error("unknown termination");
}
namespace {

void require_matching_ground(const Digraph& g, const EntropyOracle& o) {
  if (o.ground() != g.sources()) {
    throw std::invalid_argument(
        "oracle ground set must equal the digraph's source set");
  }
}

std::string set_name(const std::set<NodeId>& x) {
  std::string out = "{";
  for (NodeId v : x) {
    if (out.size() > 1) out += ",";
    out += std::to_string(v);
  }
  return out + "}";
}

// One iteration's capacity data: per-node saturation plus dependence info in
// the shape build_auxiliary takes. MIF prices dependence arcs with real
// exchange capacities; IMIF skips those minimizations and pushes single
// units, so a unit stand-in is enough.
CapacitySweep sweep_for(const EntropyOracle& o, const RateVector& x,
                        bool unit_exchange) {
  if (!unit_exchange) return capacity_sweep(o, x);
  CapacitySweep sweep;
  for (NodeId v : o.ground()) {
    SfmResult r = constrained_sfm(o, x, v, {});
    sweep.saturation[v] = r.min_value;
    if (!r.min_value.is_zero()) continue;
    NodeDependence dep;
    dep.members = r.minimal_minimizer;
    for (NodeId donor : dep.members) {
      if (donor != v) dep.exchange[donor] = Rational(1);
    }
    sweep.dependence[v] = std::move(dep);
  }
  return sweep;
}

SolveResult run(const Digraph& g, const EntropyOracle& o, const Flow& start,
                bool integral) {
  require_matching_ground(g, o);
  if (!check_capacity_feasible(g, start).empty()) {
    throw std::invalid_argument("start flow violates capacity bounds");
  }
  RateVector x0 = rate_vector(g, start);
  if (!polyhedron_member(o, x0).ok()) {
    throw std::invalid_argument(
        "start flow boundary lies outside the entropy polyhedron");
  }

  SubsetMask full =
      o.size() == 0 ? 0 : (SubsetMask(1) << o.size()) - 1;
  Rational total = o.entropy_mask(full);

  // The shortest-then-lexicographic path rule makes the iteration count
  // finite; the guard only turns a would-be bug into a loud failure.
  long long n = static_cast<long long>(g.sources().size());
  long long guard = 2 * n * n * n + 16;

  std::vector<IterationRecord> trace;
  Flow f = start;
  for (long long iter = 1;; ++iter) {
    RateVector x = rate_vector(g, f);
    Rational value = sum(x);
    if (value == total) {
      return {f, x, value, Termination::ReachedTotalEntropy, std::move(trace)};
    }
    if (iter > guard) {
      throw std::logic_error("augmentation loop exceeded its iteration guard");
    }

    CapacitySweep sweep = sweep_for(o, x, integral);
    std::vector<std::pair<NodeId, Rational>> unsaturated;
    for (NodeId v : g.sources()) {
      const Rational& cap = sweep.saturation.at(v);
      if (!cap.is_zero()) unsaturated.emplace_back(v, cap);
    }
    AuxiliaryGraph aux = build_auxiliary(g, f, sweep.dependence);
    std::optional<AugmentingPath> path =
        find_augmenting_path(aux, unsaturated, g.sink());
    if (!path) {
      return {f, x, value, Termination::NoAugmentingPath, std::move(trace)};
    }

    Rational beta;
    if (integral) {
      beta = Rational(1);
    } else {
      beta = sweep.saturation.at(path->source);
      for (const AuxArc& arc : path->arcs) {
        if (arc.capacity < beta) beta = arc.capacity;
      }
    }
    f = augment(g, f, *path, beta);
    IterationRecord record{static_cast<int>(trace.size() + 1),
                           path->source,
                           std::move(*path),
                           beta,
                           f,
                           rate_vector(g, f)};
    trace.push_back(std::move(record));
  }
}

}  // namespace

std::optional<AugmentingPath> find_augmenting_path(
    const AuxiliaryGraph& aux,
    const std::vector<std::pair<NodeId, Rational>>& unsaturated, NodeId sink) {
  std::map<NodeId, std::vector<const AuxArc*>> out;
  std::map<NodeId, std::vector<const AuxArc*>> in;
  for (const AuxArc& arc : aux.arcs) {
    out[arc.tail].push_back(&arc);
    in[arc.head].push_back(&arc);
  }

  // Hop counts to the sink, over reversed arcs.
  std::map<NodeId, int> dist;
  dist[sink] = 0;
  std::deque<NodeId> queue{sink};
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    auto it = in.find(v);
    if (it == in.end()) continue;
    for (const AuxArc* arc : it->second) {
      if (dist.emplace(arc->tail, dist[v] + 1).second) {
        queue.push_back(arc->tail);
      }
    }
  }

  const std::pair<NodeId, Rational>* best = nullptr;
  int best_dist = 0;
  for (const auto& entry : unsaturated) {
    auto it = dist.find(entry.first);
    if (it == dist.end()) continue;
    if (!best || it->second < best_dist ||
        (it->second == best_dist && entry.first < best->first)) {
      best = &entry;
      best_dist = it->second;
    }
  }
  if (!best) return std::nullopt;

  // Walking to the smallest-id neighbor that stays on a shortest path yields
  // the lexicographically smallest node sequence. out[u] is already ordered
  // by (head, kind), so the first usable arc is the right one.
  AugmentingPath path;
  path.source = best->first;
  NodeId u = best->first;
  while (u != sink) {
    int d = dist.at(u);
    const AuxArc* step = nullptr;
    for (const AuxArc* arc : out.at(u)) {
      auto it = dist.find(arc->head);
      if (it != dist.end() && it->second == d - 1) {
        step = arc;
        break;
      }
    }
    if (!step) throw std::logic_error("shortest-path walk lost the sink");
    path.arcs.push_back(*step);
    u = step->head;
  }
  return path;
}

Flow augment(const Digraph& g, const Flow& f, const AugmentingPath& path,
             const Rational& beta) {
  if (!(beta > Rational(0))) {
    throw std::invalid_argument("augmentation amount must be positive");
  }
  if (path.arcs.empty()) {
    throw std::invalid_argument("augmenting path has no arcs");
  }
  if (path.arcs.front().tail != path.source) {
    throw std::invalid_argument("augmenting path does not start at its source");
  }
  for (std::size_t i = 0; i + 1 < path.arcs.size(); ++i) {
    if (path.arcs[i].head != path.arcs[i + 1].tail) {
      throw std::invalid_argument("augmenting path arcs are not consecutive");
    }
  }

  Flow out = f;
  for (const AuxArc& arc : path.arcs) {
    if (beta > arc.capacity) {
      throw std::invalid_argument(
          "augmentation amount exceeds an arc capacity");
    }
    switch (arc.kind) {
      case ArcKind::Forward: {
        Rational next = out.at(arc.tail, arc.head) + beta;
        auto idx = g.edge_index(arc.tail, arc.head);
        if (!idx || next > g.edges()[*idx].capacity) {
          throw std::invalid_argument("forward push exceeds edge capacity");
        }
        out.set(arc.tail, arc.head, next);
        break;
      }
      case ArcKind::Backward: {
        Rational next = out.at(arc.head, arc.tail) - beta;
        if (next.is_negative()) {
          throw std::invalid_argument("backward push drives an edge negative");
        }
        out.set(arc.head, arc.tail, next);
        break;
      }
      case ArcKind::Dependence:
        break;  // rate exchange shows up in the boundary, not in any edge
    }
  }
  return out;
}

SolveResult solve_mif(const Digraph& g, const EntropyOracle& o,
                      const Flow& start) {
  return run(g, o, start, false);
}

SolveResult solve_mif(const Digraph& g, const EntropyOracle& o) {
  return run(g, o, Flow::zero(g), false);
}

SolveResult solve_imif(const Digraph& g, const EntropyOracle& o) {
  require_matching_ground(g, o);
  for (const Edge& e : g.edges()) {
    if (!e.capacity.is_integer()) {
      throw IntegralityError("capacity of (" + std::to_string(e.tail) + "," +
                             std::to_string(e.head) + ") is not an integer: " +
                             e.capacity.str());
    }
  }
  if (o.size() > 20) {
    throw std::invalid_argument(
        "ground set too large for exhaustive subset checks (limit 20)");
  }
  SubsetMask full = o.size() == 0 ? 0 : (SubsetMask(1) << o.size()) - 1;
  for (SubsetMask mask = 0; mask <= full; ++mask) {
    Rational h = o.entropy_mask(mask);
    if (!h.is_integer()) {
      throw IntegralityError("oracle value on " + set_name(o.to_set(mask)) +
                             " is not an integer: " + h.str());
    }
    if (mask == full) break;
  }
  return run(g, o, Flow::zero(g), true);
}

}  // namespace mif
