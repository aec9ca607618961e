#include "mif/intersection.hpp"

#include <algorithm>
#include <stdexcept>

namespace mif {
namespace {

constexpr std::size_t kMaxGround = 20;

void require_enumerable(const Digraph& g) {
  if (g.sources().size() > kMaxGround) {
    throw std::invalid_argument(
        "source set too large for exhaustive subset checks (limit 20)");
  }
}

SubsetMask source_mask(const Digraph& g, const std::set<NodeId>& x) {
  SubsetMask mask = 0;
  for (NodeId v : x) {
    mask |= SubsetMask(1) << g.source_index(v);  // throws for non-sources
  }
  return mask;
}

std::set<NodeId> mask_to_set(const Digraph& g, SubsetMask mask) {
  std::set<NodeId> out;
  for (std::size_t i = 0; i < g.sources().size(); ++i) {
    if (mask & (SubsetMask(1) << i)) out.insert(g.sources()[i]);
  }
  return out;
}

// Cut values for all subsets at once, indexed by source mask.
std::vector<Rational> all_cuts(const Digraph& g) {
  require_enumerable(g);
  std::size_t n = g.sources().size();
  std::vector<Rational> cuts(std::size_t(1) << n);
  for (const Edge& e : g.edges()) {
    if (!g.is_source(e.tail)) continue;
    SubsetMask tail_bit = SubsetMask(1) << g.source_index(e.tail);
    SubsetMask head_bit =
        g.is_source(e.head) ? SubsetMask(1) << g.source_index(e.head) : 0;
    for (SubsetMask mask = 0; mask < cuts.size(); ++mask) {
      if ((mask & tail_bit) && !(mask & head_bit)) cuts[mask] += e.capacity;
    }
  }
  return cuts;
}

// min{ cut(Y) : X subset of Y } for all X, by sweeping supersets bit by bit.
std::vector<Rational> superset_minima(std::vector<Rational> cuts,
                                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    SubsetMask bit = SubsetMask(1) << i;
    for (SubsetMask mask = 0; mask < cuts.size(); ++mask) {
      if (!(mask & bit) && cuts[mask | bit] < cuts[mask]) {
        cuts[mask] = cuts[mask | bit];
      }
    }
  }
  return cuts;
}

}  // namespace

Rational cut_value(const Digraph& g, const std::set<NodeId>& x) {
  for (NodeId v : x) g.source_index(v);  // validate membership
  Rational total;
  for (const Edge& e : g.edges()) {
    if (x.count(e.tail) && !x.count(e.head)) total += e.capacity;
  }
  return total;
}

Rational characteristic(const Digraph& g, const std::set<NodeId>& x) {
  require_enumerable(g);
  SubsetMask base = source_mask(g, x);
  std::vector<Rational> cuts = all_cuts(g);
  SubsetMask free = SubsetMask(cuts.size() - 1) & ~base;
  Rational best = cuts[base | free];
  SubsetMask sub = free;
  while (true) {
    if (cuts[base | sub] < best) best = cuts[base | sub];
    if (sub == 0) break;
    sub = (sub - 1) & free;
  }
  return best;
}

MembershipReport in_flow_polyhedron(const Digraph& g, const RateVector& x) {
  require_enumerable(g);
  if (x.size() != g.sources().size()) {
    throw std::invalid_argument("rate vector does not match the source set");
  }
  std::vector<Rational> vals;
  vals.reserve(x.size());
  for (NodeId v : g.sources()) {
    auto it = x.find(v);
    if (it == x.end()) {
      throw std::invalid_argument("rate vector missing node " +
                                  std::to_string(v));
    }
    vals.push_back(it->second);
  }
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i].is_negative()) {
      return {MembershipReport::Kind::Negative,
              {g.sources()[i]},
              vals[i],
              Rational(0)};
    }
  }
  std::vector<Rational> bound =
      superset_minima(all_cuts(g), g.sources().size());
  for (SubsetMask mask = 1; mask < bound.size(); ++mask) {
    Rational lhs;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (mask & (SubsetMask(1) << i)) lhs += vals[i];
    }
    if (lhs > bound[mask]) {
      return {MembershipReport::Kind::SubsetBound, mask_to_set(g, mask), lhs,
              bound[mask]};
    }
  }
  return {};
}

IntersectionBound max_independent_value(const Digraph& g,
                                        const EntropyOracle& o) {
  require_enumerable(g);
  if (o.ground() != g.sources()) {
    throw std::invalid_argument(
        "oracle ground set must equal the digraph's source set");
  }
  std::vector<Rational> bound =
      superset_minima(all_cuts(g), g.sources().size());
  SubsetMask full = SubsetMask(bound.size() - 1);
  IntersectionBound best{o.entropy_mask(0) + bound[full], mask_to_set(g, 0)};
  for (SubsetMask mask = 0; mask <= full; ++mask) {
    Rational value = o.entropy_mask(mask) + bound[full & ~mask];
    if (mask == 0 || value < best.value) {
      best = {value, mask_to_set(g, mask)};
    }
    if (mask == full) break;
  }
  return best;
}

std::vector<SinkChoice> sink_select(const Digraph& g,
                                    std::shared_ptr<const EntropyOracle> o,
                                    const std::vector<NodeId>& candidates) {
  if (!o) throw std::invalid_argument("sink selection without an oracle");
  std::vector<SinkChoice> out;
  for (NodeId candidate : candidates) {
    if (!g.has_node(candidate)) {
      throw std::invalid_argument("sink candidate " +
                                  std::to_string(candidate) +
                                  " is not a node of the digraph");
    }
    std::vector<NodeId> rest;
    for (NodeId v : g.sources()) {
      if (v != candidate) rest.push_back(v);
    }
    if (g.sink() != candidate) rest.push_back(g.sink());
    Digraph regraph(rest, candidate, g.edges());
    ProjectedOracle projected(o, rest);
    out.push_back({candidate, max_independent_value(regraph, projected).value});
  }
  std::sort(out.begin(), out.end(), [](const SinkChoice& a, const SinkChoice& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.candidate < b.candidate;
  });
  return out;
}

}  // namespace mif
