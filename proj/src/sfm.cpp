#include "mif/sfm.hpp"

#include <stdexcept>

namespace mif {
namespace {

constexpr std::size_t kMaxGround = 20;

struct MaskProblem {
  std::vector<Rational> rates;  // aligned to ground order
  SubsetMask full = 0;
};

MaskProblem setup(const EntropyOracle& o, const RateVector& x) {
  if (o.size() > kMaxGround) {
    throw std::invalid_argument(
        "ground set too large for exhaustive minimization (limit 20)");
  }
  if (x.size() != o.size()) {
    throw std::invalid_argument("rate vector does not match the ground set");
  }
  MaskProblem p;
  p.rates.reserve(o.size());
  for (NodeId v : o.ground()) {
    auto it = x.find(v);
    if (it == x.end()) {
      throw std::invalid_argument("rate vector missing node " +
                                  std::to_string(v));
    }
    p.rates.push_back(it->second);
  }
  p.full = o.size() == 0 ? 0 : (SubsetMask(1) << o.size()) - 1;
  return p;
}

Rational slack(const EntropyOracle& o, const MaskProblem& p, SubsetMask mask) {
  Rational value = o.entropy_mask(mask);
  for (std::size_t i = 0; i < p.rates.size(); ++i) {
    if (mask & (SubsetMask(1) << i)) value -= p.rates[i];
  }
  return value;
}

// Enumerates subsets containing `include_mask` and avoiding `exclude_mask`,
// tracking the minimum slack and the intersection of all its minimizers.
SfmResult minimize(const EntropyOracle& o, const MaskProblem& p,
                   SubsetMask include_mask, SubsetMask exclude_mask) {
  SubsetMask free = p.full & ~include_mask & ~exclude_mask;
  std::optional<Rational> best;
  SubsetMask meet = 0;
  // Standard submask walk: visits every subset of `free` exactly once.
  SubsetMask sub = free;
  while (true) {
    SubsetMask mask = include_mask | sub;
    Rational value = slack(o, p, mask);
    if (!best || value < *best) {
      best = value;
      meet = mask;
    } else if (value == *best) {
      meet &= mask;
    }
    if (sub == 0) break;
    sub = (sub - 1) & free;
  }
  return {*best, o.to_set(meet)};
}

}  // namespace

SfmResult constrained_sfm(const EntropyOracle& o, const RateVector& x,
                          NodeId include, const std::set<NodeId>& exclude) {
  MaskProblem p = setup(o, x);
  SubsetMask include_mask = o.to_mask({include});
  SubsetMask exclude_mask = o.to_mask(exclude);
  if (include_mask & exclude_mask) {
    throw std::invalid_argument("include node is excluded");
  }
  return minimize(o, p, include_mask, exclude_mask);
}

Rational saturation_capacity(const EntropyOracle& o, const RateVector& x,
                             NodeId i) {
  SfmResult r = constrained_sfm(o, x, i, {});
  if (r.min_value.is_negative()) {
    throw std::invalid_argument(
        "rate vector lies outside the entropy polyhedron");
  }
  return r.min_value;
}

Rational exchange_capacity(const EntropyOracle& o, const RateVector& x,
                           NodeId i, NodeId j) {
  if (i == j) throw std::invalid_argument("exchange capacity needs i != j");
  SfmResult r = constrained_sfm(o, x, i, {j});
  if (r.min_value.is_negative()) {
    throw std::invalid_argument(
        "rate vector lies outside the entropy polyhedron");
  }
  const Rational& limit = x.at(j);  // donor cannot go below zero
  return r.min_value < limit ? r.min_value : limit;
}

std::set<NodeId> dependence_set(const EntropyOracle& o, const RateVector& x,
                                NodeId i) {
  NodeCapacity c = node_capacity(o, x, i);
  return c.dependence ? c.dependence->members : std::set<NodeId>{};
}

NodeCapacity node_capacity(const EntropyOracle& o, const RateVector& x,
                           NodeId i) {
  SfmResult r = constrained_sfm(o, x, i, {});
  if (r.min_value.is_negative()) {
    throw std::invalid_argument(
        "rate vector lies outside the entropy polyhedron");
  }
  NodeCapacity out{r.min_value, std::nullopt};
  if (!r.min_value.is_zero()) return out;
  NodeDependence dep;
  dep.members = r.minimal_minimizer;
  for (NodeId donor : dep.members) {
    if (donor == i) continue;
    dep.exchange[donor] = exchange_capacity(o, x, i, donor);
  }
  out.dependence = std::move(dep);
  return out;
}

CapacitySweep capacity_sweep(const EntropyOracle& o, const RateVector& x) {
  CapacitySweep sweep;
  for (NodeId v : o.ground()) {
    NodeCapacity c = node_capacity(o, x, v);
    sweep.saturation[v] = c.saturation;
    if (c.dependence) sweep.dependence[v] = *c.dependence;
  }
  return sweep;
}

}  // namespace mif
