#include "mif/source_model.hpp"

#include <algorithm>
#include <stdexcept>

namespace mif {
namespace {

constexpr std::size_t kMaxGround = 20;

// Rates aligned to the oracle's ground order; keys must match exactly.
std::vector<Rational> aligned_rates(const EntropyOracle& o,
                                    const RateVector& x) {
  if (x.size() != o.size()) {
    throw std::invalid_argument("rate vector does not match the ground set");
  }
  std::vector<Rational> out;
  out.reserve(o.size());
  for (NodeId v : o.ground()) {
    auto it = x.find(v);
    if (it == x.end()) {
      throw std::invalid_argument("rate vector missing node " +
                                  std::to_string(v));
    }
    out.push_back(it->second);
  }
  return out;
}

Rational mask_sum(const std::vector<Rational>& vals, SubsetMask mask) {
  Rational total;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (mask & (SubsetMask(1) << i)) total += vals[i];
  }
  return total;
}

void require_enumerable(const EntropyOracle& o) {
  if (o.size() > kMaxGround) {
    throw std::invalid_argument(
        "ground set too large for exhaustive subset checks (limit 20)");
  }
}

}  // namespace

EntropyOracle::EntropyOracle(std::vector<NodeId> ground)
    : ground_(std::move(ground)) {
  std::sort(ground_.begin(), ground_.end());
  if (std::adjacent_find(ground_.begin(), ground_.end()) != ground_.end()) {
    throw std::invalid_argument("duplicate node in oracle ground set");
  }
  if (ground_.size() > 31) {
    throw std::invalid_argument("oracle ground set larger than 31 nodes");
  }
}

Rational EntropyOracle::entropy(const std::set<NodeId>& x) const {
  return eval_mask(to_mask(x));
}

SubsetMask EntropyOracle::to_mask(const std::set<NodeId>& x) const {
  SubsetMask mask = 0;
  for (NodeId v : x) {
    auto it = std::lower_bound(ground_.begin(), ground_.end(), v);
    if (it == ground_.end() || *it != v) {
      throw std::invalid_argument("node " + std::to_string(v) +
                                  " not in oracle ground set");
    }
    mask |= SubsetMask(1) << (it - ground_.begin());
  }
  return mask;
}

std::set<NodeId> EntropyOracle::to_set(SubsetMask mask) const {
  std::set<NodeId> out;
  for (std::size_t i = 0; i < ground_.size(); ++i) {
    if (mask & (SubsetMask(1) << i)) out.insert(ground_[i]);
  }
  return out;
}

BitSharingSource::BitSharingSource(
    std::vector<Bit> bits, std::map<NodeId, std::set<std::string>> observes)
    : EntropyOracle([&] {
        std::vector<NodeId> g;
        for (const auto& [node, seen] : observes) g.push_back(node);
        return g;
      }()),
      bits_(std::move(bits)),
      observes_(std::move(observes)) {
  std::map<std::string, std::size_t> bit_index;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (!bit_index.emplace(bits_[i].id, i).second) {
      throw std::invalid_argument("duplicate bit id '" + bits_[i].id + "'");
    }
    if (!(bits_[i].entropy > Rational(0))) {
      throw std::invalid_argument("bit '" + bits_[i].id +
                                  "' must have positive entropy");
    }
  }
  observers_.assign(bits_.size(), 0);
  for (const auto& [node, seen] : observes_) {
    SubsetMask node_mask = to_mask({node});
    for (const std::string& id : seen) {
      auto it = bit_index.find(id);
      if (it == bit_index.end()) {
        throw std::invalid_argument("node " + std::to_string(node) +
                                    " observes undeclared bit '" + id + "'");
      }
      observers_[it->second] |= node_mask;
    }
  }
  for (std::size_t b = 0; b < bits_.size(); ++b) {
    if (observers_[b] == 0) {
      throw std::invalid_argument("bit '" + bits_[b].id +
                                  "' is observed by no node");
    }
  }
}

Rational BitSharingSource::eval_mask(SubsetMask mask) const {
  Rational total;
  for (std::size_t b = 0; b < bits_.size(); ++b) {
    if (observers_[b] & mask) total += bits_[b].entropy;
  }
  return total;
}

TableOracle::TableOracle(std::vector<NodeId> ground,
                         std::vector<Rational> by_mask)
    : EntropyOracle(std::move(ground)), by_mask_(std::move(by_mask)) {
  if (size() > kMaxGround) {
    throw std::invalid_argument("table oracle limited to 20 nodes");
  }
  if (by_mask_.size() != (std::size_t(1) << size())) {
    throw std::invalid_argument("table oracle needs one value per subset");
  }
}

Rational TableOracle::eval_mask(SubsetMask mask) const {
  return by_mask_.at(mask);
}

ProjectedOracle::ProjectedOracle(std::shared_ptr<const EntropyOracle> base,
                                 std::vector<NodeId> ground)
    : EntropyOracle(std::move(ground)), base_(std::move(base)) {
  if (!base_) throw std::invalid_argument("projected oracle without a base");
  for (NodeId v : this->ground()) {
    const auto& bg = base_->ground();
    auto it = std::lower_bound(bg.begin(), bg.end(), v);
    if (it != bg.end() && *it == v) {
      member_bits_.push_back(SubsetMask(1) << (it - bg.begin()));
    } else {
      member_bits_.push_back(0);
    }
  }
}

Rational ProjectedOracle::eval_mask(SubsetMask mask) const {
  SubsetMask base_mask = 0;
  for (std::size_t i = 0; i < member_bits_.size(); ++i) {
    if (mask & (SubsetMask(1) << i)) base_mask |= member_bits_[i];
  }
  return base_->entropy_mask(base_mask);
}

Rational mutual_information(const EntropyOracle& o, const std::set<NodeId>& x,
                            const std::set<NodeId>& y) {
  SubsetMask mx = o.to_mask(x);
  SubsetMask my = o.to_mask(y);
  return o.entropy_mask(mx) + o.entropy_mask(my) - o.entropy_mask(mx | my);
}

MembershipReport polyhedron_member(const EntropyOracle& o,
                                   const RateVector& x) {
  require_enumerable(o);
  std::vector<Rational> vals = aligned_rates(o, x);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i].is_negative()) {
      return {MembershipReport::Kind::Negative,
              {o.ground()[i]},
              vals[i],
              Rational(0)};
    }
  }
  SubsetMask full = (vals.empty() ? 0 : (SubsetMask(1) << vals.size()) - 1);
  for (SubsetMask mask = 1; mask <= full && full != 0; ++mask) {
    Rational lhs = mask_sum(vals, mask);
    Rational rhs = o.entropy_mask(mask);
    if (lhs > rhs) {
      return {MembershipReport::Kind::SubsetBound, o.to_set(mask), lhs, rhs};
    }
  }
  return {};
}

SlepianWolfReport slepian_wolf_feasible(const EntropyOracle& o,
                                        const RateVector& x) {
  require_enumerable(o);
  std::vector<Rational> vals = aligned_rates(o, x);
  SubsetMask full = (vals.empty() ? 0 : (SubsetMask(1) << vals.size()) - 1);
  Rational total = o.entropy_mask(full);
  SlepianWolfReport report;
  report.sum_rate_equals_total = mask_sum(vals, full) == total;
  for (SubsetMask mask = 1; mask <= full && full != 0; ++mask) {
    Rational lhs = mask_sum(vals, mask);
    Rational rhs = total - o.entropy_mask(full & ~mask);  // H(X | V \ X)
    if (lhs < rhs) {
      report.ok = false;
      report.subset = o.to_set(mask);
      report.lhs = lhs;
      report.rhs = rhs;
      return report;
    }
  }
  return report;
}

OracleValidation validate_oracle(const EntropyOracle& o) {
  require_enumerable(o);
  std::size_t n = o.size();
  OracleValidation bad;

  Rational at_empty = o.entropy_mask(0);
  if (!at_empty.is_zero()) {
    bad.failure = OracleValidation::Failure::Normalization;
    bad.lhs = at_empty;
    bad.rhs = Rational(0);
    return bad;
  }

  SubsetMask full = (n == 0 ? 0 : (SubsetMask(1) << n) - 1);

  // Monotone iff every single-element increment is nonnegative.
  for (SubsetMask mask = 0; mask <= full; ++mask) {
    Rational base = o.entropy_mask(mask);
    for (std::size_t i = 0; i < n; ++i) {
      SubsetMask bit = SubsetMask(1) << i;
      if (mask & bit) continue;
      Rational grown = o.entropy_mask(mask | bit);
      if (grown < base) {
        bad.failure = OracleValidation::Failure::Monotonicity;
        bad.witness_x = o.to_set(mask);
        bad.witness_y = o.to_set(mask | bit);
        bad.lhs = base;
        bad.rhs = grown;
        return bad;
      }
    }
    if (mask == full) break;  // avoid wraparound when n == 32
  }

  // Submodular iff H(X+i) + H(X+j) >= H(X+i+j) + H(X) for all X, i != j.
  for (SubsetMask mask = 0; mask <= full; ++mask) {
    Rational base = o.entropy_mask(mask);
    for (std::size_t i = 0; i < n; ++i) {
      SubsetMask bi = SubsetMask(1) << i;
      if (mask & bi) continue;
      Rational with_i = o.entropy_mask(mask | bi);
      for (std::size_t j = i + 1; j < n; ++j) {
        SubsetMask bj = SubsetMask(1) << j;
        if (mask & bj) continue;
        Rational with_j = o.entropy_mask(mask | bj);
        Rational with_both = o.entropy_mask(mask | bi | bj);
        if (with_i + with_j < with_both + base) {
          bad.failure = OracleValidation::Failure::Submodularity;
          bad.witness_x = o.to_set(mask | bi);
          bad.witness_y = o.to_set(mask | bj);
          bad.lhs = with_i + with_j;
          bad.rhs = with_both + base;
          return bad;
        }
      }
    }
    if (mask == full) break;
  }
  return {};
}

std::string to_string(OracleValidation::Failure failure) {
  switch (failure) {
    case OracleValidation::Failure::None:
      return "none";
    case OracleValidation::Failure::Normalization:
      return "normalization";
    case OracleValidation::Failure::Monotonicity:
      return "monotonicity";
    case OracleValidation::Failure::Submodularity:
      return "submodularity";
  }
  throw std::logic_error("unknown failure kind");
}

}  // namespace mif
