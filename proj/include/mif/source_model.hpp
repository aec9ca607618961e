#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mif/digraph.hpp"

namespace mif {

using SubsetMask = std::uint32_t;

// Set function H over subsets of a fixed ground set of source nodes,
// interpreted as joint entropy. Intended axioms (checked by validate_oracle):
// H(empty) = 0, monotone nondecreasing, submodular.
class EntropyOracle {
 public:
  virtual ~EntropyOracle() = default;

  const std::vector<NodeId>& ground() const { return ground_; }  // sorted
  std::size_t size() const { return ground_.size(); }

  Rational entropy(const std::set<NodeId>& x) const;
  // Fast path: bit i of the mask selects ground()[i].
  Rational entropy_mask(SubsetMask mask) const { return eval_mask(mask); }

  SubsetMask to_mask(const std::set<NodeId>& x) const;  // throws on unknown id
  std::set<NodeId> to_set(SubsetMask mask) const;

 protected:
  explicit EntropyOracle(std::vector<NodeId> ground);
  virtual Rational eval_mask(SubsetMask mask) const = 0;

 private:
  std::vector<NodeId> ground_;
};

// Sources that observe shared independent bits. Node i sees a subset of the
// bits; H(X) is the total entropy of the bits seen by at least one member of
// X, which makes H exactly computable, monotone, and submodular.
class BitSharingSource final : public EntropyOracle {
 public:
  struct Bit {
    std::string id;
    Rational entropy;

    bool operator==(const Bit& o) const = default;
  };

  // Ground set = keys of observes (nodes may observe nothing). Validates:
  // unique bit ids, positive bit entropies, observed ids declared, and every
  // bit observed by at least one node.
  BitSharingSource(std::vector<Bit> bits,
                   std::map<NodeId, std::set<std::string>> observes);

  const std::vector<Bit>& bits() const { return bits_; }
  const std::map<NodeId, std::set<std::string>>& observes() const {
    return observes_;
  }

 private:
  Rational eval_mask(SubsetMask mask) const override;

  std::vector<Bit> bits_;
  std::map<NodeId, std::set<std::string>> observes_;
  std::vector<SubsetMask> observers_;  // per bit, mask of nodes that see it
};

// Explicit value for every one of the 2^n subsets, in mask order over the
// sorted ground set. Axioms are not checked here; run validate_oracle.
class TableOracle final : public EntropyOracle {
 public:
  TableOracle(std::vector<NodeId> ground, std::vector<Rational> by_mask);

  const std::vector<Rational>& by_mask() const { return by_mask_; }

 private:
  Rational eval_mask(SubsetMask mask) const override;

  std::vector<Rational> by_mask_;
};

// View of a base oracle on a different ground set: H'(X) = H(X intersected
// with the base ground set). Members outside the base ground contribute
// nothing. Preserves normalization, monotonicity, and submodularity.
class ProjectedOracle final : public EntropyOracle {
 public:
  ProjectedOracle(std::shared_ptr<const EntropyOracle> base,
                  std::vector<NodeId> ground);

 private:
  Rational eval_mask(SubsetMask mask) const override;

  std::shared_ptr<const EntropyOracle> base_;
  std::vector<SubsetMask> member_bits_;  // base-ground mask per own member
};

// H(X) + H(Y) - H(X union Y); nonnegative for submodular monotone H.
Rational mutual_information(const EntropyOracle& o, const std::set<NodeId>& x,
                            const std::set<NodeId>& y);

struct MembershipReport {
  enum class Kind { Ok, Negative, SubsetBound };

  Kind kind = Kind::Ok;
  std::set<NodeId> subset;  // witness when not ok
  Rational lhs;             // violating value
  Rational rhs;             // violated bound

  bool ok() const { return kind == Kind::Ok; }
};

// x >= 0 componentwise and x(X) <= H(X) for every subset X of the ground set.
// Keys of x must equal the ground set exactly.
MembershipReport polyhedron_member(const EntropyOracle& o,
                                   const RateVector& x);

struct SlepianWolfReport {
  bool ok = true;
  std::set<NodeId> subset;  // witness when not ok: x(subset) < rhs
  Rational lhs;
  Rational rhs;
  bool sum_rate_equals_total = false;  // x(V) == H(V)
};

// x(X) >= H(X | V \ X) = H(V) - H(V \ X) for every X. Membership in the
// polyhedron and Slepian-Wolf feasibility coincide exactly when
// x(V) = H(V); that equality is reported but not required.
SlepianWolfReport slepian_wolf_feasible(const EntropyOracle& o,
                                        const RateVector& x);

struct OracleValidation {
  enum class Failure { None, Normalization, Monotonicity, Submodularity };

  Failure failure = Failure::None;
  std::set<NodeId> witness_x;
  std::set<NodeId> witness_y;
  Rational lhs;
  Rational rhs;

  bool ok() const { return failure == Failure::None; }
};

// Exhaustively checks H(empty) = 0, then monotonicity on every (X, X + i),
// then submodularity on every (X + i, X + j) pair. Witnesses are the two
// violating sets. Throws if the ground set has more than 20 nodes.
OracleValidation validate_oracle(const EntropyOracle& o);

std::string to_string(OracleValidation::Failure failure);

}  // namespace mif
