#pragma once

#include <map>
#include <string>
#include <vector>

#include "mif/solver.hpp"

namespace mif {

enum class MessageKind { CapacityReport, PathProbe, PathReport, AugmentCommit };

std::string to_string(MessageKind kind);

struct SimStats {
  long long rounds = 0;
  std::map<MessageKind, long long> messages;

  bool operator==(const SimStats& o) const = default;
};

// One delivered message, for the per-round log.
struct DeliveryRecord {
  MessageKind kind = MessageKind::CapacityReport;
  NodeId from = 0;
  NodeId to = 0;

  bool operator==(const DeliveryRecord& o) const = default;
};

struct SimConfig {
  // Harness-level assertions: replicas identical at round boundaries, both
  // endpoint copies of every edge flow in agreement.
  bool check_invariants = true;
};

struct DistributedRun {
  SolveResult result;
  SimStats stats;
  // Messages in delivery order, one inner vector per round.
  std::vector<std::vector<DeliveryRecord>> round_log;
};

// Synchronous-round message-passing simulation of the augmenting solver,
// from the zero flow. One agent per node holds its incident edges and flows,
// a replica of the global rate vector, and the model descriptor (handed to
// every agent at initialization). Per iteration:
//
//   1. every source computes its own saturation capacity and, if saturated,
//      its dependence set with exchange capacities, and floods the report;
//   2. unsaturated sources start probes that run a distributed breadth-first
//      search over the residual arcs toward the sink (probes crossing a
//      dependence arc between non-adjacent nodes are routed hop by hop);
//   3. the sink elects the winner by (path length, source id, node sequence),
//      exactly the centralized tie-break, and floods the result;
//   4. the elected source floods the augment commitment; all agents apply it
//      at the phase boundary, keeping replicas identical between rounds.
//
// Messages travel only between topology neighbors. The returned SolveResult
// is field-identical to the centralized solver's on the same inputs.
DistributedRun run_distributed(const Digraph& g, const EntropyOracle& o,
                               const SimConfig& config = {});

}  // namespace mif
