#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mif/digraph.hpp"
#include "mif/distsim.hpp"
#include "mif/solver.hpp"
#include "mif/source_model.hpp"

namespace mif {

// A parsed instance file: topology, source model, optional sink candidates.
struct Instance {
  Digraph graph;
  std::shared_ptr<const EntropyOracle> oracle;
  std::vector<NodeId> candidates;
};

// Malformed or self-inconsistent input files.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A table source model that fails normalization, monotonicity, or
// submodularity. Carries the witness report.
struct OracleAxiomError : std::runtime_error {
  OracleAxiomError(const std::string& what, OracleValidation report_)
      : std::runtime_error(what), report(std::move(report_)) {}

  OracleValidation report;
};

// Instance files ("mif-instance/1"): nodes, sink, edges with capacities,
// a bit-sharing or table source model, optional candidates. Rationals are
// strings ("2", "0.6", "3/5") or JSON integers; JSON floats are rejected.
// Table models are checked against the oracle axioms (OracleAxiomError).
Instance parse_instance(const nlohmann::json& doc);
Instance parse_instance_text(const std::string& text);
Instance load_instance(const std::string& path);
nlohmann::json instance_to_json(const Instance& inst);

// Flow files ("mif-flow/1"): per-edge values. Missing edges default to zero;
// unknown edges are schema errors. load_flow also accepts a trace file
// ("mif-trace/1") and reads its final flow.
nlohmann::json flow_to_json(const Digraph& g, const Flow& f);
Flow parse_flow(const Digraph& g, const nlohmann::json& doc);
Flow load_flow(const Digraph& g, const std::string& path);

// Trace files ("mif-trace/1"): final result plus per-iteration records.
// Replaying the recorded paths and betas from the zero flow reproduces the
// final flow. The overload with simulation data appends round and message
// counters plus the per-round delivery log.
nlohmann::json trace_to_json(const Digraph& g, const SolveResult& result,
                             const std::string& algorithm);
nlohmann::json trace_to_json(const Digraph& g, const SolveResult& result,
                             const std::string& algorithm,
                             const SimStats& stats,
                             const std::vector<std::vector<DeliveryRecord>>&
                                 round_log);

// Graphviz rendering. Edge labels are "f/c" when a flow is given, "c"
// otherwise; the sink is labeled "t". Auxiliary arcs are labeled with their
// kind and capacity and styled per kind.
std::string export_dot(const Digraph& g, const Flow* f = nullptr);
std::string export_aux_dot(const Digraph& g, const AuxiliaryGraph& aux);

}  // namespace mif
