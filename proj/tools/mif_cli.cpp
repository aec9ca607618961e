#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mif/instance_io.hpp"
#include "mif/intersection.hpp"
#include "mif/sfm.hpp"

namespace {

using namespace mif;

std::string edge_name(NodeId tail, NodeId head) {
  return std::to_string(tail) + "->" + std::to_string(head);
}

std::string set_name(const std::set<NodeId>& x) {
  std::string s = "{";
  bool first = true;
  for (NodeId v : x) {
    if (!first) s += ",";
    s += std::to_string(v);
    first = false;
  }
  return s + "}";
}

void print_result(const Digraph& g, const SolveResult& result) {
  std::cout << "value: " << result.value << "\n";
  std::cout << "termination: " << to_string(result.termination) << "\n";
  for (const auto& [node, rate] : result.rates) {
    std::cout << "rate " << node << ": " << rate << "\n";
  }
  for (const Edge& e : g.edges()) {
    std::cout << "flow " << edge_name(e.tail, e.head) << ": "
              << result.flow.at(e.tail, e.head) << "\n";
  }
  std::cout << "iterations: " << result.trace.size() << "\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path);
  out << text;
}

int run_solve(const std::string& instance_path, bool integral,
              bool distributed, const std::string& trace_path) {
  Instance inst = load_instance(instance_path);
  if (distributed) {
    DistributedRun run = run_distributed(inst.graph, *inst.oracle);
    print_result(inst.graph, run.result);
    std::cout << "rounds: " << run.stats.rounds << "\n";
    for (const auto& [kind, count] : run.stats.messages) {
      std::cout << "messages " << to_string(kind) << ": " << count << "\n";
    }
    if (!trace_path.empty()) {
      write_file(trace_path,
                 trace_to_json(inst.graph, run.result, "mif-distributed",
                               run.stats, run.round_log)
                     .dump(2));
    }
    return 0;
  }
  SolveResult result = integral ? solve_imif(inst.graph, *inst.oracle)
                                : solve_mif(inst.graph, *inst.oracle);
  print_result(inst.graph, result);
  if (!trace_path.empty()) {
    write_file(trace_path,
               trace_to_json(inst.graph, result, integral ? "imif" : "mif")
                   .dump(2));
  }
  return 0;
}

int run_verify(const std::string& instance_path, const std::string& flow_path,
               bool slepian_wolf, bool flow_polyhedron) {
  Instance inst = load_instance(instance_path);
  Flow f = load_flow(inst.graph, flow_path);
  bool all_ok = true;

  std::vector<CapacityViolation> violations =
      check_capacity_feasible(inst.graph, f);
  if (violations.empty()) {
    std::cout << "capacity: ok\n";
  } else {
    all_ok = false;
    for (const CapacityViolation& v : violations) {
      std::cout << "capacity: violation on " << edge_name(v.tail, v.head)
                << ": " << v.flow << " outside [0, " << v.bound << "]\n";
    }
  }

  RateVector x = rate_vector(inst.graph, f);
  MembershipReport membership = polyhedron_member(*inst.oracle, x);
  if (membership.ok()) {
    std::cout << "entropy-polyhedron: ok\n";
  } else {
    all_ok = false;
    if (membership.kind == MembershipReport::Kind::Negative) {
      std::cout << "entropy-polyhedron: negative rate at "
                << set_name(membership.subset) << ": " << membership.lhs
                << "\n";
    } else {
      std::cout << "entropy-polyhedron: violation at "
                << set_name(membership.subset) << ": " << membership.lhs
                << " > " << membership.rhs << "\n";
    }
  }

  if (flow_polyhedron) {
    MembershipReport report = in_flow_polyhedron(inst.graph, x);
    if (report.ok()) {
      std::cout << "flow-polyhedron: ok\n";
    } else {
      all_ok = false;
      std::cout << "flow-polyhedron: violation at "
                << set_name(report.subset) << ": " << report.lhs << " > "
                << report.rhs << "\n";
    }
  }

  if (slepian_wolf) {
    SlepianWolfReport report = slepian_wolf_feasible(*inst.oracle, x);
    if (report.ok) {
      std::cout << "slepian-wolf: ok (sum rate "
                << (report.sum_rate_equals_total ? "equals" : "below")
                << " total entropy)\n";
    } else {
      all_ok = false;
      std::cout << "slepian-wolf: violation at " << set_name(report.subset)
                << ": " << report.lhs << " < " << report.rhs << "\n";
    }
  }

  return all_ok ? 0 : 1;
}

int run_max_value(const std::string& instance_path) {
  Instance inst = load_instance(instance_path);
  IntersectionBound bound = max_independent_value(inst.graph, *inst.oracle);
  std::cout << "value: " << bound.value << "\n";
  std::cout << "witness: " << set_name(bound.witness) << "\n";
  return 0;
}

int run_export(const std::string& instance_path, const std::string& flow_path,
               bool aux, const std::string& out_path) {
  Instance inst = load_instance(instance_path);
  Flow f = flow_path.empty() ? Flow::zero(inst.graph)
                             : load_flow(inst.graph, flow_path);
  std::string dot;
  if (aux) {
    RateVector x = rate_vector(inst.graph, f);
    CapacitySweep sweep = capacity_sweep(*inst.oracle, x);
    AuxiliaryGraph aux_graph = build_auxiliary(inst.graph, f, sweep.dependence);
    dot = export_aux_dot(inst.graph, aux_graph);
  } else {
    dot = export_dot(inst.graph, flow_path.empty() ? nullptr : &f);
  }
  if (out_path.empty()) {
    std::cout << dot;
  } else {
    write_file(out_path, dot);
  }
  return 0;
}

int run_sink_select(const std::string& instance_path) {
  Instance inst = load_instance(instance_path);
  if (inst.candidates.empty()) {
    throw SchemaError("sink-select needs a non-empty candidates list");
  }
  std::vector<SinkChoice> ranking =
      sink_select(inst.graph, inst.oracle, inst.candidates);
  for (const SinkChoice& choice : ranking) {
    std::cout << choice.candidate << " " << choice.value << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximum independent flow solver"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string flow_path;
  std::string trace_path;
  std::string out_path;
  bool integral = false;
  bool distributed = false;
  bool slepian_wolf = false;
  bool flow_polyhedron = false;
  bool aux = false;

  CLI::App* solve = app.add_subcommand(
      "solve", "solve an instance with the augmenting-path algorithm");
  solve->add_option("instance", instance_path, "instance file")->required();
  CLI::Option* integral_opt =
      solve->add_flag("--integral", integral, "integral variant (unit pushes)");
  solve->add_flag("--distributed", distributed,
                  "run the message-passing simulation")
      ->excludes(integral_opt);
  solve->add_option("--trace", trace_path, "write the iteration trace here");

  CLI::App* verify = app.add_subcommand(
      "verify", "check a flow against the instance's constraints");
  verify->add_option("instance", instance_path, "instance file")->required();
  verify->add_option("flow", flow_path, "flow or trace file")->required();
  verify->add_flag("--slepian-wolf", slepian_wolf,
                   "also check the conditional-entropy lower bounds");
  verify->add_flag("--flow-polyhedron", flow_polyhedron,
                   "also check rates against the min-cut bounds");

  CLI::App* max_value = app.add_subcommand(
      "max-value", "compute the optimal value without solving for a flow");
  max_value->add_option("instance", instance_path, "instance file")
      ->required();

  CLI::App* export_cmd =
      app.add_subcommand("export", "render the instance as Graphviz DOT");
  export_cmd->add_option("instance", instance_path, "instance file")
      ->required();
  export_cmd->add_option("--flow", flow_path, "flow or trace file");
  export_cmd->add_flag("--aux", aux,
                       "render the auxiliary graph for the given flow");
  export_cmd->add_option("-o,--output", out_path, "write DOT here");

  CLI::App* sink_select_cmd = app.add_subcommand(
      "sink-select", "rank candidate sinks by achievable value");
  sink_select_cmd->add_option("instance", instance_path, "instance file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) {
      return run_solve(instance_path, integral, distributed, trace_path);
    }
    if (verify->parsed()) {
      return run_verify(instance_path, flow_path, slepian_wolf,
                        flow_polyhedron);
    }
    if (max_value->parsed()) return run_max_value(instance_path);
    if (export_cmd->parsed()) {
      return run_export(instance_path, flow_path, aux, out_path);
    }
    if (sink_select_cmd->parsed()) return run_sink_select(instance_path);
  } catch (const mif::OracleAxiomError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const mif::IntegralityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const mif::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
