#include "mif/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace mif {
namespace {

using nlohmann::json;

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

const json& require_field(const json& doc, const char* key,
                          const char* where) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw SchemaError(std::string(where) + ": missing field \"" + key + "\"");
  }
  return *it;
}

NodeId parse_node_id(const json& v, const char* where) {
  if (!v.is_number_integer() || v.get<long long>() < 0 ||
      v.get<long long>() > 1000000) {
    throw SchemaError(std::string(where) +
                      ": node ids must be small nonnegative integers");
  }
  return static_cast<NodeId>(v.get<long long>());
}

Rational parse_rational_field(const json& v, const char* where) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      throw SchemaError(std::string(where) + ": " + e.what());
    }
  }
  if (v.is_number_float()) {
    throw SchemaError(std::string(where) +
                      ": floats are not exact; write the value as a string "
                      "(\"0.6\" or \"3/5\")");
  }
  throw SchemaError(std::string(where) + ": expected a rational string");
}

std::shared_ptr<const EntropyOracle> parse_bit_sharing(
    const json& model, const std::vector<NodeId>& sources) {
  const json& bits_doc = require_field(model, "bits", "source_model");
  if (!bits_doc.is_array()) {
    throw SchemaError("source_model.bits: expected an array");
  }
  std::vector<BitSharingSource::Bit> bits;
  for (const json& b : bits_doc) {
    if (!b.is_object() || !b.contains("id") || !b["id"].is_string()) {
      throw SchemaError("source_model.bits: each bit needs a string id");
    }
    bits.push_back({b["id"].get<std::string>(),
                    parse_rational_field(require_field(b, "entropy", "bit"),
                                         "bit entropy")});
  }

  const json& observes_doc = require_field(model, "observes", "source_model");
  if (!observes_doc.is_object()) {
    throw SchemaError("source_model.observes: expected an object");
  }
  std::map<NodeId, std::set<std::string>> observes;
  for (const auto& [key, value] : observes_doc.items()) {
    std::size_t pos = 0;
    int node = 0;
    try {
      node = std::stoi(key, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != key.size() || node < 0) {
      throw SchemaError("source_model.observes: key \"" + key +
                        "\" is not a node id");
    }
    if (!value.is_array()) {
      throw SchemaError("source_model.observes: values must be arrays");
    }
    std::set<std::string>& seen = observes[node];
    for (const json& bit : value) {
      if (!bit.is_string()) {
        throw SchemaError("source_model.observes: bit ids must be strings");
      }
      if (!seen.insert(bit.get<std::string>()).second) {
        throw SchemaError("source_model.observes: node " +
                          std::to_string(node) + " lists a bit twice");
      }
    }
  }

  std::vector<NodeId> keys;
  for (const auto& [node, ignored] : observes) keys.push_back(node);
  if (keys != sources) {
    throw SchemaError(
        "source_model.observes: keys must be exactly the non-sink nodes");
  }
  try {
    return std::make_shared<BitSharingSource>(std::move(bits),
                                              std::move(observes));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("source_model: ") + e.what());
  }
}

std::shared_ptr<const EntropyOracle> parse_table(
    const json& model, const std::vector<NodeId>& sources) {
  const json& entries = require_field(model, "entropies", "source_model");
  if (!entries.is_array()) {
    throw SchemaError("source_model.entropies: expected an array");
  }
  if (sources.size() > 20) {
    throw SchemaError("source_model: table models support at most 20 nodes");
  }
  std::size_t n = sources.size();
  std::vector<Rational> by_mask(std::size_t(1) << n);
  std::vector<bool> seen(by_mask.size(), false);
  for (const json& entry : entries) {
    const json& subset = require_field(entry, "subset", "entropies entry");
    if (!subset.is_array()) {
      throw SchemaError("entropies entry: subset must be an array");
    }
    SubsetMask mask = 0;
    for (const json& member : subset) {
      NodeId node = parse_node_id(member, "entropies subset");
      auto it = std::lower_bound(sources.begin(), sources.end(), node);
      if (it == sources.end() || *it != node) {
        throw SchemaError("entropies entry: node " + std::to_string(node) +
                          " is not a non-sink node");
      }
      SubsetMask bit = SubsetMask(1) << (it - sources.begin());
      if (mask & bit) {
        throw SchemaError("entropies entry: duplicate subset member");
      }
      mask |= bit;
    }
    if (seen[mask]) {
      throw SchemaError("source_model.entropies: duplicate subset");
    }
    seen[mask] = true;
    by_mask[mask] = parse_rational_field(
        require_field(entry, "value", "entropies entry"), "entropy value");
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
    throw SchemaError(
        "source_model.entropies: every subset needs exactly one entry");
  }

  std::shared_ptr<const EntropyOracle> oracle;
  try {
    oracle = std::make_shared<TableOracle>(sources, std::move(by_mask));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("source_model: ") + e.what());
  }
  OracleValidation check = validate_oracle(*oracle);
  if (!check.ok()) {
    std::string msg = "source_model: " + to_string(check.failure) +
                      " violated, witness " + set_name(check.witness_x) +
                      " / " + set_name(check.witness_y);
    throw OracleAxiomError(msg, std::move(check));
  }
  return oracle;
}

json rational_json(const Rational& r) { return json(r.decimal_str()); }

json rates_json(const RateVector& rates) {
  json obj = json::object();
  for (const auto& [node, rate] : rates) {
    obj[std::to_string(node)] = rational_json(rate);
  }
  return obj;
}

json flow_values_json(const Digraph& g, const Flow& f) {
  json arr = json::array();
  for (const Edge& e : g.edges()) {
    arr.push_back({{"tail", e.tail},
                   {"head", e.head},
                   {"flow", rational_json(f.at(e.tail, e.head))}});
  }
  return arr;
}

json path_json(const AugmentingPath& path) {
  json arr = json::array();
  for (const AuxArc& arc : path.arcs) {
    arr.push_back({{"tail", arc.tail},
                   {"head", arc.head},
                   {"kind", to_string(arc.kind)},
                   {"capacity", rational_json(arc.capacity)}});
  }
  return arr;
}

std::string node_dot_id(NodeId v) { return std::to_string(v); }

void append_nodes_dot(std::ostringstream& out, const Digraph& g) {
  std::vector<NodeId> nodes = g.sources();
  nodes.push_back(g.sink());
  std::sort(nodes.begin(), nodes.end());
  for (NodeId v : nodes) {
    out << "  " << node_dot_id(v);
    if (v == g.sink()) out << " [label=\"t\"]";
    out << ";\n";
  }
}

}  // namespace

Instance parse_instance(const json& doc) {
  if (!doc.is_object()) throw SchemaError("instance: expected a JSON object");
  const json& format = require_field(doc, "format", "instance");
  if (!format.is_string() || format.get<std::string>() != "mif-instance/1") {
    throw SchemaError("instance: format must be \"mif-instance/1\"");
  }

  const json& nodes_doc = require_field(doc, "nodes", "instance");
  if (!nodes_doc.is_array()) throw SchemaError("nodes: expected an array");
  std::vector<NodeId> nodes;
  for (const json& v : nodes_doc) nodes.push_back(parse_node_id(v, "nodes"));
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw SchemaError("nodes: duplicate node id");
  }

  NodeId sink = parse_node_id(require_field(doc, "sink", "instance"), "sink");
  if (!std::binary_search(nodes.begin(), nodes.end(), sink)) {
    throw SchemaError("sink: not in the node list");
  }
  std::vector<NodeId> sources;
  for (NodeId v : nodes) {
    if (v != sink) sources.push_back(v);
  }

  const json& edges_doc = require_field(doc, "edges", "instance");
  if (!edges_doc.is_array()) throw SchemaError("edges: expected an array");
  std::vector<Edge> edges;
  for (const json& e : edges_doc) {
    if (!e.is_object()) throw SchemaError("edges: expected objects");
    edges.push_back(
        {parse_node_id(require_field(e, "tail", "edge"), "edge tail"),
         parse_node_id(require_field(e, "head", "edge"), "edge head"),
         parse_rational_field(require_field(e, "capacity", "edge"),
                              "edge capacity")});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return EdgeKey{a.tail, a.head} < EdgeKey{b.tail, b.head};
  });

  Instance inst{[&] {
                  try {
                    return Digraph(sources, sink, std::move(edges));
                  } catch (const std::invalid_argument& e) {
                    throw SchemaError(std::string("graph: ") + e.what());
                  }
                }(),
                nullptr,
                {}};

  const json& model = require_field(doc, "source_model", "instance");
  if (!model.is_object()) {
    throw SchemaError("source_model: expected an object");
  }
  const json& type = require_field(model, "type", "source_model");
  if (!type.is_string()) {
    throw SchemaError("source_model.type: expected a string");
  }
  std::string type_name = type.get<std::string>();
  if (type_name == "bit-sharing") {
    inst.oracle = parse_bit_sharing(model, inst.graph.sources());
  } else if (type_name == "table") {
    inst.oracle = parse_table(model, inst.graph.sources());
  } else {
    throw SchemaError("source_model.type: unknown type \"" + type_name +
                      "\" (expected \"bit-sharing\" or \"table\")");
  }

  if (doc.contains("candidates")) {
    const json& cands = doc["candidates"];
    if (!cands.is_array()) {
      throw SchemaError("candidates: expected an array");
    }
    std::set<NodeId> dedup;
    for (const json& v : cands) {
      NodeId node = parse_node_id(v, "candidates");
      if (!std::binary_search(nodes.begin(), nodes.end(), node)) {
        throw SchemaError("candidates: node " + std::to_string(node) +
                          " is not in the node list");
      }
      if (!dedup.insert(node).second) {
        throw SchemaError("candidates: duplicate candidate");
      }
      inst.candidates.push_back(node);
    }
  }
  return inst;
}

Instance parse_instance_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("instance: ") + e.what());
  }
  return parse_instance(doc);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_text(buf.str());
}

nlohmann::json instance_to_json(const Instance& inst) {
  const Digraph& g = inst.graph;
  json doc;
  doc["format"] = "mif-instance/1";
  std::vector<NodeId> nodes = g.sources();
  nodes.push_back(g.sink());
  std::sort(nodes.begin(), nodes.end());
  doc["nodes"] = nodes;
  doc["sink"] = g.sink();
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({{"tail", e.tail},
                     {"head", e.head},
                     {"capacity", rational_json(e.capacity)}});
  }
  doc["edges"] = std::move(edges);

  json model;
  if (auto* bit = dynamic_cast<const BitSharingSource*>(inst.oracle.get())) {
    model["type"] = "bit-sharing";
    json bits = json::array();
    for (const BitSharingSource::Bit& b : bit->bits()) {
      bits.push_back({{"id", b.id}, {"entropy", rational_json(b.entropy)}});
    }
    model["bits"] = std::move(bits);
    json observes = json::object();
    for (const auto& [node, ids] : bit->observes()) {
      observes[std::to_string(node)] = ids;
    }
    model["observes"] = std::move(observes);
  } else if (auto* table =
                 dynamic_cast<const TableOracle*>(inst.oracle.get())) {
    model["type"] = "table";
    json entries = json::array();
    const std::vector<Rational>& by_mask = table->by_mask();
    for (SubsetMask mask = 0; mask < by_mask.size(); ++mask) {
      json subset = json::array();
      for (NodeId v : table->to_set(mask)) subset.push_back(v);
      entries.push_back(
          {{"subset", std::move(subset)},
           {"value", rational_json(by_mask[mask])}});
    }
    model["entropies"] = std::move(entries);
  } else {
    throw std::invalid_argument(
        "only bit-sharing and table models can be serialized");
  }
  doc["source_model"] = std::move(model);
  if (!inst.candidates.empty()) doc["candidates"] = inst.candidates;
  return doc;
}

nlohmann::json flow_to_json(const Digraph& g, const Flow& f) {
  json doc;
  doc["format"] = "mif-flow/1";
  doc["flow"] = flow_values_json(g, f);
  return doc;
}

Flow parse_flow(const Digraph& g, const json& doc) {
  if (!doc.is_object()) throw SchemaError("flow: expected a JSON object");
  const json& format = require_field(doc, "format", "flow");
  if (!format.is_string()) throw SchemaError("flow: format must be a string");
  std::string format_name = format.get<std::string>();
  if (format_name != "mif-flow/1" && format_name != "mif-trace/1") {
    throw SchemaError(
        "flow: format must be \"mif-flow/1\" or \"mif-trace/1\"");
  }
  const json& values = require_field(doc, "flow", "flow");
  if (!values.is_array()) throw SchemaError("flow: expected an array");
  std::map<EdgeKey, Rational> by_edge;
  for (const json& entry : values) {
    if (!entry.is_object()) throw SchemaError("flow: expected objects");
    NodeId tail = parse_node_id(require_field(entry, "tail", "flow entry"),
                                "flow tail");
    NodeId head = parse_node_id(require_field(entry, "head", "flow entry"),
                                "flow head");
    Rational value = parse_rational_field(
        require_field(entry, "flow", "flow entry"), "flow value");
    if (!g.edge_index(tail, head)) {
      throw SchemaError("flow: no edge (" + std::to_string(tail) + "," +
                        std::to_string(head) + ") in the graph");
    }
    if (!by_edge.emplace(EdgeKey{tail, head}, value).second) {
      throw SchemaError("flow: duplicate entry for edge (" +
                        std::to_string(tail) + "," + std::to_string(head) +
                        ")");
    }
  }
  return Flow(g, by_edge);
}

Flow load_flow(const Digraph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("flow: ") + e.what());
  }
  return parse_flow(g, doc);
}

nlohmann::json trace_to_json(const Digraph& g, const SolveResult& result,
                             const std::string& algorithm) {
  json doc;
  doc["format"] = "mif-trace/1";
  doc["algorithm"] = algorithm;
  doc["value"] = rational_json(result.value);
  doc["termination"] = to_string(result.termination);
  doc["rate_vector"] = rates_json(result.rates);
  doc["flow"] = flow_values_json(g, result.flow);
  json iterations = json::array();
  for (const IterationRecord& rec : result.trace) {
    iterations.push_back({{"index", rec.index},
                          {"source", rec.source},
                          {"beta", rational_json(rec.beta)},
                          {"path", path_json(rec.path)},
                          {"flow", flow_values_json(g, rec.flow_after)},
                          {"rate_vector", rates_json(rec.rates_after)}});
  }
  doc["iterations"] = std::move(iterations);
  return doc;
}

nlohmann::json trace_to_json(
    const Digraph& g, const SolveResult& result, const std::string& algorithm,
    const SimStats& stats,
    const std::vector<std::vector<DeliveryRecord>>& round_log) {
  json doc = trace_to_json(g, result, algorithm);
  json sim;
  sim["rounds"] = stats.rounds;
  json messages = json::object();
  for (const auto& [kind, count] : stats.messages) {
    messages[to_string(kind)] = count;
  }
  sim["messages"] = std::move(messages);
  json rounds = json::array();
  for (const std::vector<DeliveryRecord>& round : round_log) {
    json entries = json::array();
    for (const DeliveryRecord& rec : round) {
      entries.push_back({{"kind", to_string(rec.kind)},
                         {"from", rec.from},
                         {"to", rec.to}});
    }
    rounds.push_back(std::move(entries));
  }
  sim["round_log"] = std::move(rounds);
  doc["simulation"] = std::move(sim);
  return doc;
}

std::string export_dot(const Digraph& g, const Flow* f) {
  std::ostringstream out;
  out << "digraph mif {\n  rankdir=LR;\n  node [shape=circle];\n";
  append_nodes_dot(out, g);
  for (const Edge& e : g.edges()) {
    out << "  " << node_dot_id(e.tail) << " -> " << node_dot_id(e.head)
        << " [label=\"";
    if (f != nullptr) out << f->at(e.tail, e.head).decimal_str() << "/";
    out << e.capacity.decimal_str() << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_aux_dot(const Digraph& g, const AuxiliaryGraph& aux) {
  std::ostringstream out;
  out << "digraph mif_aux {\n  rankdir=LR;\n  node [shape=circle];\n";
  append_nodes_dot(out, g);
  for (const AuxArc& arc : aux.arcs) {
    const char* style = arc.kind == ArcKind::Forward    ? "solid"
                        : arc.kind == ArcKind::Backward ? "dashed"
                                                        : "dotted";
    out << "  " << node_dot_id(arc.tail) << " -> "
        << node_dot_id(arc.head) << " [label=\"" << to_string(arc.kind)
        << " " << arc.capacity.decimal_str() << "\", style=" << style
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace mif
