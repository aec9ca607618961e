#include "mif/distsim.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <variant>

namespace mif {

std::string to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::CapacityReport:
      return "capacity-report";
    case MessageKind::PathProbe:
      return "path-probe";
    case MessageKind::PathReport:
      return "path-report";
    case MessageKind::AugmentCommit:
      return "augment-commit";
  }
  throw std::logic_error("unknown message kind");
}

namespace {

// A breadth-first-search label: the best known path from `source` to the
// node currently holding it. Labels compare by (length, node sequence);
// keeping only the best label per (source, node) is lossless because a
// winning path's prefixes are themselves winners.
struct ProbeLabel {
  NodeId source = 0;
  std::vector<NodeId> nodes;  // starts at source
  std::vector<AuxArc> arcs;
  Rational min_cap;

  bool better_than(const ProbeLabel& o) const {
    if (arcs.size() != o.arcs.size()) return arcs.size() < o.arcs.size();
    return nodes < o.nodes;
  }
};

struct CapacityPayload {
  int iteration = 0;
  NodeId origin = 0;
  Rational saturation;
  bool saturated = false;
  NodeDependence dependence;  // meaningful when saturated
};

struct ProbePayload {
  int iteration = 0;
  NodeId target = 0;  // residual-arc head this label is being delivered to
  ProbeLabel label;
};

struct ReportPayload {
  int iteration = 0;
  bool has_winner = false;
  AugmentingPath path;
  Rational beta;
};

struct CommitPayload {
  int iteration = 0;
  AugmentingPath path;
  Rational beta;
};

using Payload =
    std::variant<CapacityPayload, ProbePayload, ReportPayload, CommitPayload>;

struct Message {
  MessageKind kind = MessageKind::CapacityReport;
  NodeId from = 0;
  NodeId to = 0;
  long long seq = 0;  // FIFO order on the (from, to) link
  Payload payload;
};

class Simulator;

struct Agent {
  NodeId id = 0;
  bool is_sink = false;
  // Handed out at initialization: the model descriptor and the topology
  // (the latter only for flood forwarding and hop-by-hop routing).
  const Digraph* graph = nullptr;
  const EntropyOracle* oracle = nullptr;
  std::vector<NodeId> neighbors;      // ascending
  std::map<NodeId, NodeId> next_hop;  // destination -> neighbor toward it

  // Local mutable state: flows on incident edges only, plus the replica of
  // the global rate vector that every agent keeps in lockstep.
  std::map<EdgeKey, Rational> incident_flow;
  RateVector replica;

  // Per-iteration scratch.
  std::map<NodeId, CapacityPayload> reports;  // by origin
  std::map<NodeId, ProbeLabel> best_labels;   // by probe source
  std::set<NodeId> dirty_labels;
  std::optional<ProbeLabel> sink_best;
  std::optional<ReportPayload> election;
  std::optional<CommitPayload> commit;

  void emit_capacity_report(Simulator& sim, int iteration);
  void start_probes(Simulator& sim, int iteration);
  void receive(Simulator& sim, const Message& msg);
  void flush_probes(Simulator& sim, int iteration);
  void elect_and_report(Simulator& sim, int iteration);
  void announce_commit(Simulator& sim, int iteration);
  void apply_commit_and_reset();

 private:
  bool is_neighbor(NodeId v) const {
    return std::binary_search(neighbors.begin(), neighbors.end(), v);
  }
  std::vector<AuxArc> out_arcs() const;
  void consider_label(ProbeLabel label);
  void extend_label(Simulator& sim, int iteration, const ProbeLabel& label);
};

class Simulator {
 public:
  Simulator(const Digraph& g, const EntropyOracle& o, SimConfig cfg);

  DistributedRun run();

  void send(MessageKind kind, NodeId from, NodeId to, Payload payload) {
    outbox_.push_back(
        {kind, from, to, ++link_seq_[{from, to}], std::move(payload)});
    ++stats_.messages[kind];
  }

 private:
  void run_until_quiet(int iteration);
  Flow reconstruct_flow() const;
  void check_replicas() const;

  const Digraph& g_;
  const EntropyOracle& oracle_;
  SimConfig cfg_;
  std::map<NodeId, Agent> agents_;
  std::vector<Message> outbox_;
  std::map<std::pair<NodeId, NodeId>, long long> link_seq_;
  SimStats stats_;
  std::vector<std::vector<DeliveryRecord>> round_log_;
};

void Agent::emit_capacity_report(Simulator& sim, int iteration) {
  if (is_sink) return;
  NodeCapacity cap = node_capacity(*oracle, replica, id);
  CapacityPayload p{iteration, id, cap.saturation, cap.dependence.has_value(),
                    cap.dependence.value_or(NodeDependence{})};
  reports.emplace(id, p);
  for (NodeId n : neighbors) sim.send(MessageKind::CapacityReport, id, n, p);
}

void Agent::start_probes(Simulator& sim, int iteration) {
  if (is_sink) return;
  const CapacityPayload& own = reports.at(id);
  if (own.saturated) return;
  ProbeLabel label{id, {id}, {}, Rational(0)};
  best_labels.emplace(id, label);
  extend_label(sim, iteration, label);
}

void Agent::receive(Simulator& sim, const Message& msg) {
  switch (msg.kind) {
    case MessageKind::CapacityReport: {
      const auto& p = std::get<CapacityPayload>(msg.payload);
      if (reports.emplace(p.origin, p).second) {
        for (NodeId n : neighbors) {
          if (n != msg.from) sim.send(msg.kind, id, n, p);
        }
      }
      break;
    }
    case MessageKind::PathProbe: {
      const auto& p = std::get<ProbePayload>(msg.payload);
      if (p.target != id) {  // routed hop toward a non-adjacent arc head
        sim.send(msg.kind, id, next_hop.at(p.target), p);
        break;
      }
      if (is_sink) {
        const ProbeLabel& l = p.label;
        bool better =
            !sink_best ||
            std::tuple(l.arcs.size(), l.source, l.nodes) <
                std::tuple(sink_best->arcs.size(), sink_best->source,
                           sink_best->nodes);
        if (better) sink_best = l;
      } else {
        consider_label(p.label);
      }
      break;
    }
    case MessageKind::PathReport: {
      const auto& p = std::get<ReportPayload>(msg.payload);
      if (!election) {
        election = p;
        for (NodeId n : neighbors) {
          if (n != msg.from) sim.send(msg.kind, id, n, p);
        }
      }
      break;
    }
    case MessageKind::AugmentCommit: {
      const auto& p = std::get<CommitPayload>(msg.payload);
      if (!commit) {
        commit = p;
        for (NodeId n : neighbors) {
          if (n != msg.from) sim.send(msg.kind, id, n, p);
        }
      }
      break;
    }
  }
}

void Agent::flush_probes(Simulator& sim, int iteration) {
  if (is_sink) {
    dirty_labels.clear();
    return;
  }
  for (NodeId src : dirty_labels) {
    extend_label(sim, iteration, best_labels.at(src));
  }
  dirty_labels.clear();
}

std::vector<AuxArc> Agent::out_arcs() const {
  std::vector<AuxArc> out;
  for (const auto& [key, f] : incident_flow) {
    auto idx = graph->edge_index(key.first, key.second);
    const Rational& cap = graph->edges()[*idx].capacity;
    if (key.first == id && f < cap) {
      out.push_back({id, key.second, ArcKind::Forward, cap - f});
    }
    if (key.second == id && f > Rational(0)) {
      out.push_back({id, key.first, ArcKind::Backward, f});
    }
  }
  for (const auto& [origin, rep] : reports) {
    if (!rep.saturated || origin == id) continue;
    if (!rep.dependence.members.count(id)) continue;
    auto it = rep.dependence.exchange.find(id);
    if (it != rep.dependence.exchange.end() && it->second > Rational(0)) {
      out.push_back({id, origin, ArcKind::Dependence, it->second});
    }
  }
  std::sort(out.begin(), out.end(), [](const AuxArc& a, const AuxArc& b) {
    return std::tuple(a.head, static_cast<int>(a.kind)) <
           std::tuple(b.head, static_cast<int>(b.kind));
  });
  return out;
}

void Agent::consider_label(ProbeLabel label) {
  NodeId src = label.source;
  auto it = best_labels.find(src);
  if (it == best_labels.end()) {
    best_labels.emplace(src, std::move(label));
    dirty_labels.insert(src);
  } else if (label.better_than(it->second)) {
    it->second = std::move(label);
    dirty_labels.insert(src);
  }
}

void Agent::extend_label(Simulator& sim, int iteration,
                         const ProbeLabel& label) {
  NodeId prev_head = -1;
  for (const AuxArc& arc : out_arcs()) {
    if (arc.head == prev_head) continue;  // parallel arc; keep the first kind
    prev_head = arc.head;
    if (std::find(label.nodes.begin(), label.nodes.end(), arc.head) !=
        label.nodes.end()) {
      continue;  // no repeated nodes
    }
    ProbeLabel next = label;
    next.nodes.push_back(arc.head);
    next.arcs.push_back(arc);
    next.min_cap = label.arcs.empty() ? arc.capacity
                                      : std::min(label.min_cap, arc.capacity);
    NodeId hop = is_neighbor(arc.head) ? arc.head : next_hop.at(arc.head);
    sim.send(MessageKind::PathProbe, id, hop,
             ProbePayload{iteration, arc.head, std::move(next)});
  }
}

void Agent::elect_and_report(Simulator& sim, int iteration) {
  ReportPayload p;
  p.iteration = iteration;
  if (sink_best) {
    p.has_winner = true;
    p.path = AugmentingPath{sink_best->source, sink_best->arcs};
    const Rational& sat = reports.at(sink_best->source).saturation;
    p.beta = std::min(sat, sink_best->min_cap);
  }
  election = p;
  for (NodeId n : neighbors) sim.send(MessageKind::PathReport, id, n, p);
}

void Agent::announce_commit(Simulator& sim, int iteration) {
  if (!election || !election->has_winner || election->path.source != id) {
    throw std::logic_error("commit announced by a non-elected agent");
  }
  CommitPayload p{iteration, election->path, election->beta};
  commit = p;
  for (NodeId n : neighbors) sim.send(MessageKind::AugmentCommit, id, n, p);
}

void Agent::apply_commit_and_reset() {
  if (!commit) {
    throw std::logic_error("agent missed the augment commitment flood");
  }
  const AugmentingPath& path = commit->path;
  const Rational& beta = commit->beta;
  for (const AuxArc& arc : path.arcs) {
    switch (arc.kind) {
      case ArcKind::Forward: {
        auto it = incident_flow.find({arc.tail, arc.head});
        if (it != incident_flow.end()) it->second += beta;
        break;
      }
      case ArcKind::Backward: {
        auto it = incident_flow.find({arc.head, arc.tail});
        if (it != incident_flow.end()) it->second -= beta;
        break;
      }
      case ArcKind::Dependence:
        break;
    }
  }
  // The boundary changes only at the elected source and across dependence
  // arcs; interior flow pushes conserve.
  replica.at(path.source) += beta;
  for (const AuxArc& arc : path.arcs) {
    if (arc.kind == ArcKind::Dependence) {
      replica.at(arc.tail) -= beta;
      replica.at(arc.head) += beta;
    }
  }
  reports.clear();
  best_labels.clear();
  dirty_labels.clear();
  sink_best.reset();
  election.reset();
  commit.reset();
}

Simulator::Simulator(const Digraph& g, const EntropyOracle& o, SimConfig cfg)
    : g_(g), oracle_(o), cfg_(cfg) {
  stats_.messages[MessageKind::CapacityReport] = 0;
  stats_.messages[MessageKind::PathProbe] = 0;
  stats_.messages[MessageKind::PathReport] = 0;
  stats_.messages[MessageKind::AugmentCommit] = 0;

  std::vector<NodeId> nodes = g.sources();
  nodes.push_back(g.sink());
  std::sort(nodes.begin(), nodes.end());

  std::map<NodeId, std::set<NodeId>> adj;
  for (NodeId v : nodes) adj[v];
  for (const Edge& e : g.edges()) {
    adj[e.tail].insert(e.head);
    adj[e.head].insert(e.tail);
  }

  // Hop distances over the undirected topology, for next-hop routing.
  std::map<NodeId, std::map<NodeId, int>> dist;
  for (NodeId s : nodes) {
    std::map<NodeId, int>& d = dist[s];
    d[s] = 0;
    std::deque<NodeId> queue{s};
    while (!queue.empty()) {
      NodeId v = queue.front();
      queue.pop_front();
      for (NodeId w : adj[v]) {
        if (d.emplace(w, d[v] + 1).second) queue.push_back(w);
      }
    }
  }

  for (NodeId v : nodes) {
    Agent& a = agents_[v];
    a.id = v;
    a.is_sink = v == g.sink();
    a.graph = &g;
    a.oracle = &o;
    a.neighbors.assign(adj[v].begin(), adj[v].end());
    for (const Edge& e : g.edges()) {
      if (e.tail == v || e.head == v) {
        a.incident_flow[{e.tail, e.head}] = Rational(0);
      }
    }
    for (NodeId s : g.sources()) a.replica[s] = Rational(0);
    for (NodeId dest : nodes) {
      if (dest == v) continue;
      for (NodeId w : a.neighbors) {  // ascending: smallest id wins
        if (dist[dest].at(w) == dist[dest].at(v) - 1) {
          a.next_hop[dest] = w;
          break;
        }
      }
    }
  }
}

void Simulator::run_until_quiet(int iteration) {
  while (!outbox_.empty()) {
    std::vector<Message> batch = std::move(outbox_);
    outbox_.clear();
    ++stats_.rounds;
    std::sort(batch.begin(), batch.end(),
              [](const Message& a, const Message& b) {
                return std::tuple(a.to, a.from, a.seq) <
                       std::tuple(b.to, b.from, b.seq);
              });
    std::vector<DeliveryRecord>& log = round_log_.emplace_back();
    for (const Message& m : batch) log.push_back({m.kind, m.from, m.to});
    std::size_t i = 0;
    while (i < batch.size()) {
      NodeId to = batch[i].to;
      Agent& agent = agents_.at(to);
      while (i < batch.size() && batch[i].to == to) {
        agent.receive(*this, batch[i]);
        ++i;
      }
      agent.flush_probes(*this, iteration);
    }
  }
}

Flow Simulator::reconstruct_flow() const {
  std::map<EdgeKey, Rational> values;
  for (const Edge& e : g_.edges()) {
    EdgeKey key{e.tail, e.head};
    const Rational& tail_copy = agents_.at(e.tail).incident_flow.at(key);
    if (cfg_.check_invariants &&
        tail_copy != agents_.at(e.head).incident_flow.at(key)) {
      throw std::logic_error("endpoint flow copies diverged");
    }
    values[key] = tail_copy;
  }
  return Flow(g_, values);
}

void Simulator::check_replicas() const {
  const RateVector& reference = agents_.begin()->second.replica;
  for (const auto& [id, agent] : agents_) {
    if (agent.replica != reference) {
      throw std::logic_error("rate replicas diverged across agents");
    }
  }
}

DistributedRun Simulator::run() {
  SubsetMask full =
      oracle_.size() == 0 ? 0 : (SubsetMask(1) << oracle_.size()) - 1;
  Rational total = oracle_.entropy_mask(full);
  long long n = static_cast<long long>(g_.sources().size());
  long long guard = 2 * n * n * n + 16;

  std::vector<IterationRecord> trace;
  Termination termination = Termination::ReachedTotalEntropy;
  for (int iteration = 1;; ++iteration) {
    if (cfg_.check_invariants) check_replicas();
    const RateVector& replica = agents_.begin()->second.replica;
    if (sum(replica) == total) {
      termination = Termination::ReachedTotalEntropy;
      break;
    }
    if (iteration > guard) {
      throw std::logic_error("simulation exceeded its iteration guard");
    }

    for (auto& [id, agent] : agents_) agent.emit_capacity_report(*this, iteration);
    run_until_quiet(iteration);

    for (auto& [id, agent] : agents_) agent.start_probes(*this, iteration);
    run_until_quiet(iteration);

    agents_.at(g_.sink()).elect_and_report(*this, iteration);
    run_until_quiet(iteration);

    const std::optional<ReportPayload>& decision =
        agents_.at(g_.sink()).election;
    if (!decision || !decision->has_winner) {
      termination = Termination::NoAugmentingPath;
      break;
    }
    AugmentingPath path = decision->path;
    Rational beta = decision->beta;

    agents_.at(path.source).announce_commit(*this, iteration);
    run_until_quiet(iteration);
    for (auto& [id, agent] : agents_) agent.apply_commit_and_reset();

    Flow f = reconstruct_flow();
    RateVector rates = agents_.begin()->second.replica;
    if (cfg_.check_invariants) {
      check_replicas();
      if (rate_vector(g_, f) != rates) {
        throw std::logic_error("replica disagrees with the boundary of the "
                               "reconstructed flow");
      }
    }
    trace.push_back({static_cast<int>(trace.size() + 1), path.source,
                     std::move(path), beta, std::move(f), std::move(rates)});
  }

  Flow final_flow = reconstruct_flow();
  RateVector final_rates = agents_.begin()->second.replica;
  Rational value = sum(final_rates);
  return {{std::move(final_flow), std::move(final_rates), value, termination,
           std::move(trace)},
          stats_, std::move(round_log_)};
}

}  // namespace

DistributedRun run_distributed(const Digraph& g, const EntropyOracle& o,
                               const SimConfig& config) {
  if (o.ground() != g.sources()) {
    throw std::invalid_argument(
        "oracle ground set must equal the digraph's source set");
  }
  Simulator sim(g, o, config);
  return sim.run();
}

}  // namespace mif
