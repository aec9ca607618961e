#include "mif/digraph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mif {
namespace {

std::string edge_name(NodeId tail, NodeId head) {
  return "(" + std::to_string(tail) + "," + std::to_string(head) + ")";
}

}  // namespace

Digraph::Digraph(std::vector<NodeId> sources, NodeId sink,
                 std::vector<Edge> edges)
    : sources_(std::move(sources)), sink_(sink), edges_(std::move(edges)) {
  std::sort(sources_.begin(), sources_.end());
  if (std::adjacent_find(sources_.begin(), sources_.end()) != sources_.end()) {
    throw std::invalid_argument("duplicate source id");
  }
  for (NodeId v : sources_) {
    if (v < 0) throw std::invalid_argument("negative node id");
    if (v == sink_) throw std::invalid_argument("sink listed as a source");
  }
  if (sink_ < 0) throw std::invalid_argument("negative node id");

  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return EdgeKey{a.tail, a.head} < EdgeKey{b.tail, b.head};
  });
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (!has_node(e.tail) || !has_node(e.head)) {
      throw std::invalid_argument("edge endpoint " + edge_name(e.tail, e.head) +
                                  " not a declared node");
    }
    if (e.tail == e.head) {
      throw std::invalid_argument("self loop " + edge_name(e.tail, e.head));
    }
    if (i > 0 && edges_[i - 1].tail == e.tail && edges_[i - 1].head == e.head) {
      throw std::invalid_argument("duplicate edge " + edge_name(e.tail, e.head));
    }
    if (e.capacity.is_negative()) {
      throw std::invalid_argument("negative capacity on " +
                                  edge_name(e.tail, e.head));
    }
  }

  // Underlying undirected graph must be connected.
  std::map<NodeId, std::vector<NodeId>> adj;
  for (NodeId v : sources_) adj[v];
  adj[sink_];
  for (const Edge& e : edges_) {
    adj[e.tail].push_back(e.head);
    adj[e.head].push_back(e.tail);
  }
  std::set<NodeId> seen{sink_};
  std::vector<NodeId> stack{sink_};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : adj[v]) {
      if (seen.insert(w).second) stack.push_back(w);
    }
  }
  if (seen.size() != adj.size()) {
    throw std::invalid_argument("underlying undirected graph is disconnected");
  }
}

bool Digraph::is_source(NodeId v) const {
  return std::binary_search(sources_.begin(), sources_.end(), v);
}

std::optional<std::size_t> Digraph::edge_index(NodeId tail, NodeId head) const {
  EdgeKey key{tail, head};
  auto it = std::lower_bound(
      edges_.begin(), edges_.end(), key, [](const Edge& e, const EdgeKey& k) {
        return EdgeKey{e.tail, e.head} < k;
      });
  if (it == edges_.end() || it->tail != tail || it->head != head) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - edges_.begin());
}

std::size_t Digraph::source_index(NodeId v) const {
  auto it = std::lower_bound(sources_.begin(), sources_.end(), v);
  if (it == sources_.end() || *it != v) {
    throw std::invalid_argument("node " + std::to_string(v) +
                                " is not a source");
  }
  return static_cast<std::size_t>(it - sources_.begin());
}

Flow Flow::zero(const Digraph& g) {
  Flow f;
  for (const Edge& e : g.edges()) f.values_[{e.tail, e.head}] = Rational(0);
  return f;
}

Flow::Flow(const Digraph& g, const std::map<EdgeKey, Rational>& values) {
  for (const Edge& e : g.edges()) values_[{e.tail, e.head}] = Rational(0);
  for (const auto& [key, value] : values) {
    auto it = values_.find(key);
    if (it == values_.end()) {
      throw std::invalid_argument("flow value on unknown edge " +
                                  edge_name(key.first, key.second));
    }
    it->second = value;
  }
}

const Rational& Flow::at(NodeId tail, NodeId head) const {
  auto it = values_.find({tail, head});
  if (it == values_.end()) {
    throw std::invalid_argument("flow queried on unknown edge " +
                                edge_name(tail, head));
  }
  return it->second;
}

void Flow::set(NodeId tail, NodeId head, const Rational& value) {
  auto it = values_.find({tail, head});
  if (it == values_.end()) {
    throw std::invalid_argument("flow set on unknown edge " +
                                edge_name(tail, head));
  }
  it->second = value;
}

bool Flow::matches(const Digraph& g) const {
  if (values_.size() != g.edges().size()) return false;
  for (const Edge& e : g.edges()) {
    if (!values_.count({e.tail, e.head})) return false;
  }
  return true;
}

Rational sum(const RateVector& rates) {
  Rational total;
  for (const auto& [node, value] : rates) total += value;
  return total;
}

Rational boundary(const Digraph& g, const Flow& f, const std::set<NodeId>& x) {
  for (NodeId v : x) {
    if (!g.is_source(v)) {
      throw std::invalid_argument("boundary over non-source node " +
                                  std::to_string(v));
    }
  }
  Rational total;
  for (const auto& [key, value] : f.values()) {
    if (x.count(key.first)) total += value;
    if (x.count(key.second)) total -= value;
  }
  return total;
}

RateVector rate_vector(const Digraph& g, const Flow& f) {
  RateVector rates;
  for (NodeId v : g.sources()) rates[v] = Rational(0);
  for (const auto& [key, value] : f.values()) {
    if (auto it = rates.find(key.first); it != rates.end()) it->second += value;
    if (auto it = rates.find(key.second); it != rates.end()) {
      it->second -= value;
    }
  }
  return rates;
}

std::vector<CapacityViolation> check_capacity_feasible(const Digraph& g,
                                                       const Flow& f) {
  if (!f.matches(g)) {
    throw std::invalid_argument("flow does not match the digraph's edge set");
  }
  std::vector<CapacityViolation> out;
  for (const Edge& e : g.edges()) {
    const Rational& v = f.at(e.tail, e.head);
    if (v.is_negative()) {
      out.push_back({e.tail, e.head, v, Rational(0)});
    } else if (v > e.capacity) {
      out.push_back({e.tail, e.head, v, e.capacity});
    }
  }
  return out;
}

}  // namespace mif
