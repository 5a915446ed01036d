#include "gridrisk/attack_graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "gridrisk/error.hpp"

namespace gridrisk {
namespace {

constexpr std::size_t kMaxPaths = 1'000'000;

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }  // NaN fails both

}  // namespace

AttackGraph AttackGraph::build(std::vector<AttackNode> nodes, std::vector<AttackEdge> edges) {
  AttackGraph g;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.id.empty()) throw ValidationError("attack node with empty id");
    if (!valid_probability(n.prior))
      throw ValidationError("attack node '" + n.id + "': prior outside [0,1]");
    if (!g.index_.emplace(n.id, i).second) throw DuplicateNode("duplicate attack node '" + n.id + "'");
  }
  g.out_edges_.resize(nodes.size());
  g.in_edges_.resize(nodes.size());

  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    const std::string name = edge.parent + " -> " + edge.child;
    auto p = g.index_.find(edge.parent);
    auto c = g.index_.find(edge.child);
    if (p == g.index_.end() || c == g.index_.end())
      throw DanglingEdge("attack edge " + name + " references an unknown node");
    if (p->second == c->second) throw CycleDetected("attack edge " + name + " is a self-loop");
    if (!valid_probability(edge.cond_prob))
      throw ValidationError("attack edge " + name + ": cond_prob outside [0,1]");
    if (!seen.emplace(edge.parent, edge.child).second)
      throw ValidationError("duplicate attack edge " + name);
    g.out_edges_[p->second].push_back(e);
    g.in_edges_[c->second].push_back(e);
  }
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);

  if (g.topological_order().size() != g.nodes_.size()) {
    // Kahn's algorithm leaves exactly the nodes on or downstream of a cycle.
    auto order = g.topological_order();
    std::set<std::string> done(order.begin(), order.end());
    std::string stuck;
    for (const auto& n : g.nodes_) {
      if (!done.contains(n.id)) {
        stuck += stuck.empty() ? n.id : ", " + n.id;
      }
    }
    throw CycleDetected("attack graph has a cycle through: " + stuck);
  }
  if (g.nodes_.empty()) throw ValidationError("attack graph has no nodes");
  return g;
}

const AttackNode& AttackGraph::node(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownTarget("unknown attack node '" + id + "'");
  return nodes_[it->second];
}

bool AttackGraph::is_root(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownTarget("unknown attack node '" + id + "'");
  return in_edges_[it->second].empty();
}

std::vector<std::string> AttackGraph::roots() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (in_edges_[i].empty()) out.push_back(nodes_[i].id);
  }
  return out;
}

const AttackEdge* AttackGraph::edge(const std::string& parent, const std::string& child) const {
  auto it = index_.find(parent);
  if (it == index_.end()) return nullptr;
  for (auto e : out_edges_[it->second]) {
    if (edges_[e].child == child) return &edges_[e];
  }
  return nullptr;
}

std::vector<std::string> AttackGraph::topological_order() const {
  std::vector<std::size_t> indegree(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) indegree[i] = in_edges_[i].size();
  std::vector<std::size_t> ready;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    auto n = ready.back();
    ready.pop_back();
    order.push_back(nodes_[n].id);
    for (auto e : out_edges_[n]) {
      auto c = index_.at(edges_[e].child);
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  return order;
}

std::vector<std::vector<std::string>> AttackGraph::paths_to(const std::string& target) const {
  auto t = index_.find(target);
  if (t == index_.end()) throw UnknownTarget("unknown attack target '" + target + "'");

  // Walk backwards from the target; every maximal backward walk ends at a root.
  std::vector<std::vector<std::string>> out;
  std::vector<std::size_t> stack{t->second};
  auto walk = [&](auto&& self, std::size_t n) -> void {
    if (in_edges_[n].empty()) {
      std::vector<std::string> path;
      for (auto it = stack.rbegin(); it != stack.rend(); ++it) path.push_back(nodes_[*it].id);
      out.push_back(std::move(path));
      if (out.size() > kMaxPaths) throw ValidationError("attack graph has too many paths to '" + target + "'");
      return;
    }
    for (auto e : in_edges_[n]) {
      auto p = index_.at(edges_[e].parent);
      stack.push_back(p);
      self(self, p);
      stack.pop_back();
    }
  };
  walk(walk, t->second);
  return out;
}

double path_probability(const AttackGraph& graph, std::span<const std::string> path) {
  if (path.empty()) throw EmptyPath("attack path is empty");
  if (!graph.is_root(path.front())) throw NotARoot("attack path starts at non-root '" + path.front() + "'");
  double p = graph.node(path.front()).prior;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto* e = graph.edge(path[i - 1], path[i]);
    if (e == nullptr) throw MissingEdge("attack path has no edge " + path[i - 1] + " -> " + path[i]);
    p *= e->cond_prob;
  }
  return p;
}

double noisy_or(std::vector<double> path_probabilities) {
  if (path_probabilities.empty()) return 0.0;
  if (path_probabilities.size() == 1) return path_probabilities.front();
  // Fixed summation order makes the aggregate independent of enumeration order.
  std::sort(path_probabilities.begin(), path_probabilities.end());
  double log_miss = 0.0;
  for (double p : path_probabilities) log_miss += std::log1p(-p);
  return std::clamp(-std::expm1(log_miss), 0.0, 1.0);
}

DisruptionResult disruption_probability(const AttackGraph& graph, const std::string& target) {
  auto paths = graph.paths_to(target);
  DisruptionResult r;
  r.path_count = paths.size();
  if (paths.empty()) {
    r.unreachable = true;
    return r;
  }
  std::vector<double> probs;
  probs.reserve(paths.size());
  for (const auto& p : paths) probs.push_back(path_probability(graph, p));
  r.probability = noisy_or(std::move(probs));
  return r;
}

AttackGraph default_av2g_chain() {
  return AttackGraph::build(
      {
          {"ev_charger", "EV Charger", 0.07},
          {"aggregator", "Aggregator", 0.0},
          {"scada", "SCADA", 0.0},
          {"grid_disruption", "Grid Disruption", 0.0},
      },
      {
          {"ev_charger", "aggregator", 0.04},
          {"aggregator", "scada", 0.06},
          {"scada", "grid_disruption", 0.08},
      });
}

}  // namespace gridrisk
