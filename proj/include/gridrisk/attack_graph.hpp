#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace gridrisk {

struct AttackNode {
  std::string id;
  std::string label;
  // Only read for root nodes; stored for non-roots but unused.
  double prior = 0.0;
};

// P(child compromised | parent compromised).
struct AttackEdge {
  std::string parent;
  std::string child;
  double cond_prob = 0.0;
};

// Immutable, validated DAG of compromise stages.
class AttackGraph {
 public:
  // Throws DuplicateNode, DanglingEdge, CycleDetected, ValidationError.
  static AttackGraph build(std::vector<AttackNode> nodes, std::vector<AttackEdge> edges);

  const std::vector<AttackNode>& nodes() const noexcept { return nodes_; }
  const std::vector<AttackEdge>& edges() const noexcept { return edges_; }

  bool contains(const std::string& id) const { return index_.contains(id); }
  const AttackNode& node(const std::string& id) const;
  bool is_root(const std::string& id) const;
  std::vector<std::string> roots() const;

  // nullptr when there is no parent -> child edge
  const AttackEdge* edge(const std::string& parent, const std::string& child) const;

  // All root-to-target node sequences, in deterministic (insertion) order.
  std::vector<std::vector<std::string>> paths_to(const std::string& target) const;

  // Node ids in a topological order (parents before children).
  std::vector<std::string> topological_order() const;

 private:
  AttackGraph() = default;

  std::vector<AttackNode> nodes_;
  std::vector<AttackEdge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_edges_;  // per node, edge indices
  std::vector<std::vector<std::size_t>> in_edges_;
};

// prior(first) x product of cond_prob along consecutive pairs.
// Throws EmptyPath, NotARoot, MissingEdge (or UnknownTarget for unknown ids).
double path_probability(const AttackGraph& graph, std::span<const std::string> path);

struct DisruptionResult {
  double probability = 0.0;
  std::size_t path_count = 0;
  // Set when no root reaches the target; probability is then 0.
  bool unreachable = false;
};

// Noisy-OR over every root-to-target path: 1 - prod(1 - p_path).
// A single chain reproduces the chain-rule product exactly.
DisruptionResult disruption_probability(const AttackGraph& graph, const std::string& target);

// Aggregates independent path probabilities; result does not depend on input order.
double noisy_or(std::vector<double> path_probabilities);

// EV Charger (0.07) -> Aggregator (0.04) -> SCADA (0.06) -> Grid Disruption (0.08)
AttackGraph default_av2g_chain();
inline constexpr const char* kDefaultAttackTarget = "grid_disruption";

}  // namespace gridrisk
