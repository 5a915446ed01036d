#pragma once

// Shared generators and fixtures for the test binaries.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gridrisk/attack_graph.hpp"
#include "gridrisk/copt.hpp"
#include "gridrisk/fleet.hpp"

namespace gridrisk::testing {

inline std::filesystem::path source_dir() { return GRIDRISK_SOURCE_DIR; }

inline LoadProfile flat_profile(double mw) { return LoadProfile(std::vector<double>(kHoursPerYear, mw)); }

// Capacities on a 1 MW grid (so brute-force sums are exact) with a few FOR values that
// exercise both common and odd probabilities.
inline Fleet random_fleet(std::mt19937_64& rng, std::size_t min_units, std::size_t max_units,
                          bool allow_extreme_q = false) {
  std::uniform_int_distribution<std::size_t> n_dist(min_units, max_units);
  std::uniform_int_distribution<int> cap_dist(1, 400);
  std::uniform_real_distribution<double> q_dist(0.005, 0.3);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution rare(0.08);
  const std::size_t n = n_dist(rng);
  std::vector<GeneratorUnit> units;
  for (std::size_t i = 0; i < n; ++i) {
    double q = q_dist(rng);
    if (allow_extreme_q && rare(rng)) q = coin(rng) ? 0.0 : 1.0;
    units.push_back({"g" + std::to_string(i), static_cast<double>(cap_dist(rng)), q, coin(rng)});
  }
  return Fleet(std::move(units));
}

// Direct enumeration: P(available < load), with no table in between.
inline double enumerate_lolp(const Fleet& fleet, double load) {
  const auto& u = fleet.units();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << u.size()); ++mask) {
    double p = 1.0, avail = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      bool out = (mask >> i) & 1U;
      p *= out ? u[i].forced_outage_rate : 1.0 - u[i].forced_outage_rate;
      if (!out) avail += u[i].capacity_mw;
    }
    if (avail < load) total += p;
  }
  return total;
}

struct RandomGraph {
  std::vector<AttackNode> nodes;
  std::vector<AttackEdge> edges;
};

// Random directed graph on up to `max_nodes` nodes. With `dag` the edges follow a random
// permutation order, otherwise edges are unconstrained (and may or may not form cycles).
inline RandomGraph random_graph(std::mt19937_64& rng, std::size_t max_nodes, bool dag) {
  std::uniform_int_distribution<std::size_t> n_dist(1, max_nodes);
  std::uniform_real_distribution<double> p_dist(0.0, 1.0);
  const std::size_t n = n_dist(rng);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;

  RandomGraph g;
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back({"n" + std::to_string(i), "node " + std::to_string(i), p_dist(rng)});
  std::bernoulli_distribution keep(n > 1 ? 1.5 / static_cast<double>(n) : 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !keep(rng)) continue;
      if (dag && rank[a] > rank[b]) continue;
      g.edges.push_back({g.nodes[a].id, g.nodes[b].id, p_dist(rng)});
    }
  return g;
}

// Kahn's algorithm on index form: true iff the edge set is acyclic.
inline bool is_acyclic(const RandomGraph& g) {
  const std::size_t n = g.nodes.size();
  auto idx = [&](const std::string& id) { return static_cast<std::size_t>(std::stoul(id.substr(1))); };
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& e : g.edges) {
    adj[idx(e.parent)].push_back(idx(e.child));
    ++indeg[idx(e.child)];
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    auto v = ready.back();
    ready.pop_back();
    ++seen;
    for (auto w : adj[v])
      if (--indeg[w] == 0) ready.push_back(w);
  }
  return seen == n;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("gridrisk_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gridrisk::testing
