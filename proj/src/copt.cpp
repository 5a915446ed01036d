#include "gridrisk/copt.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>

#include "gridrisk/error.hpp"
#include "gridrisk/numfmt.hpp"

namespace gridrisk {
namespace {

struct Level {
  double outage;
  double prob;
};

double merge_tolerance(double installed) { return 1e-9 * std::max(1.0, installed); }

double snap(double outage, const CoptOptions& options) {
  if (!options.rounding_mw) return outage;
  return std::round(outage / *options.rounding_mw) * *options.rounding_mw;
}

// Collapses a sorted level list: equal (within tolerance) outages are summed, zero
// probabilities dropped.
std::vector<Level> collapse(const std::vector<Level>& sorted, double tol) {
  std::vector<Level> out;
  out.reserve(sorted.size());
  for (const auto& l : sorted) {
    if (l.prob == 0.0) continue;
    if (!out.empty() && l.outage - out.back().outage <= tol) {
      out.back().prob += l.prob;
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Copt to_copt(const std::vector<Level>& levels, double installed) {
  std::vector<CoptState> states;
  states.reserve(levels.size());
  for (const auto& l : levels) states.push_back({l.outage, installed - l.outage, l.prob, 0.0});
  return Copt(std::move(states), installed);
}

}  // namespace

Copt::Copt(std::vector<CoptState> states, double installed_mw, double derating)
    : states_(std::move(states)), installed_(installed_mw), derating_(derating) {
  double tail = 0.0;
  for (auto it = states_.rbegin(); it != states_.rend(); ++it) {
    if (!(it->prob >= 0.0 && it->prob <= 1.0)) throw ValidationError("COPT state probability outside [0,1]");
    tail += it->prob;
    it->cum_prob = std::min(tail, 1.0);
  }
  // Every state has outage >= the first one's, so this is 1 by definition; the rounded
  // suffix sum can land a few ulps short, which would make a total shortfall look < 1.
  if (!states_.empty()) states_.front().cum_prob = 1.0;
  for (std::size_t i = 1; i < states_.size(); ++i) {
    if (states_[i].outage_mw < states_[i - 1].outage_mw)
      throw ValidationError("COPT states must be sorted by ascending outage");
  }
}

double Copt::total_probability() const noexcept {
  double s = 0.0;
  for (auto it = states_.rbegin(); it != states_.rend(); ++it) s += it->prob;
  return s;
}

Copt build_copt(const Fleet& fleet, const CoptOptions& options) {
  if (options.rounding_mw && !(*options.rounding_mw > 0.0))
    throw DomainError("COPT rounding increment must be positive");
  const double tol = merge_tolerance(fleet.installed_capacity());

  std::vector<Level> table{{0.0, 1.0}};
  std::vector<Level> merged;
  for (const auto& unit : fleet.units()) {
    const double q = unit.forced_outage_rate;
    const double a = 1.0 - q;
    merged.clear();
    merged.reserve(table.size() * 2);
    // Both halves are sorted; a linear merge keeps the result sorted.
    std::size_t i = 0, j = 0;
    while (i < table.size() || j < table.size()) {
      if (j == table.size() ||
          (i < table.size() && table[i].outage <= snap(table[j].outage + unit.capacity_mw, options))) {
        merged.push_back({table[i].outage, table[i].prob * a});
        ++i;
      } else {
        merged.push_back({snap(table[j].outage + unit.capacity_mw, options), table[j].prob * q});
        ++j;
      }
    }
    table = collapse(merged, tol);
  }
  return to_copt(table, fleet.installed_capacity());
}

Copt brute_force_copt(const Fleet& fleet) {
  const auto& units = fleet.units();
  if (units.size() > kBruteForceMaxUnits)
    throw FleetTooLarge("brute-force COPT supports at most " + std::to_string(kBruteForceMaxUnits) +
                        " units, fleet has " + std::to_string(units.size()));
  const std::size_t combos = std::size_t{1} << units.size();
  std::vector<Level> all;
  all.reserve(combos);
  for (std::size_t mask = 0; mask < combos; ++mask) {
    double prob = 1.0;
    double outage = 0.0;
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (mask & (std::size_t{1} << u)) {
        prob *= units[u].forced_outage_rate;
        outage += units[u].capacity_mw;
      } else {
        prob *= 1.0 - units[u].forced_outage_rate;
      }
    }
    all.push_back({outage, prob});
  }
  std::stable_sort(all.begin(), all.end(), [](const Level& x, const Level& y) { return x.outage < y.outage; });
  return to_copt(collapse(all, merge_tolerance(fleet.installed_capacity())), fleet.installed_capacity());
}

Copt apply_cyber_derating(const Copt& copt, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("cyber compromise factor must lie in [0,1]");

  double outage_mass = 0.0;
  for (const auto& s : copt.states()) {
    if (s.outage_mw > 0.0) outage_mass += s.prob;
  }
  // Inflated mass is 1 + delta * outage_mass; dividing by it restores sum 1 (and is exactly 1 at delta 0).
  const double norm = 1.0 + delta * outage_mass;
  std::vector<CoptState> states;
  states.reserve(copt.size());
  for (const auto& s : copt.states()) {
    CoptState d = s;
    const double inflated = s.outage_mw > 0.0 ? s.prob * (1.0 + delta) : s.prob;
    d.prob = inflated / norm;
    d.available_mw = s.available_mw * (1.0 - delta);
    d.outage_mw = s.outage_mw + delta * s.available_mw;  // installed - derated available
    states.push_back(d);
  }
  // (1 - d1)(1 - d2) = 1 - combined; written so a first application stores delta exactly
  const double combined = copt.derating() + delta - copt.derating() * delta;
  return Copt(std::move(states), copt.installed_mw(), combined);
}

void write_copt_csv(std::ostream& out, const Copt& copt) {
  out << "outage_mw,available_mw,prob,cum_prob\n";
  for (const auto& s : copt.states()) {
    out << format_double(s.outage_mw) << ',' << format_double(s.available_mw) << ',' << format_double(s.prob) << ','
        << format_double(s.cum_prob) << '\n';
  }
}

}  // namespace gridrisk
