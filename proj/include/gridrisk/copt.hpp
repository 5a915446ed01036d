#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gridrisk/fleet.hpp"

namespace gridrisk {

struct CoptState {
  double outage_mw = 0.0;
  double available_mw = 0.0;
  double prob = 0.0;
  double cum_prob = 0.0;  // P(outage >= this state's outage)
};

// Capacity outage probability table, states sorted by ascending outage.
class Copt {
 public:
  // Takes (outage, prob) pairs sorted by ascending outage; fills available and cum_prob.
  Copt(std::vector<CoptState> states, double installed_mw, double derating = 0.0);

  const std::vector<CoptState>& states() const noexcept { return states_; }
  std::size_t size() const noexcept { return states_.size(); }
  double installed_mw() const noexcept { return installed_; }
  // Cyber compromise factor already applied to this table (0 for a plain table).
  double derating() const noexcept { return derating_; }
  double total_probability() const noexcept;

 private:
  std::vector<CoptState> states_;
  double installed_;
  double derating_;
};

// Exact mode merges outage levels that coincide up to floating-point noise.
struct CoptOptions {
  // Merge outage levels after rounding to this MW increment; nullopt keeps exact levels.
  std::optional<double> rounding_mw;
};

// Unit-addition convolution:
//   new_prob(x) = old_prob(x) * (1 - q) + old_prob(x - c) * q
Copt build_copt(const Fleet& fleet, const CoptOptions& options = {});

inline constexpr std::size_t kBruteForceMaxUnits = 20;

// Enumerates all 2^n on/off combinations. Throws FleetTooLarge above 20 units.
Copt brute_force_copt(const Fleet& fleet);

// Cyber-induced de-rating: outage-state probabilities x (1 + delta), then renormalised;
// every state's available capacity x (1 - delta). Throws DomainError outside [0,1].
Copt apply_cyber_derating(const Copt& copt, double delta);

// CSV with header `outage_mw,available_mw,prob,cum_prob`.
void write_copt_csv(std::ostream& out, const Copt& copt);

}  // namespace gridrisk
