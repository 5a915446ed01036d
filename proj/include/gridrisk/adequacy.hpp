#pragma once

#include <string_view>
#include <vector>

#include "gridrisk/copt.hpp"
#include "gridrisk/fleet.hpp"

namespace gridrisk {

enum class LoleMethod { DailyPeak, Hourly };

std::string_view to_string(LoleMethod m);

struct StateContribution {
  double outage_mw = 0.0;
  double prob = 0.0;
  double duration_days = 0.0;  // days/year the load exceeds this state's available capacity
};

struct LoleBreakdown {
  LoleMethod method = LoleMethod::DailyPeak;
  double lole_days_per_year = 0.0;
  double lole_hours_per_year = 0.0;
  std::vector<StateContribution> per_state_contrib;
};

// P(available < load); a state whose available capacity equals the load is served.
double lolp_at_load(const Copt& copt, double load_mw);

// sum_i P_i x D_i with D_i counted over the 365 daily peaks. Cross-checked against the
// per-day sum of LOLP at each daily peak. lole_hours_per_year is reported as days x 24.
LoleBreakdown lole_daily_peak(const Copt& copt, const LoadProfile& profile);

// Sum of hourly LOLP over 8760 hours; days = hours / 24. D_i is in hours / 24.
LoleBreakdown lole_hourly(const Copt& copt, const LoadProfile& profile);

// Expected energy not served, MWh/year.
double eens(const Copt& copt, const LoadProfile& profile);

// p x lole_cyber + (1 - p) x lole_base
double expected_lole_mixture(double lole_base, double lole_cyber, double p_disruption);

}  // namespace gridrisk
