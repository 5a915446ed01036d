#include "gridrisk/adequacy.hpp"

#include <algorithm>
#include <cmath>

#include "gridrisk/error.hpp"

namespace gridrisk {
namespace {

// Index of the first state whose available capacity is below the load.
// Available capacity falls as outage rises, so failing states form a suffix.
std::size_t first_failing(const Copt& copt, double load) {
  const auto& s = copt.states();
  auto it = std::partition_point(s.begin(), s.end(), [&](const CoptState& st) { return st.available_mw >= load; });
  return static_cast<std::size_t>(it - s.begin());
}

void cross_check(double a, double b, const char* what) {
  if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a)))
    throw Error(std::string("LOLE cross-check failed for ") + what);
}

// D_i = (number of values strictly above state i's available capacity) / per_day
LoleBreakdown per_state(const Copt& copt, std::vector<double> values, double per_day, LoleMethod method) {
  std::sort(values.begin(), values.end());
  LoleBreakdown out;
  out.method = method;
  out.per_state_contrib.reserve(copt.size());
  double total = 0.0;
  for (const auto& st : copt.states()) {
    auto above = values.end() - std::upper_bound(values.begin(), values.end(), st.available_mw);
    double d = static_cast<double>(above) / per_day;
    out.per_state_contrib.push_back({st.outage_mw, st.prob, d});
    total += st.prob * d;
  }
  out.lole_days_per_year = total;
  return out;
}

}  // namespace

std::string_view to_string(LoleMethod m) {
  switch (m) {
    case LoleMethod::DailyPeak:
      return "daily_peak";
    case LoleMethod::Hourly:
      return "hourly";
  }
  return "unknown";
}

double lolp_at_load(const Copt& copt, double load_mw) {
  if (!(load_mw >= 0.0)) throw DomainError("load must be non-negative");
  auto k = first_failing(copt, load_mw);
  return k == copt.size() ? 0.0 : copt.states()[k].cum_prob;
}

LoleBreakdown lole_daily_peak(const Copt& copt, const LoadProfile& profile) {
  auto peaks = profile.daily_peaks();
  auto out = per_state(copt, {peaks.begin(), peaks.end()}, 1.0, LoleMethod::DailyPeak);
  double by_day = 0.0;
  for (double p : peaks) by_day += lolp_at_load(copt, p);
  cross_check(out.lole_days_per_year, by_day, "daily peak");
  out.lole_hours_per_year = out.lole_days_per_year * static_cast<double>(kHoursPerDay);
  return out;
}

LoleBreakdown lole_hourly(const Copt& copt, const LoadProfile& profile) {
  auto hourly = profile.hourly();
  auto out = per_state(copt, {hourly.begin(), hourly.end()}, static_cast<double>(kHoursPerDay), LoleMethod::Hourly);
  double hours = 0.0;
  for (double l : hourly) hours += lolp_at_load(copt, l);
  cross_check(out.lole_days_per_year, hours / static_cast<double>(kHoursPerDay), "hourly");
  out.lole_hours_per_year = hours;
  out.lole_days_per_year = hours / static_cast<double>(kHoursPerDay);
  return out;
}

double eens(const Copt& copt, const LoadProfile& profile) {
  const auto& s = copt.states();
  double total = 0.0;
  for (double load : profile.hourly()) {
    for (auto k = first_failing(copt, load); k < s.size(); ++k) total += s[k].prob * (load - s[k].available_mw);
  }
  return total;
}

double expected_lole_mixture(double lole_base, double lole_cyber, double p_disruption) {
  if (!(p_disruption >= 0.0 && p_disruption <= 1.0)) throw DomainError("disruption probability outside [0,1]");
  if (!(lole_base >= 0.0) || !(lole_cyber >= 0.0)) throw DomainError("LOLE inputs must be non-negative");
  return p_disruption * lole_cyber + (1.0 - p_disruption) * lole_base;
}

}  // namespace gridrisk
