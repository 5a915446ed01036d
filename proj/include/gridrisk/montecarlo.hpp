#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "gridrisk/fleet.hpp"

namespace gridrisk {

// Timed cyber attack on the cyber-exposed units. With active = false no unit is degraded.
struct CyberScenario {
  bool active = true;
  double delta = 0.05;  // compromise factor used by the COPT de-rating transform
  std::size_t window_start = 4020;
  std::size_t window_hours = 720;
  double degraded_availability = 0.88;
  // Replaces 1 - FOR for every unit whenever the degraded value does not apply.
  std::optional<double> nominal_availability;

  static CyberScenario none();

  // Throws DomainError.
  void validate() const;
  bool in_window(std::size_t hour) const noexcept {
    return active && hour >= window_start && hour < window_start + window_hours;
  }
  // Online probability of `unit` at `hour`.
  double availability(const GeneratorUnit& unit, std::size_t hour) const noexcept;
};

// How a replication's year is scored in days of lost load.
enum class LoleSample {
  AnyHour,     // day lost if any of its 24 hours is in deficit
  DailyPeak,   // day lost if the day's peak-load hour is in deficit
  HoursOver24, // deficit hours / 24
};

std::string_view to_string(LoleSample s);
std::optional<LoleSample> parse_lole_sample(std::string_view s);

struct McConfig {
  std::size_t replications = 10'000;
  std::uint64_t seed = 4380;
  std::size_t workers = 1;
  LoleSample lole_sample = LoleSample::AnyHour;
  double histogram_bin_days = 1.0;

  void validate() const;
};

struct YearTrace {
  std::vector<double> hourly_available;
  std::vector<bool> hourly_deficit;
  std::vector<double> hourly_online_fraction;
};

struct LoleEstimate {
  LoleSample sample = LoleSample::AnyHour;
  double mean = 0.0;
  double std_error = 0.0;
  double bin_width = 1.0;
  std::vector<std::pair<double, std::size_t>> histogram;  // (bin lower edge, count)
  std::vector<double> replication_values;
};

// Everything one pass over the replications produces.
struct SimulationResult {
  LoleEstimate lole;
  std::vector<double> lolp;          // per-hour deficit frequency
  std::vector<double> availability;  // per-hour mean online fraction
};

// Replication 0 of the stream keyed by `seed`. Each (hour, unit) consumes one draw, in that
// order, whatever the scenario, so paired scenarios share random numbers.
YearTrace simulate_year(const Fleet& fleet, const LoadProfile& profile, const CyberScenario& scenario,
                        std::uint64_t seed);

SimulationResult simulate(const Fleet& fleet, const LoadProfile& profile, const CyberScenario& scenario,
                          const McConfig& config);

LoleEstimate estimate_lole(const Fleet& fleet, const LoadProfile& profile, const CyberScenario& scenario,
                           const McConfig& config);

std::vector<double> lolp_series(const Fleet& fleet, const LoadProfile& profile, const CyberScenario& scenario,
                                const McConfig& config);

std::vector<double> availability_series(const Fleet& fleet, const CyberScenario& scenario, const McConfig& config);

// Bins with fixed width starting at floor(min / width) * width; empty bins in between are kept.
std::vector<std::pair<double, std::size_t>> histogram(const std::vector<double>& values, double bin_width);

// Closed-form counterparts of the sampled quantities, from unit-addition COPTs of the
// nominal and in-window fleets. They are what the estimators converge to.
std::vector<double> exact_lolp_series(const Fleet& fleet, const LoadProfile& profile, const CyberScenario& scenario);
double exact_lole(const Fleet& fleet, const LoadProfile& profile, const CyberScenario& scenario, LoleSample sample);
std::vector<double> exact_availability_series(const Fleet& fleet, const CyberScenario& scenario);

// Fleet whose forced outage rates reflect the scenario inside (or outside) the window.
Fleet effective_fleet(const Fleet& fleet, const CyberScenario& scenario, bool in_window);

}  // namespace gridrisk
