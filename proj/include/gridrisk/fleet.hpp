#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gridrisk {

inline constexpr std::size_t kHoursPerYear = 8760;
inline constexpr std::size_t kDaysPerYear = 365;
inline constexpr std::size_t kHoursPerDay = 24;

// Two-state unit. V2G aggregates are ordinary units with cyber_exposed set.
struct GeneratorUnit {
  std::string id;
  double capacity_mw = 0.0;
  double forced_outage_rate = 0.0;
  bool cyber_exposed = false;

  double availability() const noexcept { return 1.0 - forced_outage_rate; }
  bool operator==(const GeneratorUnit&) const = default;
};

class Fleet {
 public:
  // Throws ValidationError on empty fleets, duplicate ids, bad capacity or FOR.
  explicit Fleet(std::vector<GeneratorUnit> units);

  const std::vector<GeneratorUnit>& units() const noexcept { return units_; }
  std::size_t size() const noexcept { return units_.size(); }
  double installed_capacity() const noexcept { return installed_; }

  bool operator==(const Fleet& other) const { return units_ == other.units_; }

 private:
  std::vector<GeneratorUnit> units_;
  double installed_ = 0.0;
};

// Fleet file: `id capacity_mw forced_outage_rate cyber_exposed(0|1)` per line, `#` comments.
Fleet load_fleet(std::istream& in);
Fleet load_fleet_file(const std::filesystem::path& path);
void write_fleet(std::ostream& out, const Fleet& fleet);

// Exactly 8760 non-negative hourly MW values.
class LoadProfile {
 public:
  explicit LoadProfile(std::vector<double> hourly_load);

  std::span<const double> hourly() const noexcept { return hourly_; }
  double operator[](std::size_t hour) const { return hourly_[hour]; }
  double peak() const noexcept;

  // Hour of each day's maximum load (earliest hour on ties).
  const std::array<std::size_t, kDaysPerYear>& daily_peak_hours() const noexcept { return daily_peak_hour_; }
  std::array<double, kDaysPerYear> daily_peaks() const;

  bool operator==(const LoadProfile& other) const { return hourly_ == other.hourly_; }

 private:
  std::vector<double> hourly_;
  std::array<std::size_t, kDaysPerYear> daily_peak_hour_{};
};

// One MW value per line. Throws WrongLength, NegativeLoad, ParseError.
LoadProfile load_profile(std::istream& in);
LoadProfile load_profile_file(const std::filesystem::path& path);
void write_profile(std::ostream& out, const LoadProfile& profile);

struct SynthProfileParams {
  double annual_peak_mw = 0.0;
  double base_fraction = 0.0;
  std::size_t peak_hour = 0;
};

// Deterministic shape: peak x (base + (1 - base) x seasonal x diurnal), with a raised-cosine
// seasonal term centred on peak_hour and a raised-cosine diurnal term peaking at 17:00.
// The seasonal x diurnal product is scaled so its yearly maximum is exactly 1.
LoadProfile synth_profile(const SynthProfileParams& params);

}  // namespace gridrisk
