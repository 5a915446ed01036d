#include "gridrisk/fleet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "gridrisk/error.hpp"
#include "gridrisk/numfmt.hpp"

namespace gridrisk {

Fleet::Fleet(std::vector<GeneratorUnit> units) : units_(std::move(units)) {
  if (units_.empty()) throw ValidationError("fleet has no units");
  std::unordered_set<std::string> ids;
  for (const auto& u : units_) {
    if (u.id.empty()) throw ValidationError("fleet unit with empty id");
    if (!ids.insert(u.id).second) throw ValidationError("duplicate unit id '" + u.id + "'");
    if (!(u.capacity_mw > 0.0) || !std::isfinite(u.capacity_mw))
      throw ValidationError("unit '" + u.id + "': capacity must be positive");
    if (!(u.forced_outage_rate >= 0.0 && u.forced_outage_rate <= 1.0))
      throw ValidationError("unit '" + u.id + "': forced outage rate outside [0,1]");
    installed_ += u.capacity_mw;
  }
}

Fleet load_fleet(std::istream& in) {
  std::vector<GeneratorUnit> units;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;

    std::istringstream fields{std::string(body)};
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    auto where = [&](const char* field) { return "fleet line " + std::to_string(lineno) + ", field '" + field + "'"; };
    if (tok.size() != 4)
      throw ParseError("fleet line " + std::to_string(lineno) + ": expected 4 fields, found " +
                       std::to_string(tok.size()));

    GeneratorUnit u;
    u.id = tok[0];
    auto cap = parse_double(tok[1]);
    if (!cap) throw ParseError(where("capacity_mw") + ": not a number: " + tok[1]);
    auto q = parse_double(tok[2]);
    if (!q) throw ParseError(where("forced_outage_rate") + ": not a number: " + tok[2]);
    if (tok[3] != "0" && tok[3] != "1") throw ParseError(where("cyber_exposed") + ": expected 0 or 1, found " + tok[3]);
    u.capacity_mw = *cap;
    u.forced_outage_rate = *q;
    u.cyber_exposed = tok[3] == "1";
    units.push_back(std::move(u));
  }
  return Fleet(std::move(units));
}

Fleet load_fleet_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open fleet file " + path.string());
  try {
    return load_fleet(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_fleet(std::ostream& out, const Fleet& fleet) {
  out << "# id capacity_mw forced_outage_rate cyber_exposed\n";
  for (const auto& u : fleet.units()) {
    out << u.id << ' ' << format_double(u.capacity_mw) << ' ' << format_double(u.forced_outage_rate) << ' '
        << (u.cyber_exposed ? 1 : 0) << '\n';
  }
}

LoadProfile::LoadProfile(std::vector<double> hourly_load) : hourly_(std::move(hourly_load)) {
  if (hourly_.size() != kHoursPerYear)
    throw WrongLength("load profile needs " + std::to_string(kHoursPerYear) + " hourly values, found " +
                      std::to_string(hourly_.size()));
  for (std::size_t h = 0; h < hourly_.size(); ++h) {
    if (!(hourly_[h] >= 0.0) || !std::isfinite(hourly_[h])) throw NegativeLoad(h);
  }
  for (std::size_t d = 0; d < kDaysPerYear; ++d) {
    auto first = hourly_.begin() + static_cast<std::ptrdiff_t>(d * kHoursPerDay);
    auto it = std::max_element(first, first + kHoursPerDay);
    daily_peak_hour_[d] = static_cast<std::size_t>(it - hourly_.begin());
  }
}

double LoadProfile::peak() const noexcept { return *std::max_element(hourly_.begin(), hourly_.end()); }

std::array<double, kDaysPerYear> LoadProfile::daily_peaks() const {
  std::array<double, kDaysPerYear> out{};
  for (std::size_t d = 0; d < kDaysPerYear; ++d) out[d] = hourly_[daily_peak_hour_[d]];
  return out;
}

LoadProfile load_profile(std::istream& in) {
  std::vector<double> values;
  values.reserve(kHoursPerYear);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto v = parse_double(body);
    if (!v) throw ParseError("load line " + std::to_string(lineno) + ": not a number: " + std::string(body));
    if (*v < 0.0) throw NegativeLoad(values.size());
    values.push_back(*v);
  }
  return LoadProfile(std::move(values));
}

LoadProfile load_profile_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open load file " + path.string());
  return load_profile(in);
}

void write_profile(std::ostream& out, const LoadProfile& profile) {
  for (double v : profile.hourly()) out << format_double(v) << '\n';
}

LoadProfile synth_profile(const SynthProfileParams& p) {
  if (!(p.annual_peak_mw > 0.0) || !std::isfinite(p.annual_peak_mw))
    throw DomainError("synth profile: annual_peak_mw must be positive");
  if (!(p.base_fraction > 0.0 && p.base_fraction <= 1.0))
    throw DomainError("synth profile: base_fraction must lie in (0,1]");
  if (p.peak_hour >= kHoursPerYear) throw DomainError("synth profile: peak_hour must be below 8760");

  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> shape(kHoursPerYear);
  for (std::size_t h = 0; h < kHoursPerYear; ++h) {
    double offset = static_cast<double>(h) - static_cast<double>(p.peak_hour);
    double seasonal = 0.5 * (1.0 + std::cos(two_pi * offset / static_cast<double>(kHoursPerYear)));
    double hour_of_day = static_cast<double>(h % kHoursPerDay);
    double diurnal = 0.5 * (1.0 + std::cos(two_pi * (hour_of_day - 17.0) / 24.0));
    shape[h] = seasonal * diurnal;
  }
  const double top = *std::max_element(shape.begin(), shape.end());
  const double swing = p.annual_peak_mw * (1.0 - p.base_fraction);
  std::vector<double> load(kHoursPerYear);
  for (std::size_t h = 0; h < kHoursPerYear; ++h) {
    // written as peak - swing * (1 - x) so the maximum hour equals the peak exactly
    load[h] = p.annual_peak_mw - swing * (1.0 - shape[h] / top);
  }
  return LoadProfile(std::move(load));
}

}  // namespace gridrisk
