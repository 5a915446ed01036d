#include "gridrisk/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <thread>

#include "gridrisk/adequacy.hpp"
#include "gridrisk/copt.hpp"
#include "gridrisk/error.hpp"

namespace gridrisk {
namespace {

constexpr double kTwo53 = 9007199254740992.0;

// xoshiro256++ (Blackman & Vigna), seeded through std::seed_seq.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  explicit Xoshiro256pp(std::seed_seq& seq) {
    std::array<std::uint32_t, 8> words{};
    seq.generate(words.begin(), words.end());
    for (std::size_t i = 0; i < 4; ++i) s_[i] = (std::uint64_t{words[2 * i]} << 32) | words[2 * i + 1];
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

// Independent substream for replication r of a run seeded with `seed`.
Xoshiro256pp replication_stream(std::uint64_t seed, std::uint64_t r) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
  return Xoshiro256pp(seq);
}

// Replications are simulated kLanes at a time. One xoshiro stream is a serial dependency
// chain; stepping several independent streams together lets the CPU overlap them (and the
// compiler vectorise), several times faster than one stream at a time. Lane k produces
// exactly the draws its own Xoshiro256pp would.
constexpr std::size_t kLanes = 8;

struct StreamLanes {
  std::array<std::uint64_t, kLanes> s0{}, s1{}, s2{}, s3{};

  void set(std::size_t k, const Xoshiro256pp& g) {
    const auto& st = g.state();
    s0[k] = st[0];
    s1[k] = st[1];
    s2[k] = st[2];
    s3[k] = st[3];
  }
};

// A unit is online when the top 53 bits of its draw, read as u in [0,1), satisfy u < a.
// Since a * 2^53 is exact, u < a  <=>  bits < ceil(a * 2^53).
std::uint64_t online_threshold(double a) { return static_cast<std::uint64_t>(std::ceil(a * kTwo53)); }

struct Plan {
  std::vector<double> capacity;
  std::vector<std::uint64_t> nominal;
  std::vector<std::uint64_t> attacked;
  std::vector<bool> in_window;
  std::span<const double> load;  // empty when only availability is wanted
  std::array<std::size_t, kDaysPerYear> peak_hour{};
};

Plan make_plan(const Fleet& fleet, const LoadProfile* profile, const CyberScenario& scenario) {
  scenario.validate();
  Plan p;
  const std::size_t window_probe = scenario.active ? scenario.window_start : 0;
  for (const auto& u : fleet.units()) {
    p.capacity.push_back(u.capacity_mw);
    // Evaluate availability at an out-of-window hour and at the window start.
    CyberScenario off = scenario;
    off.active = false;
    p.nominal.push_back(online_threshold(off.availability(u, 0)));
    p.attacked.push_back(online_threshold(scenario.availability(u, window_probe)));
  }
  p.in_window.resize(kHoursPerYear);
  for (std::size_t h = 0; h < kHoursPerYear; ++h) p.in_window[h] = scenario.in_window(h);
  if (profile != nullptr) {
    p.load = profile->hourly();
    p.peak_hour = profile->daily_peak_hours();
  }
  return p;
}

using LaneMw = std::array<double, kLanes>;
using LaneCount = std::array<std::uint32_t, kLanes>;

// Runs kLanes replicated years side by side. For each hour, `sink` receives the available
// MW and the number of units online in every lane.
template <class Sink>
void run_years(const Plan& plan, StreamLanes& g, Sink&& sink) {
  const std::size_t n = plan.capacity.size();
  for (std::size_t h = 0; h < kHoursPerYear; ++h) {
    const auto& thr = plan.in_window[h] ? plan.attacked : plan.nominal;
    LaneMw available{};
    LaneCount online{};
    for (std::size_t u = 0; u < n; ++u) {
      const std::uint64_t threshold = thr[u];
      const double capacity = plan.capacity[u];
      for (std::size_t k = 0; k < kLanes; ++k) {
        const std::uint64_t x = std::rotl(g.s0[k] + g.s3[k], 23) + g.s0[k];
        const std::uint64_t t = g.s1[k] << 17;
        g.s2[k] ^= g.s0[k];
        g.s3[k] ^= g.s1[k];
        g.s1[k] ^= g.s2[k];
        g.s0[k] ^= g.s3[k];
        g.s2[k] ^= t;
        g.s3[k] = std::rotl(g.s3[k], 45);
        const bool up = (x >> 11) < threshold;
        available[k] += up ? capacity : 0.0;
        online[k] += up;
      }
    }
    sink(h, available, online);
  }
}

double score_year(const Plan& plan, const std::vector<unsigned char>& deficit, LoleSample sample) {
  std::size_t lost = 0;
  switch (sample) {
    case LoleSample::AnyHour:
      for (std::size_t d = 0; d < kDaysPerYear; ++d) {
        auto first = deficit.begin() + static_cast<std::ptrdiff_t>(d * kHoursPerDay);
        if (std::find(first, first + kHoursPerDay, 1) != first + kHoursPerDay) ++lost;
      }
      return static_cast<double>(lost);
    case LoleSample::DailyPeak:
      for (auto h : plan.peak_hour) lost += deficit[h];
      return static_cast<double>(lost);
    case LoleSample::HoursOver24:
      for (auto f : deficit) lost += f;
      return static_cast<double>(lost) / static_cast<double>(kHoursPerDay);
  }
  return 0.0;
}

struct Tally {
  std::vector<std::uint64_t> deficit_count = std::vector<std::uint64_t>(kHoursPerYear);
  std::vector<std::uint64_t> online_count = std::vector<std::uint64_t>(kHoursPerYear);
};

// Replications are strided over workers. Per-replication outputs are stored by index and
// the hourly tallies are integer sums, so results do not depend on the worker count.
SimulationResult run(const Fleet& fleet, const LoadProfile* profile, const CyberScenario& scenario,
                     const McConfig& config) {
  config.validate();
  const Plan plan = make_plan(fleet, profile, scenario);
  const bool with_load = profile != nullptr;
  const std::size_t reps = config.replications;
  const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, reps);

  std::vector<double> values(reps);
  std::vector<Tally> tallies(workers);
  auto work = [&](std::size_t w) {
    Tally& t = tallies[w];
    std::vector<std::array<unsigned char, kLanes>> deficit(kHoursPerYear);
    std::vector<unsigned char> lane_deficit(kHoursPerYear);
    // this worker's replications: w, w + workers, w + 2 * workers, ...
    for (std::size_t first = w; first < reps; first += kLanes * workers) {
      std::array<std::size_t, kLanes> rep{};
      std::size_t active = 0;
      StreamLanes lanes;
      for (std::size_t k = 0; k < kLanes; ++k) {
        const std::size_t r = first + k * workers;
        if (r < reps) {
          rep[active++] = r;
          lanes.set(k, replication_stream(config.seed, r));
        } else {
          lanes.set(k, replication_stream(config.seed, rep[0]));  // idle lane, result discarded
        }
      }
      run_years(plan, lanes, [&](std::size_t h, const LaneMw& available, const LaneCount& online) {
        for (std::size_t k = 0; k < active; ++k) t.online_count[h] += online[k];
        if (with_load) {
          for (std::size_t k = 0; k < active; ++k) {
            deficit[h][k] = plan.load[h] > available[k];
            t.deficit_count[h] += deficit[h][k];
          }
        }
      });
      if (!with_load) continue;
      for (std::size_t k = 0; k < active; ++k) {
        for (std::size_t h = 0; h < kHoursPerYear; ++h) lane_deficit[h] = deficit[h][k];
        values[rep[k]] = score_year(plan, lane_deficit, config.lole_sample);
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  SimulationResult out;
  std::vector<std::uint64_t> deficit(kHoursPerYear), online(kHoursPerYear);
  for (const auto& t : tallies) {
    for (std::size_t h = 0; h < kHoursPerYear; ++h) {
      deficit[h] += t.deficit_count[h];
      online[h] += t.online_count[h];
    }
  }
  const double r = static_cast<double>(reps);
  const double unit_reps = r * static_cast<double>(fleet.size());
  out.availability.resize(kHoursPerYear);
  for (std::size_t h = 0; h < kHoursPerYear; ++h) out.availability[h] = static_cast<double>(online[h]) / unit_reps;
  if (!with_load) return out;

  out.lolp.resize(kHoursPerYear);
  for (std::size_t h = 0; h < kHoursPerYear; ++h) out.lolp[h] = static_cast<double>(deficit[h]) / r;

  auto& est = out.lole;
  est.sample = config.lole_sample;
  est.bin_width = config.histogram_bin_days;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / r;
  if (reps > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.std_error = std::sqrt(ss / (r - 1.0)) / std::sqrt(r);
  }
  est.histogram = histogram(values, config.histogram_bin_days);
  est.replication_values = std::move(values);
  return out;
}

}  // namespace

CyberScenario CyberScenario::none() {
  CyberScenario s;
  s.active = false;
  s.delta = 0.0;
  return s;
}

void CyberScenario::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(delta)) throw DomainError("cyber.delta must lie in [0,1]");
  if (!prob(degraded_availability)) throw DomainError("cyber.degraded_availability must lie in [0,1]");
  if (nominal_availability && !prob(*nominal_availability))
    throw DomainError("cyber.nominal_availability must lie in [0,1]");
  if (window_hours == 0) throw DomainError("cyber.window_hours must be positive");
  if (window_start >= kHoursPerYear || window_hours > kHoursPerYear - window_start)
    throw DomainError("cyber attack window must end by hour 8760");
}

double CyberScenario::availability(const GeneratorUnit& unit, std::size_t hour) const noexcept {
  if (unit.cyber_exposed && in_window(hour)) return degraded_availability;
  return nominal_availability ? *nominal_availability : unit.availability();
}

std::string_view to_string(LoleSample s) {
  switch (s) {
    case LoleSample::AnyHour:
      return "any_hour";
    case LoleSample::DailyPeak:
      return "daily_peak";
    case LoleSample::HoursOver24:
      return "hours_over_24";
  }
  return "unknown";
}

std::optional<LoleSample> parse_lole_sample(std::string_view s) {
  for (auto v : {LoleSample::AnyHour, LoleSample::DailyPeak, LoleSample::HoursOver24}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

void McConfig::validate() const {
  if (replications == 0) throw DomainError("mc.replications must be at least 1");
  if (workers == 0) throw DomainError("mc.workers must be at least 1");
  if (!(histogram_bin_days > 0.0) || !std::isfinite(histogram_bin_days))
    throw DomainError("histogram bin width must be positive");
}

YearTrace simulate_year(const Fleet& fleet, const LoadProfile& profile, const CyberScenario& scenario,
                        std::uint64_t seed) {
  const Plan plan = make_plan(fleet, &profile, scenario);
  YearTrace t;
  t.hourly_available.resize(kHoursPerYear);
  t.hourly_deficit.resize(kHoursPerYear);
  t.hourly_online_fraction.resize(kHoursPerYear);
  const double n = static_cast<double>(fleet.size());
  StreamLanes lanes;
  const auto rng = replication_stream(seed, 0);
  for (std::size_t k = 0; k < kLanes; ++k) lanes.set(k, rng);  // only lane 0 is read
  run_years(plan, lanes, [&](std::size_t h, const LaneMw& available, const LaneCount& online) {
    t.hourly_available[h] = available[0];
    t.hourly_deficit[h] = plan.load[h] > available[0];
    t.hourly_online_fraction[h] = static_cast<double>(online[0]) / n;
  });
  return t;
}

SimulationResult simulate(const Fleet& fleet, const LoadProfile& profile, const CyberScenario& scenario,
                          const McConfig& config) {
  return run(fleet, &profile, scenario, config);
}

LoleEstimate estimate_lole(const Fleet& fleet, const LoadProfile& profile, const CyberScenario& scenario,
                           const McConfig& config) {
  return run(fleet, &profile, scenario, config).lole;
}

std::vector<double> lolp_series(const Fleet& fleet, const LoadProfile& profile, const CyberScenario& scenario,
                                const McConfig& config) {
  return run(fleet, &profile, scenario, config).lolp;
}

std::vector<double> availability_series(const Fleet& fleet, const CyberScenario& scenario, const McConfig& config) {
  return run(fleet, nullptr, scenario, config).availability;
}

std::vector<std::pair<double, std::size_t>> histogram(const std::vector<double>& values, double bin_width) {
  if (!(bin_width > 0.0)) throw DomainError("histogram bin width must be positive");
  if (values.empty()) return {};
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double first = std::floor(*lo_it / bin_width);
  const auto bins = static_cast<std::size_t>(std::floor(*hi_it / bin_width) - first) + 1;
  std::vector<std::pair<double, std::size_t>> out(bins);
  for (std::size_t i = 0; i < bins; ++i) out[i].first = (first + static_cast<double>(i)) * bin_width;
  for (double v : values) {
    auto i = static_cast<std::size_t>(std::floor(v / bin_width) - first);
    ++out[std::min(i, bins - 1)].second;
  }
  return out;
}

Fleet effective_fleet(const Fleet& fleet, const CyberScenario& scenario, bool in_window) {
  std::vector<GeneratorUnit> units = fleet.units();
  const bool attacked = in_window && scenario.active;
  for (auto& u : units) {
    if (attacked && u.cyber_exposed) {
      u.forced_outage_rate = 1.0 - scenario.degraded_availability;
    } else if (scenario.nominal_availability) {
      u.forced_outage_rate = 1.0 - *scenario.nominal_availability;
    }
  }
  return Fleet(std::move(units));
}

std::vector<double> exact_lolp_series(const Fleet& fleet, const LoadProfile& profile, const CyberScenario& scenario) {
  scenario.validate();
  const Copt nominal = build_copt(effective_fleet(fleet, scenario, false));
  const Copt attacked = build_copt(effective_fleet(fleet, scenario, true));
  std::vector<double> out(kHoursPerYear);
  for (std::size_t h = 0; h < kHoursPerYear; ++h)
    out[h] = lolp_at_load(scenario.in_window(h) ? attacked : nominal, profile[h]);
  return out;
}

double exact_lole(const Fleet& fleet, const LoadProfile& profile, const CyberScenario& scenario, LoleSample sample) {
  const auto lolp = exact_lolp_series(fleet, profile, scenario);
  double total = 0.0;
  switch (sample) {
    case LoleSample::AnyHour:
      // hours are sampled independently: P(day lost) = 1 - prod(1 - LOLP_h)
      for (std::size_t d = 0; d < kDaysPerYear; ++d) {
        double log_served = 0.0;
        for (std::size_t k = 0; k < kHoursPerDay; ++k) log_served += std::log1p(-lolp[d * kHoursPerDay + k]);
        total += -std::expm1(log_served);
      }
      return total;
    case LoleSample::DailyPeak:
      for (auto h : profile.daily_peak_hours()) total += lolp[h];
      return total;
    case LoleSample::HoursOver24:
      for (double p : lolp) total += p;
      return total / static_cast<double>(kHoursPerDay);
  }
  return total;
}

std::vector<double> exact_availability_series(const Fleet& fleet, const CyberScenario& scenario) {
  scenario.validate();
  std::vector<double> out(kHoursPerYear);
  for (std::size_t h = 0; h < kHoursPerYear; ++h) {
    double s = 0.0;
    for (const auto& u : fleet.units()) s += scenario.availability(u, h);
    out[h] = s / static_cast<double>(fleet.size());
  }
  return out;
}

}  // namespace gridrisk
