#include "gridrisk/report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gridrisk/error.hpp"
#include "gridrisk/numfmt.hpp"

namespace gridrisk {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kFailedMarker = "FAILED";
constexpr const char* kManifest = "manifest.json";
constexpr const char* kResolved = "scenario.resolved.toml";
constexpr const char* kLoadCopy = "load.txt";

const std::vector<std::string> kArtifacts = {
    kManifest,           kResolved,           kLoadCopy,           "attack.json",
    "copt_base.csv",     "copt_derated.csv",  "lole_daily_peak_base.json", "lole_hourly_base.json",
    "lole_daily_peak_derated.json", "lole_hourly_derated.json", "adequacy.json", "mc_lole.json",
    "lole_hist.csv",     "lole_samples.csv",  "lolp_series.csv",   "lolp_exact.csv",
    "availability_series.csv",
};

constexpr Step kAllSteps[] = {Step::Attack, Step::Copt, Step::Lole, Step::Simulate};

std::optional<Step> parse_step(std::string_view s) {
  for (auto st : kAllSteps) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <class F>
void write_file(const fs::path& p, F&& body) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  body(out);
  out.flush();
  if (!out) throw Error("write failed for " + p.string());
}

// Rows of a CSV file after checking its header.
std::vector<std::vector<std::string>> read_csv(const fs::path& p, std::string_view header) {
  std::istringstream in(read_file(p));
  std::string line;
  if (!std::getline(in, line) || trim(line) != header)
    throw ParseError(p.string() + ": expected header '" + std::string(header) + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(std::string(trim(line)));
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(std::move(cells));
  }
  return rows;
}

double cell(const std::vector<std::string>& row, std::size_t i, const fs::path& p) {
  if (i >= row.size()) throw ParseError(p.string() + ": short row");
  auto v = parse_double(row[i]);
  if (!v) throw ParseError(p.string() + ": not a number: " + row[i]);
  return *v;
}

std::vector<double> read_series(const fs::path& p) {
  auto rows = read_csv(p, "hour,value");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(cell(r, 1, p));
  return out;
}

Copt read_copt_csv(const fs::path& p, double installed, double derating) {
  std::vector<CoptState> states;
  for (const auto& r : read_csv(p, "outage_mw,available_mw,prob,cum_prob"))
    states.push_back({cell(r, 0, p), cell(r, 1, p), cell(r, 2, p), 0.0});
  return Copt(std::move(states), installed, derating);
}

json breakdown_json(const LoleBreakdown& b, std::string_view table) {
  json contrib = json::array();
  for (const auto& c : b.per_state_contrib)
    contrib.push_back({{"outage_mw", c.outage_mw}, {"prob", c.prob}, {"duration_days", c.duration_days}});
  return {{"method", to_string(b.method)},
          {"copt", table},
          {"lole_days_per_year", b.lole_days_per_year},
          {"lole_hours_per_year", b.lole_hours_per_year},
          {"per_state_contrib", std::move(contrib)}};
}

LoleBreakdown breakdown_from_json(const json& j) {
  LoleBreakdown b;
  b.method = j.at("method") == "hourly" ? LoleMethod::Hourly : LoleMethod::DailyPeak;
  b.lole_days_per_year = j.at("lole_days_per_year");
  b.lole_hours_per_year = j.at("lole_hours_per_year");
  for (const auto& c : j.at("per_state_contrib"))
    b.per_state_contrib.push_back({c.at("outage_mw"), c.at("prob"), c.at("duration_days")});
  return b;
}

void write_json(const fs::path& p, const json& j) {
  write_file(p, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

json read_json(const fs::path& p) {
  try {
    return json::parse(read_file(p));
  } catch (const json::exception& e) {
    throw ParseError(p.string() + ": " + e.what());
  }
}

std::string missing_step_message(Figure f) {
  switch (f) {
    case Figure::CoptCompare:
      return "figure copt_compare needs the COPT tables, but the copt step did not run for this bundle";
    default:
      return "figure " + std::string(to_string(f)) +
             " needs Monte Carlo output, but the simulate step did not run for this bundle";
  }
}

}  // namespace

std::string_view to_string(Step s) {
  switch (s) {
    case Step::Attack:
      return "attack";
    case Step::Copt:
      return "copt";
    case Step::Lole:
      return "lole";
    case Step::Simulate:
      return "simulate";
  }
  return "unknown";
}

bool ReportBundle::has(Step s) const { return std::find(meta.steps.begin(), meta.steps.end(), s) != meta.steps.end(); }

ReportBundle run_steps(const Scenario& s, std::span<const Step> steps) {
  auto wants = [&](Step st) { return std::find(steps.begin(), steps.end(), st) != steps.end(); };
  const bool lole = wants(Step::Lole);
  const bool copt = lole || wants(Step::Copt);
  const bool mc = wants(Step::Simulate);

  ReportBundle b;
  b.meta.tool_version = GRIDRISK_VERSION;
  b.meta.label = s.label;
  b.meta.scenario_hash = scenario_hash(s);
  b.meta.seed = s.mc.seed;
  b.meta.replications = s.mc.replications;
  b.meta.lole_sample = s.mc.lole_sample;
  b.meta.installed_mw = s.fleet.installed_capacity();
  b.meta.delta = s.cyber.delta;
  b.meta.attack_active = s.cyber.active;
  b.resolved_scenario = resolved_toml(s, kLoadCopy);
  if (std::holds_alternative<LoadFromFile>(s.load_source)) b.load_copy = s.profile;

  b.attack = AttackSummary{s.attack_target, disruption_probability(s.attack, s.attack_target)};
  b.meta.steps.push_back(Step::Attack);

  if (copt) {
    b.copt_base = build_copt(s.fleet, s.copt);
    b.copt_derated = apply_cyber_derating(*b.copt_base, s.cyber.delta);
    b.meta.steps.push_back(Step::Copt);
  }
  if (lole) {
    auto analytic = [&](const Copt& c) {
      return AnalyticLole{lole_daily_peak(c, s.profile), lole_hourly(c, s.profile), eens(c, s.profile)};
    };
    b.lole_base = analytic(*b.copt_base);
    b.lole_derated = analytic(*b.copt_derated);
    b.lole_mixture = expected_lole_mixture(b.lole_base->daily_peak.lole_days_per_year,
                                           b.lole_derated->daily_peak.lole_days_per_year,
                                           b.attack->result.probability);
    b.meta.steps.push_back(Step::Lole);
  }
  if (mc) {
    auto sim = simulate(s.fleet, s.profile, s.cyber, s.mc);
    b.mc = McSummary{std::move(sim.lole), exact_lole(s.fleet, s.profile, s.cyber, s.mc.lole_sample),
                     std::move(sim.lolp), std::move(sim.availability),
                     exact_lolp_series(s.fleet, s.profile, s.cyber)};
    b.meta.steps.push_back(Step::Simulate);
  }
  return b;
}

ReportBundle run_scenario(const Scenario& scenario) { return run_steps(scenario, kAllSteps); }

void write_series_csv(std::ostream& out, std::span<const double> values) {
  out << "hour,value\n";
  for (std::size_t h = 0; h < values.size(); ++h) out << h << ',' << format_double(values[h]) << '\n';
}

void write_histogram_csv(std::ostream& out, const LoleEstimate& est) {
  out << "bin_lower,count\n";
  for (const auto& [lower, count] : est.histogram) out << format_double(lower) << ',' << count << '\n';
}

void write_bundle(const ReportBundle& b, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / kFailedMarker, [](std::ostream& o) { o << "bundle incomplete: run did not finish writing\n"; });
  for (const auto& name : kArtifacts) fs::remove(dir / name);

  write_file(dir / kResolved, [&](std::ostream& o) { o << b.resolved_scenario; });
  if (b.load_copy) write_file(dir / kLoadCopy, [&](std::ostream& o) { write_profile(o, *b.load_copy); });

  json artifacts = json::object();
  if (b.attack) {
    const auto& r = b.attack->result;
    write_json(dir / "attack.json", {{"target", b.attack->target},
                                     {"method", "chain_rule_noisy_or"},
                                     {"disruption_probability", r.probability},
                                     {"path_count", r.path_count},
                                     {"unreachable", r.unreachable}});
    artifacts["attack.json"] = "analytic: chain-rule path products, noisy-OR across paths";
  }
  if (b.copt_base) {
    write_file(dir / "copt_base.csv", [&](std::ostream& o) { write_copt_csv(o, *b.copt_base); });
    write_file(dir / "copt_derated.csv", [&](std::ostream& o) { write_copt_csv(o, *b.copt_derated); });
    artifacts["copt_base.csv"] = "analytic: unit-addition convolution";
    artifacts["copt_derated.csv"] = "analytic: convolution + cyber de-rating (delta " + format_double(b.meta.delta) + ")";
  }
  if (b.lole_base) {
    write_json(dir / "lole_daily_peak_base.json", breakdown_json(b.lole_base->daily_peak, "base"));
    write_json(dir / "lole_hourly_base.json", breakdown_json(b.lole_base->hourly, "base"));
    write_json(dir / "lole_daily_peak_derated.json", breakdown_json(b.lole_derated->daily_peak, "derated"));
    write_json(dir / "lole_hourly_derated.json", breakdown_json(b.lole_derated->hourly, "derated"));
    write_json(dir / "adequacy.json", {{"eens_base_mwh_per_year", b.lole_base->eens_mwh},
                                       {"eens_derated_mwh_per_year", b.lole_derated->eens_mwh},
                                       {"lole_mixture_days_per_year", *b.lole_mixture},
                                       {"lole_mixture_method", "daily_peak, derated weighted by disruption probability"}});
    artifacts["lole_daily_peak_base.json"] = "analytic: daily peak, base COPT";
    artifacts["lole_hourly_base.json"] = "analytic: hourly / 24, base COPT";
    artifacts["lole_daily_peak_derated.json"] = "analytic: daily peak, derated COPT";
    artifacts["lole_hourly_derated.json"] = "analytic: hourly / 24, derated COPT";
    artifacts["adequacy.json"] = "analytic: EENS and attack-probability mixture";
  }
  if (b.mc) {
    const auto& m = *b.mc;
    write_json(dir / "mc_lole.json", {{"method", "monte_carlo"},
                                      {"lole_sample", to_string(m.lole.sample)},
                                      {"mean", m.lole.mean},
                                      {"std_error", m.lole.std_error},
                                      {"replications", b.meta.replications},
                                      {"seed", std::to_string(b.meta.seed)},
                                      {"bin_width", m.lole.bin_width},
                                      {"exact_expectation", m.exact_lole}});
    write_file(dir / "lole_hist.csv", [&](std::ostream& o) { write_histogram_csv(o, m.lole); });
    write_file(dir / "lole_samples.csv", [&](std::ostream& o) {
      o << "replication,lole_days\n";
      for (std::size_t r = 0; r < m.lole.replication_values.size(); ++r)
        o << r << ',' << format_double(m.lole.replication_values[r]) << '\n';
    });
    write_file(dir / "lolp_series.csv", [&](std::ostream& o) { write_series_csv(o, m.lolp); });
    write_file(dir / "lolp_exact.csv", [&](std::ostream& o) { write_series_csv(o, m.exact_lolp); });
    write_file(dir / "availability_series.csv", [&](std::ostream& o) { write_series_csv(o, m.availability); });
    artifacts["mc_lole.json"] = "monte_carlo: LOLE estimate (" + std::string(to_string(m.lole.sample)) + ")";
    artifacts["lole_hist.csv"] = "monte_carlo: LOLE histogram";
    artifacts["lole_samples.csv"] = "monte_carlo: per-replication LOLE";
    artifacts["lolp_series.csv"] = "monte_carlo: hourly deficit frequency";
    artifacts["lolp_exact.csv"] = "analytic: hourly LOLP from nominal / in-window COPTs";
    artifacts["availability_series.csv"] = "monte_carlo: hourly mean online fraction";
  }

  json steps = json::array();
  for (auto s : b.meta.steps) steps.push_back(to_string(s));
  write_json(dir / kManifest, {{"tool", "gridrisk"},
                               {"version", b.meta.tool_version},
                               {"label", b.meta.label},
                               {"scenario_hash", b.meta.scenario_hash},
                               {"seed", std::to_string(b.meta.seed)},
                               {"replications", b.meta.replications},
                               {"lole_sample", to_string(b.meta.lole_sample)},
                               {"installed_mw", b.meta.installed_mw},
                               {"delta", b.meta.delta},
                               {"attack_active", b.meta.attack_active},
                               {"steps", std::move(steps)},
                               {"artifacts", std::move(artifacts)}});
  fs::remove(dir / kFailedMarker);
}

ReportBundle read_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ParseError("bundle directory not found: " + dir.string());
  if (fs::exists(dir / kFailedMarker)) throw ValidationError("bundle " + dir.string() + " is marked FAILED");
  const auto manifest = read_json(dir / kManifest);

  ReportBundle b;
  try {
    auto& m = b.meta;
    m.tool_version = manifest.at("version");
    m.label = manifest.at("label");
    m.scenario_hash = manifest.at("scenario_hash");
    m.seed = parse_u64(manifest.at("seed").get<std::string>()).value_or(0);
    m.replications = manifest.at("replications");
    m.lole_sample = parse_lole_sample(manifest.at("lole_sample").get<std::string>()).value_or(LoleSample::AnyHour);
    m.installed_mw = manifest.at("installed_mw");
    m.delta = manifest.at("delta");
    m.attack_active = manifest.at("attack_active");
    for (const auto& s : manifest.at("steps")) {
      if (auto st = parse_step(s.get<std::string>())) m.steps.push_back(*st);
    }
  } catch (const json::exception& e) {
    throw ParseError((dir / kManifest).string() + ": " + e.what());
  }
  b.resolved_scenario = read_file(dir / kResolved);
  if (fs::exists(dir / kLoadCopy)) b.load_copy = load_profile_file(dir / kLoadCopy);

  if (b.has(Step::Attack)) {
    auto j = read_json(dir / "attack.json");
    b.attack = AttackSummary{j.at("target"), {j.at("disruption_probability"), j.at("path_count"), j.at("unreachable")}};
  }
  if (b.has(Step::Copt)) {
    b.copt_base = read_copt_csv(dir / "copt_base.csv", b.meta.installed_mw, 0.0);
    b.copt_derated = read_copt_csv(dir / "copt_derated.csv", b.meta.installed_mw, b.meta.delta);
  }
  if (b.has(Step::Lole)) {
    auto adequacy = read_json(dir / "adequacy.json");
    b.lole_base = AnalyticLole{breakdown_from_json(read_json(dir / "lole_daily_peak_base.json")),
                               breakdown_from_json(read_json(dir / "lole_hourly_base.json")),
                               adequacy.at("eens_base_mwh_per_year")};
    b.lole_derated = AnalyticLole{breakdown_from_json(read_json(dir / "lole_daily_peak_derated.json")),
                                  breakdown_from_json(read_json(dir / "lole_hourly_derated.json")),
                                  adequacy.at("eens_derated_mwh_per_year")};
    b.lole_mixture = adequacy.at("lole_mixture_days_per_year").get<double>();
  }
  if (b.has(Step::Simulate)) {
    auto j = read_json(dir / "mc_lole.json");
    McSummary m;
    m.lole.sample = parse_lole_sample(j.at("lole_sample").get<std::string>()).value_or(LoleSample::AnyHour);
    m.lole.mean = j.at("mean");
    m.lole.std_error = j.at("std_error");
    m.lole.bin_width = j.at("bin_width");
    m.exact_lole = j.at("exact_expectation");
    const auto hist_path = dir / "lole_hist.csv";
    for (const auto& r : read_csv(hist_path, "bin_lower,count"))
      m.lole.histogram.emplace_back(cell(r, 0, hist_path), static_cast<std::size_t>(cell(r, 1, hist_path)));
    const auto samples_path = dir / "lole_samples.csv";
    for (const auto& r : read_csv(samples_path, "replication,lole_days"))
      m.lole.replication_values.push_back(cell(r, 1, samples_path));
    m.lolp = read_series(dir / "lolp_series.csv");
    m.exact_lolp = read_series(dir / "lolp_exact.csv");
    m.availability = read_series(dir / "availability_series.csv");
    b.mc = std::move(m);
  }
  return b;
}

void print_summary(std::ostream& out, const ReportBundle& b) {
  auto kv = [&](std::string_view k, const std::string& v) { out << k << ": " << v << '\n'; };
  auto num = [&](std::string_view k, double v) { kv(k, format_double(v)); };
  kv("label", b.meta.label);
  kv("scenario_hash", b.meta.scenario_hash);
  kv("seed", std::to_string(b.meta.seed));
  std::string steps;
  for (auto s : b.meta.steps) steps += (steps.empty() ? "" : ",") + std::string(to_string(s));
  kv("steps", steps);
  if (b.attack) {
    kv("attack_target", b.attack->target);
    num("disruption_probability", b.attack->result.probability);
    kv("attack_paths", std::to_string(b.attack->result.path_count));
    if (b.attack->result.unreachable) kv("attack_warning", "target unreachable from every root");
  }
  if (b.copt_base) {
    kv("copt_states", std::to_string(b.copt_base->size()));
    num("installed_mw", b.copt_base->installed_mw());
    num("delta", b.meta.delta);
  }
  if (b.lole_base) {
    num("lole_daily_peak_base_days", b.lole_base->daily_peak.lole_days_per_year);
    num("lole_hourly_base_days", b.lole_base->hourly.lole_days_per_year);
    num("lole_daily_peak_derated_days", b.lole_derated->daily_peak.lole_days_per_year);
    num("lole_hourly_derated_days", b.lole_derated->hourly.lole_days_per_year);
    num("eens_base_mwh", b.lole_base->eens_mwh);
    num("eens_derated_mwh", b.lole_derated->eens_mwh);
    num("lole_mixture_days", *b.lole_mixture);
  }
  if (b.mc) {
    const auto& m = *b.mc;
    kv("mc_replications", std::to_string(b.meta.replications));
    kv("mc_lole_sample", std::string(to_string(m.lole.sample)));
    num("mc_lole_mean_days", m.lole.mean);
    num("mc_lole_std_error_days", m.lole.std_error);
    num("mc_lole_exact_days", m.exact_lole);
    auto peak = std::max_element(m.lolp.begin(), m.lolp.end());
    num("mc_lolp_max", *peak);
    kv("mc_lolp_max_hour", std::to_string(peak - m.lolp.begin()));
    double mean_avail = 0.0;
    for (double a : m.availability) mean_avail += a;
    num("mc_availability_mean", mean_avail / static_cast<double>(m.availability.size()));
  }
}

std::optional<Figure> parse_figure(std::string_view name) {
  for (auto f : {Figure::LolpSeries, Figure::LoleHist, Figure::CoptCompare, Figure::Availability}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::string_view to_string(Figure f) {
  switch (f) {
    case Figure::LolpSeries:
      return "lolp_series";
    case Figure::LoleHist:
      return "lole_hist";
    case Figure::CoptCompare:
      return "copt_compare";
    case Figure::Availability:
      return "availability";
  }
  return "unknown";
}

std::vector<fs::path> emit_figure_data(const ReportBundle& b, Figure figure, const fs::path& dir) {
  const bool available = figure == Figure::CoptCompare ? b.copt_base.has_value() : b.mc.has_value();
  if (!available) throw MissingArtifact(missing_step_message(figure));
  fs::create_directories(dir);
  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, auto&& body) {
    written.push_back(dir / name);
    write_file(written.back(), body);
  };
  switch (figure) {
    case Figure::LolpSeries:
      emit("lolp_series.csv", [&](std::ostream& o) { write_series_csv(o, b.mc->lolp); });
      break;
    case Figure::LoleHist:
      emit("lole_hist.csv", [&](std::ostream& o) { write_histogram_csv(o, b.mc->lole); });
      break;
    case Figure::Availability:
      emit("availability.csv", [&](std::ostream& o) { write_series_csv(o, b.mc->availability); });
      break;
    case Figure::CoptCompare: {
      const std::string stem = "copt_compare_" + b.meta.label;
      emit(stem + "_base.csv", [&](std::ostream& o) { write_copt_csv(o, *b.copt_base); });
      emit(stem + "_derated.csv", [&](std::ostream& o) { write_copt_csv(o, *b.copt_derated); });
      break;
    }
  }
  return written;
}

ComparisonRow comparison_row(const ReportBundle& b) {
  if (!b.lole_base || !b.mc || !b.attack) throw MissingArtifact("comparison needs a full run (lole and simulate steps)");
  ComparisonRow r;
  r.label = b.meta.label;
  r.scenario_hash = b.meta.scenario_hash;
  r.disruption_probability = b.attack->result.probability;
  r.lole_daily_peak_base = b.lole_base->daily_peak.lole_days_per_year;
  r.lole_hourly_base = b.lole_base->hourly.lole_days_per_year;
  r.lole_daily_peak_derated = b.lole_derated->daily_peak.lole_days_per_year;
  r.lole_hourly_derated = b.lole_derated->hourly.lole_days_per_year;
  r.lole_mixture = *b.lole_mixture;
  r.mc_sample = b.mc->lole.sample;
  r.mc_lole_mean = b.mc->lole.mean;
  r.mc_lole_std_error = b.mc->lole.std_error;
  r.exact_lole = b.mc->exact_lole;
  return r;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "label,scenario_hash,disruption_probability,lole_daily_peak_base_days,lole_hourly_base_days,"
         "lole_daily_peak_derated_days,lole_hourly_derated_days,lole_mixture_days,mc_lole_sample,"
         "mc_lole_mean_days,mc_lole_std_error_days,mc_lole_exact_days\n";
  for (const auto& r : rows) {
    out << r.label << ',' << r.scenario_hash << ',' << format_double(r.disruption_probability) << ','
        << format_double(r.lole_daily_peak_base) << ',' << format_double(r.lole_hourly_base) << ','
        << format_double(r.lole_daily_peak_derated) << ',' << format_double(r.lole_hourly_derated) << ','
        << format_double(r.lole_mixture) << ',' << to_string(r.mc_sample) << ',' << format_double(r.mc_lole_mean)
        << ',' << format_double(r.mc_lole_std_error) << ',' << format_double(r.exact_lole) << '\n';
  }
}

void write_comparison_text(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  std::size_t w = 8;
  for (const auto& r : rows) w = std::max(w, r.label.size());
  out << "LOLE comparison (days/year)\n";
  out << std::left << std::setw(static_cast<int>(w)) << "scenario" << std::right << std::setw(12) << "P(disrupt)"
      << std::setw(12) << "daily-peak" << std::setw(12) << "hourly" << std::setw(12) << "dp derated"
      << std::setw(12) << "hr derated" << std::setw(22) << "MC mean +- SE" << std::setw(12) << "MC exact" << '\n';
  for (const auto& r : rows) {
    std::ostringstream mc;
    mc << std::fixed << std::setprecision(3) << r.mc_lole_mean << " +- " << r.mc_lole_std_error;
    out << std::left << std::setw(static_cast<int>(w)) << r.label << std::right << std::setw(12) << std::setprecision(4)
        << std::scientific << r.disruption_probability << std::fixed << std::setprecision(3) << std::setw(12)
        << r.lole_daily_peak_base << std::setw(12) << r.lole_hourly_base << std::setw(12) << r.lole_daily_peak_derated
        << std::setw(12) << r.lole_hourly_derated << std::setw(22) << mc.str() << std::setw(12) << r.exact_lole
        << '\n';
    out.unsetf(std::ios::floatfield);
  }
  if (!rows.empty()) out << "MC LOLE sample: " << to_string(rows.front().mc_sample) << '\n';
}

}  // namespace gridrisk
