#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridrisk/adequacy.hpp"
#include "gridrisk/attack_graph.hpp"
#include "gridrisk/copt.hpp"
#include "gridrisk/montecarlo.hpp"
#include "gridrisk/scenario.hpp"

namespace gridrisk {

// Pipeline stages; a bundle records which ones ran.
enum class Step { Attack, Copt, Lole, Simulate };

struct RunMetadata {
  std::string tool_version;
  std::string label;
  std::string scenario_hash;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  LoleSample lole_sample = LoleSample::AnyHour;
  double installed_mw = 0.0;
  double delta = 0.0;
  bool attack_active = false;
  std::vector<Step> steps;
};

struct AttackSummary {
  std::string target;
  DisruptionResult result;
};

struct AnalyticLole {
  LoleBreakdown daily_peak;
  LoleBreakdown hourly;
  double eens_mwh = 0.0;
};

struct McSummary {
  LoleEstimate lole;
  double exact_lole = 0.0;  // closed-form expectation of the same estimator
  std::vector<double> lolp;
  std::vector<double> availability;
  std::vector<double> exact_lolp;
};

struct ReportBundle {
  RunMetadata meta;
  std::string resolved_scenario;
  std::optional<LoadProfile> load_copy;  // set when the scenario loads its profile from a file
  std::optional<AttackSummary> attack;
  std::optional<Copt> copt_base;
  std::optional<Copt> copt_derated;
  std::optional<AnalyticLole> lole_base;
  std::optional<AnalyticLole> lole_derated;
  std::optional<double> lole_mixture;  // daily-peak base/derated weighted by disruption probability
  std::optional<McSummary> mc;

  bool has(Step s) const;
};

std::string_view to_string(Step s);

// Runs the requested steps (Lole implies Copt).
ReportBundle run_steps(const Scenario& scenario, std::span<const Step> steps);
ReportBundle run_scenario(const Scenario& scenario);

// Writes every artifact in the bundle. A FAILED marker exists while writing and is removed
// only after the last artifact is on disk.
void write_bundle(const ReportBundle& bundle, const std::filesystem::path& dir);
ReportBundle read_bundle(const std::filesystem::path& dir);

// Stable `key: value` lines.
void print_summary(std::ostream& out, const ReportBundle& bundle);

enum class Figure { LolpSeries, LoleHist, CoptCompare, Availability };
std::optional<Figure> parse_figure(std::string_view name);
std::string_view to_string(Figure f);

// Writes the figure's CSV(s) into `dir`, returns the paths written.
// Throws MissingArtifact naming the step that did not run.
std::vector<std::filesystem::path> emit_figure_data(const ReportBundle& bundle, Figure figure,
                                                    const std::filesystem::path& dir);

struct ComparisonRow {
  std::string label;
  std::string scenario_hash;
  double disruption_probability = 0.0;
  double lole_daily_peak_base = 0.0;
  double lole_hourly_base = 0.0;
  double lole_daily_peak_derated = 0.0;
  double lole_hourly_derated = 0.0;
  double lole_mixture = 0.0;
  LoleSample mc_sample = LoleSample::AnyHour;
  double mc_lole_mean = 0.0;
  double mc_lole_std_error = 0.0;
  double exact_lole = 0.0;
};

ComparisonRow comparison_row(const ReportBundle& bundle);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);
void write_comparison_text(std::ostream& out, const std::vector<ComparisonRow>& rows);

// CSV exports shared by bundle and figure output.
void write_series_csv(std::ostream& out, std::span<const double> values);  // hour,value
void write_histogram_csv(std::ostream& out, const LoleEstimate& est);       // bin_lower,count

}  // namespace gridrisk
