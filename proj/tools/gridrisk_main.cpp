// gridrisk: attack-chain probability, COPT, LOLE and Monte Carlo runs from scenario files.
//
// Exit status: 0 success, 2 input error, 3 runtime error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridrisk/error.hpp"
#include "gridrisk/numfmt.hpp"
#include "gridrisk/report.hpp"
#include "gridrisk/scenario.hpp"

namespace fs = std::filesystem;
using namespace gridrisk;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  std::optional<std::size_t> workers;
  std::optional<std::string> out;
};

Scenario load_with_overrides(const std::string& path, const GlobalFlags& g) {
  auto s = load_scenario(path);
  if (g.seed) s.mc.seed = *g.seed;
  if (g.replications) s.mc.replications = *g.replications;
  if (g.workers) s.mc.workers = *g.workers;
  s.mc.validate();
  return s;
}

fs::path output_dir(const Scenario& s, const GlobalFlags& g) {
  if (g.out) return *g.out;
  if (!s.output_dir.empty()) return s.output_dir;
  return fs::path("out") / s.label;
}

int run_single(const std::string& path, const GlobalFlags& g, std::vector<Step> steps) {
  auto scenario = load_with_overrides(path, g);
  auto bundle = run_steps(scenario, steps);
  auto dir = output_dir(scenario, g);
  write_bundle(bundle, dir);
  print_summary(std::cout, bundle);
  std::cout << "bundle: " << dir.string() << '\n';
  return 0;
}

int run_compare(const std::vector<std::string>& paths, const GlobalFlags& g) {
  std::vector<Scenario> scenarios;
  std::vector<std::string> failures;
  for (const auto& p : paths) {
    try {
      scenarios.push_back(load_with_overrides(p, g));
    } catch (const InputError& e) {
      failures.emplace_back(e.what());
    }
  }
  if (!failures.empty()) {
    for (const auto& f : failures) std::cerr << "error: " << f << '\n';
    std::cerr << "error: " << failures.size() << " of " << paths.size() << " scenarios invalid; nothing was run\n";
    return kExitInput;
  }

  std::vector<ComparisonRow> rows;
  for (const auto& s : scenarios) rows.push_back(comparison_row(run_scenario(s)));

  fs::path dir = g.out ? fs::path(*g.out) : fs::path("out") / "compare";
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "compare.csv", std::ios::binary);
    write_comparison_csv(csv, rows);
    std::ofstream txt(dir / "compare.txt", std::ios::binary);
    write_comparison_text(txt, rows);
    if (!csv || !txt) throw Error("cannot write comparison files in " + dir.string());
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::string k = "row" + std::to_string(i) + ".";
    std::cout << k << "label: " << r.label << '\n'
              << k << "disruption_probability: " << format_double(r.disruption_probability) << '\n'
              << k << "lole_daily_peak_base_days: " << format_double(r.lole_daily_peak_base) << '\n'
              << k << "lole_hourly_base_days: " << format_double(r.lole_hourly_base) << '\n'
              << k << "lole_daily_peak_derated_days: " << format_double(r.lole_daily_peak_derated) << '\n'
              << k << "lole_hourly_derated_days: " << format_double(r.lole_hourly_derated) << '\n'
              << k << "mc_lole_mean_days: " << format_double(r.mc_lole_mean) << '\n'
              << k << "mc_lole_std_error_days: " << format_double(r.mc_lole_std_error) << '\n';
  }
  std::cout << "comparison: " << (dir / "compare.csv").string() << '\n';
  return 0;
}

int run_figure(const std::string& bundle_dir, const std::string& name, const GlobalFlags& g) {
  auto figure = parse_figure(name);
  if (!figure) throw ValidationError("unknown figure '" + name + "' (lolp_series, lole_hist, copt_compare, availability)");
  auto bundle = read_bundle(bundle_dir);
  fs::path dir = g.out ? fs::path(*g.out) : fs::path(bundle_dir) / "figures";
  for (const auto& p : emit_figure_data(bundle, *figure, dir)) std::cout << "figure_csv: " << p.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyber-attack impact on generation adequacy: attack graphs, COPT, LOLE, Monte Carlo"};
  app.require_subcommand(1);
  GlobalFlags g;
  std::uint64_t seed = 0;
  std::size_t replications = 0, workers = 0;
  std::string out;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides the scenario)");
  auto* reps_opt = app.add_option("--replications", replications, "Monte Carlo replications")->check(CLI::PositiveNumber);
  auto* workers_opt = app.add_option("--workers", workers, "Monte Carlo worker threads")->check(CLI::PositiveNumber);
  auto* out_opt = app.add_option("--out", out, "Output directory");

  std::string scenario_path;
  std::vector<std::string> compare_paths;
  std::string bundle_dir, figure_name;

  auto add_single = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help)->fallthrough();
    sub->add_option("scenario", scenario_path, "Scenario file")->required();
    return sub;
  };
  auto* attack = add_single("attack-prob", "Attack-chain disruption probability");
  auto* copt = add_single("copt", "Base and de-rated capacity outage probability tables");
  auto* lole = add_single("lole", "Analytic LOLE (daily peak and hourly) and EENS");
  auto* simulate = add_single("simulate", "Full run: attack graph, COPT, analytic LOLE and Monte Carlo");
  auto* compare = app.add_subcommand("compare", "Compare LOLE across scenarios")->fallthrough();
  compare->add_option("scenarios", compare_paths, "Scenario files")->required()->expected(2, -1);
  auto* figure = app.add_subcommand("figure", "Export plot data from a bundle")->fallthrough();
  figure->add_option("bundle", bundle_dir, "Bundle directory")->required();
  figure->add_option("name", figure_name, "lolp_series | lole_hist | copt_compare | availability")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }
  if (*seed_opt) g.seed = seed;
  if (*reps_opt) g.replications = replications;
  if (*workers_opt) g.workers = workers;
  if (*out_opt) g.out = out;

  try {
    if (*attack) return run_single(scenario_path, g, {Step::Attack});
    if (*copt) return run_single(scenario_path, g, {Step::Attack, Step::Copt});
    if (*lole) return run_single(scenario_path, g, {Step::Attack, Step::Copt, Step::Lole});
    if (*simulate) return run_single(scenario_path, g, {Step::Attack, Step::Copt, Step::Lole, Step::Simulate});
    if (*compare) return run_compare(compare_paths, g);
    if (*figure) return run_figure(bundle_dir, figure_name, g);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitInput;
}
