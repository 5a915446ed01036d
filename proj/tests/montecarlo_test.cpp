#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "gridrisk/adequacy.hpp"
#include "gridrisk/copt.hpp"
#include "gridrisk/error.hpp"
#include "gridrisk/montecarlo.hpp"
#include "support.hpp"

using namespace gridrisk;
namespace gt = gridrisk::testing;

namespace {

McConfig config(std::size_t reps, std::uint64_t seed = 1, std::size_t workers = 1,
                LoleSample sample = LoleSample::AnyHour) {
  McConfig c;
  c.replications = reps;
  c.seed = seed;
  c.workers = workers;
  c.lole_sample = sample;
  return c;
}

Fleet all_exposed(std::size_t n, double cap, double q) {
  std::vector<GeneratorUnit> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back({"u" + std::to_string(i), cap, q, true});
  return Fleet(v);
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](double x, double y) {
           return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
         });
}

// Counts hours whose estimate is more than k binomial standard errors away from `expected`.
// The variance is floored at one count so hours with tiny probabilities are not flagged for a
// single hit.
std::size_t outliers(const std::vector<double>& series, const std::vector<double>& expected, double trials, double k) {
  std::size_t n = 0;
  for (std::size_t h = 0; h < series.size(); ++h) {
    double p = expected[h];
    double sigma = std::sqrt(std::max(p * (1 - p), 1.0 / trials) / trials);
    if (std::abs(series[h] - p) > k * sigma + 1e-15) ++n;
  }
  return n;
}

}  // namespace

TEST(CyberScenarioTest, DefaultsAndValidation) {
  CyberScenario s;
  EXPECT_TRUE(s.active);
  EXPECT_EQ(s.delta, 0.05);
  EXPECT_EQ(s.degraded_availability, 0.88);
  EXPECT_TRUE(s.in_window(4380));
  EXPECT_TRUE(s.in_window(4020));
  EXPECT_FALSE(s.in_window(4740));
  EXPECT_FALSE(s.in_window(4019));
  EXPECT_NO_THROW(s.validate());

  auto none = CyberScenario::none();
  EXPECT_FALSE(none.in_window(4380));
  EXPECT_EQ(none.delta, 0.0);

  auto bad = s;
  bad.window_start = 8700;
  bad.window_hours = 61;
  EXPECT_THROW(bad.validate(), DomainError);
  bad.window_hours = 60;
  EXPECT_NO_THROW(bad.validate());
  bad = s;
  bad.window_hours = 0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = s;
  bad.degraded_availability = 1.1;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = s;
  bad.delta = -0.1;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = s;
  bad.nominal_availability = 2.0;
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(CyberScenarioTest, UnitAvailability) {
  CyberScenario s;
  GeneratorUnit exposed{"a", 10, 0.05, true}, shielded{"b", 10, 0.05, false};
  EXPECT_EQ(s.availability(exposed, 4380), 0.88);
  EXPECT_EQ(s.availability(shielded, 4380), 0.95);
  EXPECT_EQ(s.availability(exposed, 100), 0.95);
  s.nominal_availability = 0.9;
  EXPECT_EQ(s.availability(exposed, 100), 0.9);
  EXPECT_EQ(s.availability(shielded, 4380), 0.9);
  EXPECT_EQ(s.availability(exposed, 4380), 0.88);
}

TEST(McConfigTest, Validation) {
  EXPECT_THROW(config(0).validate(), DomainError);
  EXPECT_THROW(config(1, 1, 0).validate(), DomainError);
  auto c = config(1);
  c.histogram_bin_days = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
  EXPECT_THROW(simulate(Fleet({{"g", 1, 0, false}}), gt::flat_profile(0), CyberScenario::none(), config(0)),
               DomainError);
}

TEST(LoleSampleNames, RoundTrip) {
  for (auto s : {LoleSample::AnyHour, LoleSample::DailyPeak, LoleSample::HoursOver24})
    EXPECT_EQ(parse_lole_sample(to_string(s)), s);
  EXPECT_FALSE(parse_lole_sample("weekly").has_value());
}

TEST(SimulateYear, PerfectFleetNeverShort) {
  Fleet f({{"a", 100, 0.0, false}, {"b", 50, 0.0, true}});
  auto t = simulate_year(f, gt::flat_profile(150.0), CyberScenario::none(), 42);
  ASSERT_EQ(t.hourly_available.size(), kHoursPerYear);
  ASSERT_EQ(t.hourly_deficit.size(), kHoursPerYear);
  ASSERT_EQ(t.hourly_online_fraction.size(), kHoursPerYear);
  for (std::size_t h = 0; h < kHoursPerYear; ++h) {
    EXPECT_EQ(t.hourly_available[h], 150.0);
    EXPECT_FALSE(t.hourly_deficit[h]);
    EXPECT_EQ(t.hourly_online_fraction[h], 1.0);
  }
}

TEST(SimulateYear, SameSeedBitIdentical) {
  auto f = load_fleet_file(gt::source_dir() / "fleets" / "paper_11unit");
  auto p = synth_profile({857, 0.55, 4380});
  auto a = simulate_year(f, p, CyberScenario{}, 4380);
  auto b = simulate_year(f, p, CyberScenario{}, 4380);
  EXPECT_TRUE(bit_equal(a.hourly_available, b.hourly_available));
  EXPECT_EQ(a.hourly_deficit, b.hourly_deficit);
  EXPECT_TRUE(bit_equal(a.hourly_online_fraction, b.hourly_online_fraction));
  auto c = simulate_year(f, p, CyberScenario{}, 4381);
  EXPECT_FALSE(bit_equal(a.hourly_available, c.hourly_available));
}

TEST(SimulateYear, TraceConsistency) {
  auto f = load_fleet_file(gt::source_dir() / "fleets" / "paper_11unit");
  auto p = synth_profile({1200, 0.55, 4380});
  auto t = simulate_year(f, p, CyberScenario{}, 9);
  for (std::size_t h = 0; h < kHoursPerYear; ++h) {
    ASSERT_EQ(t.hourly_deficit[h], p[h] > t.hourly_available[h]);
    ASSERT_GE(t.hourly_online_fraction[h], 0.0);
    ASSERT_LE(t.hourly_online_fraction[h], 1.0);
    ASSERT_LE(t.hourly_available[h], f.installed_capacity());
  }
}

TEST(SimulateYear, MatchesReplicationZeroOfARun) {
  auto f = all_exposed(4, 50, 0.2);
  auto p = gt::flat_profile(160.0);
  auto t = simulate_year(f, p, CyberScenario{}, 77);
  auto r = simulate(f, p, CyberScenario{}, config(1, 77));
  for (std::size_t h = 0; h < kHoursPerYear; ++h) {
    ASSERT_EQ(r.lolp[h], t.hourly_deficit[h] ? 1.0 : 0.0);
    ASSERT_EQ(r.availability[h], t.hourly_online_fraction[h]);
  }
}

TEST(Simulate, SingleUnitDeficitFractionBinomial) {
  Fleet f({{"g", 100, 0.05, false}});
  auto r = simulate(f, gt::flat_profile(50.0), CyberScenario::none(), config(10000, 2024));
  double frac = std::accumulate(r.lolp.begin(), r.lolp.end(), 0.0) / kHoursPerYear;
  double sigma = std::sqrt(0.05 * 0.95 / (8760.0 * 10000.0));
  EXPECT_NEAR(frac, 0.05, 3 * sigma);
}

TEST(Simulate, SingleReplicationGivesIndicators) {
  auto f = all_exposed(3, 40, 0.3);
  auto r = simulate(f, gt::flat_profile(100.0), CyberScenario{}, config(1, 5));
  for (double v : r.lolp) ASSERT_TRUE(v == 0.0 || v == 1.0);
  EXPECT_EQ(r.lole.std_error, 0.0);
  ASSERT_EQ(r.lole.replication_values.size(), 1u);
}

TEST(Simulate, ZeroRiskFleet) {
  Fleet f({{"g", 100, 0.0, false}});
  auto est = estimate_lole(f, gt::flat_profile(100.0), CyberScenario::none(), config(500));
  EXPECT_EQ(est.mean, 0.0);
  EXPECT_EQ(est.std_error, 0.0);
  ASSERT_EQ(est.histogram.size(), 1u);
  EXPECT_EQ(est.histogram[0].first, 0.0);
  EXPECT_EQ(est.histogram[0].second, 500u);
}

TEST(Simulate, HistogramCountsSumToReplications) {
  auto f = all_exposed(3, 40, 0.05);
  auto est = estimate_lole(f, gt::flat_profile(85.0), CyberScenario{}, config(300, 3));
  std::size_t total = 0;
  for (auto [lo, n] : est.histogram) total += n;
  EXPECT_EQ(total, 300u);
  EXPECT_GE(est.std_error, 0.0);
  ASSERT_EQ(est.replication_values.size(), 300u);
  double mean = std::accumulate(est.replication_values.begin(), est.replication_values.end(), 0.0) / 300.0;
  EXPECT_NEAR(est.mean, mean, 1e-12);
}

TEST(Histogram, FixedWidthKeepsEmptyBins) {
  auto h = histogram({0.0, 0.5, 3.2, 3.9, 1.0}, 1.0);
  ASSERT_EQ(h.size(), 4u);
  EXPECT_EQ(h[0], std::make_pair(0.0, std::size_t{2}));
  EXPECT_EQ(h[1], std::make_pair(1.0, std::size_t{1}));
  EXPECT_EQ(h[2], std::make_pair(2.0, std::size_t{0}));
  EXPECT_EQ(h[3], std::make_pair(3.0, std::size_t{2}));
  auto half = histogram({2.0, 2.4, 2.6}, 0.5);
  ASSERT_EQ(half.size(), 2u);
  EXPECT_EQ(half[0].first, 2.0);
  EXPECT_EQ(half[1].second, 1u);
  EXPECT_TRUE(histogram({}, 1.0).empty());
  EXPECT_THROW(histogram({1.0}, 0.0), DomainError);
}

TEST(Simulate, SeedChangesOutput) {
  auto f = all_exposed(3, 40, 0.1);
  auto p = gt::flat_profile(90.0);
  auto a = simulate(f, p, CyberScenario{}, config(50, 1));
  auto b = simulate(f, p, CyberScenario{}, config(50, 2));
  EXPECT_FALSE(bit_equal(a.lolp, b.lolp));
}

TEST(Simulate, LargeSeedsAndReplicationIndicesDoNotCollide) {
  auto f = all_exposed(2, 40, 0.5);
  auto p = gt::flat_profile(50.0);
  auto a = simulate_year(f, p, CyberScenario::none(), 0);
  auto b = simulate_year(f, p, CyberScenario::none(), std::uint64_t{1} << 32);
  auto c = simulate_year(f, p, CyberScenario::none(), ~std::uint64_t{0});
  EXPECT_NE(a.hourly_deficit, b.hourly_deficit);
  EXPECT_NE(a.hourly_deficit, c.hourly_deficit);
}

TEST(Availability, NominalWithinThreeSigma) {
  auto f = all_exposed(11, 50, 0.05);
  const std::size_t reps = 2000;
  auto a = availability_series(f, CyberScenario::none(), config(reps, 8));
  ASSERT_EQ(a.size(), kHoursPerYear);
  std::vector<double> expected(kHoursPerYear, 0.95);
  // each hour is a mean over reps x units Bernoulli(0.95) draws; about 0.27% of hours
  // may fall outside 3 sigma by chance, none outside 5 sigma
  EXPECT_LT(outliers(a, expected, reps * 11.0, 3.0), kHoursPerYear / 100);
  EXPECT_EQ(outliers(a, expected, reps * 11.0, 5.0), 0u);
  double mean = std::accumulate(a.begin(), a.end(), 0.0) / kHoursPerYear;
  EXPECT_NEAR(mean, 0.95, 3 * std::sqrt(0.95 * 0.05 / (reps * 11.0 * kHoursPerYear)));
}

TEST(Availability, DegradedInsideWindow) {
  auto f = all_exposed(11, 50, 0.05);
  CyberScenario s;
  const std::size_t reps = 2000;
  auto a = availability_series(f, s, config(reps, 8));
  auto expected = exact_availability_series(f, s);
  for (std::size_t h = 0; h < kHoursPerYear; ++h) ASSERT_NEAR(expected[h], s.in_window(h) ? 0.88 : 0.95, 1e-15);
  EXPECT_LT(outliers(a, expected, reps * 11.0, 3.0), kHoursPerYear / 100);
  EXPECT_EQ(outliers(a, expected, reps * 11.0, 5.0), 0u);
  double in = 0.0, out = 0.0;
  for (std::size_t h = 0; h < kHoursPerYear; ++h) (s.in_window(h) ? in : out) += a[h];
  in /= s.window_hours;
  out /= kHoursPerYear - s.window_hours;
  EXPECT_NEAR(in, 0.88, 3 * std::sqrt(0.88 * 0.12 / (reps * 11.0 * s.window_hours)));
  EXPECT_GE(out - in, 0.05);
  EXPECT_LE(out - in, 0.08);
}

TEST(Determinism, IndependentOfWorkerCount) {
  auto f = load_fleet_file(gt::source_dir() / "fleets" / "paper_11unit");
  auto p = synth_profile({857, 0.55, 4380});
  auto ref = simulate(f, p, CyberScenario{}, config(37, 4380, 1));
  for (std::size_t w : {2u, 3u, 8u, 64u}) {
    auto r = simulate(f, p, CyberScenario{}, config(37, 4380, w));
    EXPECT_TRUE(bit_equal(ref.lolp, r.lolp)) << w;
    EXPECT_TRUE(bit_equal(ref.availability, r.availability)) << w;
    EXPECT_TRUE(bit_equal(ref.lole.replication_values, r.lole.replication_values)) << w;
    EXPECT_EQ(std::bit_cast<std::uint64_t>(ref.lole.mean), std::bit_cast<std::uint64_t>(r.lole.mean)) << w;
    EXPECT_EQ(std::bit_cast<std::uint64_t>(ref.lole.std_error), std::bit_cast<std::uint64_t>(r.lole.std_error)) << w;
  }
}

TEST(Determinism, PrefixOfReplicationsIsStable) {
  // replication r's stream depends only on (seed, r), not on how many replications run
  auto f = all_exposed(4, 50, 0.1);
  auto p = gt::flat_profile(160.0);
  auto small = estimate_lole(f, p, CyberScenario{}, config(10, 6));
  auto big = estimate_lole(f, p, CyberScenario{}, config(25, 6));
  for (std::size_t r = 0; r < 10; ++r) EXPECT_EQ(small.replication_values[r], big.replication_values[r]);
}

TEST(CommonRandomNumbers, OutsideWindowIdenticalToNoAttack) {
  auto f = load_fleet_file(gt::source_dir() / "fleets" / "paper_11unit");
  auto p = synth_profile({857, 0.55, 4380});
  CyberScenario attack;
  auto a = simulate(f, p, attack, config(200, 4380));
  auto b = simulate(f, p, CyberScenario::none(), config(200, 4380));
  std::size_t differ_in = 0;
  for (std::size_t h = 0; h < kHoursPerYear; ++h) {
    if (attack.in_window(h)) {
      differ_in += a.availability[h] != b.availability[h];
    } else {
      ASSERT_EQ(a.lolp[h], b.lolp[h]) << h;
      ASSERT_EQ(a.availability[h], b.availability[h]) << h;
    }
  }
  EXPECT_GT(differ_in, 0u);
}

TEST(CommonRandomNumbers, OutsideWindowStatisticallyMatchesNoAttack) {
  // independent seeds: the out-of-window series agree within sampling error
  auto f = all_exposed(6, 40, 0.08);
  auto p = gt::flat_profile(200.0);
  CyberScenario attack;
  const std::size_t reps = 3000;
  auto a = simulate(f, p, attack, config(reps, 1));
  auto exact = exact_lolp_series(f, p, CyberScenario::none());
  std::vector<double> outside_mc, outside_exact;
  for (std::size_t h = 0; h < kHoursPerYear; ++h)
    if (!attack.in_window(h)) {
      outside_mc.push_back(a.lolp[h]);
      outside_exact.push_back(exact[h]);
    }
  EXPECT_LT(outliers(outside_mc, outside_exact, reps, 3.0), outside_mc.size() / 100);
  double mean_mc = std::accumulate(outside_mc.begin(), outside_mc.end(), 0.0) / outside_mc.size();
  double mean_ex = std::accumulate(outside_exact.begin(), outside_exact.end(), 0.0) / outside_exact.size();
  EXPECT_NEAR(mean_mc, mean_ex, 3 * std::sqrt(mean_ex * (1 - mean_ex) / (reps * outside_mc.size())));
}

TEST(CommonRandomNumbers, LowerDegradedAvailabilityNeverLowersInWindowLolp) {
  auto f = load_fleet_file(gt::source_dir() / "fleets" / "paper_11unit");
  auto p = synth_profile({857, 0.55, 4380});
  double prev = -1.0;
  std::vector<double> prev_series;
  for (double a : {0.95, 0.93, 0.9, 0.88, 0.85, 0.8, 0.7}) {
    CyberScenario s;
    s.degraded_availability = a;
    auto lolp = lolp_series(f, p, s, config(100, 11));
    double in = 0.0;
    for (std::size_t h = 0; h < kHoursPerYear; ++h)
      if (s.in_window(h)) in += lolp[h];
    in /= s.window_hours;
    EXPECT_GE(in, prev) << "degraded availability " << a;
    if (!prev_series.empty())
      for (std::size_t h = 0; h < kHoursPerYear; ++h) ASSERT_GE(lolp[h], prev_series[h]) << h;
    prev = in;
    prev_series = lolp;
  }
}

TEST(EstimateLole, AttackRaisesLoleOnShippedFleet) {
  auto f = load_fleet_file(gt::source_dir() / "fleets" / "paper_11unit");
  auto p = synth_profile({857, 0.55, 4380});
  auto base = estimate_lole(f, p, CyberScenario::none(), config(1000, 4380));
  auto att = estimate_lole(f, p, CyberScenario{}, config(1000, 4380));
  EXPECT_GT(att.mean - base.mean, 3 * std::hypot(att.std_error, base.std_error));
}

TEST(EstimateLole, ThreeUnitFlatLoadMatchesDailyPeakAnalytic) {
  Fleet f({{"a", 100, 0.08, false}, {"b", 80, 0.05, false}, {"c", 60, 0.1, false}});
  auto p = gt::flat_profile(150.0);
  auto est = estimate_lole(f, p, CyberScenario::none(), config(10000, 4380, 1, LoleSample::DailyPeak));
  double analytic = lole_daily_peak(build_copt(f), p).lole_days_per_year;
  EXPECT_NEAR(est.mean, analytic, 3 * est.std_error);
  EXPECT_GT(est.std_error, 0.0);
}

TEST(EstimateLole, EachSampleConvergesToItsExactValue) {
  auto f = all_exposed(5, 40, 0.04);
  auto p = synth_profile({170.0, 0.6, 4380});
  CyberScenario s;
  for (auto sample : {LoleSample::AnyHour, LoleSample::DailyPeak, LoleSample::HoursOver24}) {
    auto est = estimate_lole(f, p, s, config(4000, 17, 1, sample));
    double exact = exact_lole(f, p, s, sample);
    EXPECT_NEAR(est.mean, exact, 3 * est.std_error) << to_string(sample);
    EXPECT_EQ(est.sample, sample);
  }
}

TEST(ExactCounterparts, AgreeWithAnalyticModule) {
  auto f = load_fleet_file(gt::source_dir() / "fleets" / "paper_11unit");
  auto p = synth_profile({857, 0.55, 4380});
  auto none = CyberScenario::none();
  auto c = build_copt(f);
  EXPECT_NEAR(exact_lole(f, p, none, LoleSample::DailyPeak), lole_daily_peak(c, p).lole_days_per_year, 1e-12);
  EXPECT_NEAR(exact_lole(f, p, none, LoleSample::HoursOver24), lole_hourly(c, p).lole_days_per_year, 1e-12);
  // any-hour >= daily-peak: a day lost at its peak hour is lost
  EXPECT_GE(exact_lole(f, p, none, LoleSample::AnyHour), exact_lole(f, p, none, LoleSample::DailyPeak));
}

TEST(ExactCounterparts, LolpSeriesMatchesMc) {
  auto f = all_exposed(6, 40, 0.06);
  auto p = synth_profile({200.0, 0.6, 4380});
  CyberScenario s;
  const std::size_t reps = 3000;
  auto mc = lolp_series(f, p, s, config(reps, 23));
  auto exact = exact_lolp_series(f, p, s);
  EXPECT_LT(outliers(mc, exact, reps, 3.0), kHoursPerYear / 100);
  EXPECT_EQ(outliers(mc, exact, reps, 5.5), 0u);
}

TEST(EffectiveFleet, Rates) {
  Fleet f({{"a", 10, 0.05, true}, {"b", 10, 0.02, false}});
  CyberScenario s;
  auto in = effective_fleet(f, s, true);
  EXPECT_NEAR(in.units()[0].forced_outage_rate, 0.12, 1e-15);
  EXPECT_EQ(in.units()[1].forced_outage_rate, 0.02);
  EXPECT_EQ(effective_fleet(f, s, false), f);
  EXPECT_EQ(effective_fleet(f, CyberScenario::none(), true), f);
}
