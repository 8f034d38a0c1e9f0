#include "tailrisk/synth.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tailrisk/error.hpp"

namespace tailrisk {
namespace {

double fraction_at_least(const std::vector<double>& v, double x) {
  return static_cast<double>(std::count_if(v.begin(), v.end(), [&](double s) { return s >= x; })) /
         static_cast<double>(v.size());
}

TEST(SamplePowerLaw, SurvivalAtHundred) {
  const auto s = sample_power_law(PowerLawModel(2.4, 10.0), 1000000, 1);
  const double p = std::pow(10.0, -1.4);  // (100 / 10)^(1 - 2.4)
  EXPECT_NEAR(fraction_at_least(s, 100.0), p, 3.0 * std::sqrt(p * (1 - p) / 1e6));
  EXPECT_GE(*std::min_element(s.begin(), s.end()), 10.0);
}

TEST(SamplePowerLaw, DeterministicGivenSeed) {
  const PowerLawModel m(2.2, 3.0);
  EXPECT_EQ(sample_power_law(m, 500, 9), sample_power_law(m, 500, 9));
  EXPECT_NE(sample_power_law(m, 500, 9), sample_power_law(m, 500, 10));
  // Streams are prefix-stable in n.
  const auto longer = sample_power_law(m, 800, 9);
  const auto shorter = sample_power_law(m, 500, 9);
  EXPECT_TRUE(std::equal(shorter.begin(), shorter.end(), longer.begin()));
}

TEST(SamplePiecewise, SegmentMassAndMedian) {
  const PiecewiseModel m(2.0, 3.0, 10.0, 80.0);
  const std::size_t n = 200000;
  const auto s = sample_piecewise(m, n, 2);
  const double below = 1.0 - fraction_at_least(s, 80.0);
  const double p = m.mass_below_break();
  EXPECT_NEAR(below, p, 3.0 * std::sqrt(p * (1 - p) / n));
  const double median = tail_quantile(m, 0.5);
  EXPECT_NEAR(fraction_at_least(s, median), 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(SamplePiecewise, EqualExponentsMatchSinglePowerLaw) {
  const auto s = sample_piecewise(PiecewiseModel(2.5, 2.5, 10.0, 80.0), 100000, 3);
  EXPECT_LT(ks_distance(PowerLawModel(2.5, 10.0), s, 10.0), 0.01);
}

TEST(SimulateLgcp, StationaryMomentsAndAutocorrelation) {
  const OuParams p{1.0 / 180.0, std::log(0.1), 0.08};
  const double dt = 30.0;
  const std::size_t n = 200000;
  const auto sim = simulate_lgcp_counts(p, n, dt, 4);
  const auto& x = sim.truth.x;
  ASSERT_EQ(x.size(), n);
  ASSERT_EQ(sim.counts.counts.size(), n);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double var = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += (x[i] - mean) * (x[i] - mean);
  for (std::size_t i = 1; i < n; ++i) cov += (x[i] - mean) * (x[i - 1] - mean);
  var /= n;
  const double rho = std::exp(-p.omega * dt);
  EXPECT_NEAR(cov / (n * var), rho, 0.02);
  // Effective sample size of an AR(1) series is n (1 - rho) / (1 + rho).
  const double n_eff = n * (1 - rho) / (1 + rho);
  EXPECT_NEAR(mean, p.mu, 4.0 * std::sqrt(p.stationary_variance() / n_eff));
  EXPECT_NEAR(var, p.stationary_variance(), 0.05 * p.stationary_variance());
  // Counts follow the intensity: total close to sum dt exp(x).
  double expected = 0.0;
  for (double v : x) expected += dt * std::exp(v);
  EXPECT_NEAR(static_cast<double>(sim.counts.total()), expected, 4.0 * std::sqrt(expected));
}

TEST(SimulateLgcp, DeterministicAndValidated) {
  const OuParams p{0.01, -2.0, 0.1};
  const auto a = simulate_lgcp_counts(p, 64, 30.0, 5);
  const auto b = simulate_lgcp_counts(p, 64, 30.0, 5);
  EXPECT_EQ(a.truth, b.truth);
  EXPECT_EQ(a.counts.counts, b.counts.counts);
  EXPECT_EQ(a.counts.origin, 0.0);
  EXPECT_THROW(simulate_lgcp_counts(p, 0, 30.0, 5), Error);
  EXPECT_THROW(simulate_lgcp_counts({0.01, -2.0, 0.0}, 4, 30.0, 5), Error);
}

TEST(SynthesizeCatalog, ArrivalsFollowIntensity) {
  // Constant 2 events per day over 100 bins of 30 days.
  const LatentPath path{30.0, std::vector<double>(100, std::log(2.0))};
  const auto cat = synthesize_catalog(path, PowerLawModel(2.4, 10.0), 6, {.origin = 11000.0});
  const double expected = 2.0 * 3000.0;
  EXPECT_NEAR(static_cast<double>(cat.size()), expected, 4.0 * std::sqrt(expected));
  ASSERT_TRUE(cat.span());
  EXPECT_EQ(cat.span()->start, 11000.0);
  EXPECT_EQ(cat.span()->end, 13999.0);
  for (const auto& e : cat.events()) {
    EXPECT_GE(e.severity, 10);
    EXPECT_EQ(e.time, std::floor(e.time));
    EXPECT_EQ(e.weapon, "synthetic");
  }
  const auto binned = bin_events(cat, 30.0);
  EXPECT_EQ(binned.counts.size(), 100u);
  EXPECT_EQ(binned.total(), static_cast<std::int64_t>(cat.size()));
}

TEST(SynthesizeCatalog, RoundTripsThroughCsv) {
  const auto sim = simulate_lgcp_counts({1.0 / 180.0, std::log(0.1), 0.08}, 24, 30.0, 7);
  const auto cat = synthesize_catalog(sim.truth, PiecewiseModel(2.0, 3.0, 10.0, 80.0), 8,
                                      {.origin = 3653.0, .weapon = "explosives", .source = "test, quoted"});
  std::stringstream buf;
  write_catalog(buf, cat);
  const auto loaded = parse_catalog(buf);
  EXPECT_EQ(loaded.warnings.dropped(), 0u);
  EXPECT_EQ(loaded.catalog.events(), cat.events());
  EXPECT_EQ(synthesize_catalog(sim.truth, PowerLawModel(2.4, 10.0), 8), synthesize_catalog(sim.truth, PowerLawModel(2.4, 10.0), 8));
  EXPECT_THROW(synthesize_catalog({30.0, {}}, PowerLawModel(2.4, 10.0), 8), Error);
}

}  // namespace
}  // namespace tailrisk
