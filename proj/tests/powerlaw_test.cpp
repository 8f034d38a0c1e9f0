#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "tailrisk/error.hpp"
#include "tailrisk/powerlaw.hpp"
#include "tailrisk/synth.hpp"

namespace tailrisk {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected tailrisk::Error";
  return ErrorCode::invalid_argument;
}

// Independent of the library's quantile function.
double pareto_draw(double alpha, double x_min, double u) { return x_min * std::pow(1.0 - u, 1.0 / (1.0 - alpha)); }

// --- distribution functions -------------------------------------------------

TEST(TailCdf, ClosedFormValues) {
  const PowerLawModel m2(2.0, 10.0);
  EXPECT_DOUBLE_EQ(tail_cdf(m2, 10.0), 0.0);
  EXPECT_NEAR(tail_cdf(m2, 100.0), 0.9, 1e-15);
  const PowerLawModel m24(2.4, 10.0);
  EXPECT_NEAR(tail_cdf(m24, 2749.0), 0.9996152706097339, 1e-12);
  EXPECT_NEAR(tail_survival(m24, 2749.0), 3.8472939026617294e-4, 1e-15);
  EXPECT_EQ(code_of([&] { tail_cdf(m2, 9.99); }), ErrorCode::out_of_support);
}

TEST(TailCdf, MonotoneWithLimits) {
  for (double alpha : {1.6, 2.0, 2.4, 3.5}) {
    const TailModel single = PowerLawModel(alpha, 10.0);
    const TailModel piecewise = PiecewiseModel(alpha - 0.4, alpha, 10.0, 80.0);
    for (const auto& model : {single, piecewise}) {
      EXPECT_EQ(tail_cdf(model, 10.0), 0.0);
      double prev = 0.0;
      for (double x = 10.0; x < 1e7; x *= 1.07) {
        const double f = tail_cdf(model, x);
        EXPECT_GE(f, prev);
        prev = f;
      }
      EXPECT_NEAR(tail_cdf(model, 1e12 * 10.0), 1.0, 1e-6);
    }
  }
}

TEST(TailCdf, PiecewiseMatchesQuadratureOracle) {
  // Frozen from adaptive quadrature of the unnormalized density + root finding.
  const PiecewiseModel m(2.0, 3.0, 10.0, 80.0);
  EXPECT_NEAR(m.mass_below_break(), 0.9333333333333333, 1e-13);
  EXPECT_NEAR(m.normalization(), 0.10666666666666667, 1e-14);
  EXPECT_NEAR(tail_cdf(m, 30.0), 0.7111111111111112, 1e-13);
  EXPECT_NEAR(tail_cdf(m, 200.0), 0.9893333333333333, 1e-13);
  EXPECT_NEAR(tail_quantile(m, 0.5), 18.823529411764707, 1e-11);

  const PiecewiseModel unit(1.0, 3.0, 10.0, 80.0);  // alpha1 = 1 takes the logarithmic branch
  EXPECT_NEAR(tail_cdf(unit, 40.0), 0.5374397282200394, 1e-12);
  EXPECT_NEAR(tail_cdf(unit, 500.0), 0.9950376855636495, 1e-12);
}

TEST(TailCdf, PiecewiseDensityContinuousAtBreak) {
  const PiecewiseModel m(1.7, 3.1, 5.0, 60.0);
  const double below = std::exp(log_density(m, std::nextafter(60.0, 0.0)));
  const double at = std::exp(log_density(m, 60.0));
  EXPECT_NEAR(below / at, 1.0, 1e-12);
}

TEST(TailCdf, PiecewiseWithEqualExponentsNestsSinglePowerLaw) {
  for (double alpha : {1.3, 2.0, 2.4, 3.7}) {
    const PowerLawModel single(alpha, 10.0);
    const PiecewiseModel nested(alpha, alpha, 10.0, 80.0);
    for (double x = 10.0; x < 1e6; x *= 1.13) {
      EXPECT_NEAR(tail_cdf(nested, x), tail_cdf(single, x), 1e-12) << alpha << " " << x;
      EXPECT_NEAR(log_density(nested, x), log_density(single, x), 1e-10);
    }
  }
}

TEST(TailQuantile, InvertsCdf) {
  const TailModel models[] = {PowerLawModel(2.4, 10.0), PiecewiseModel(0.5, 2.2, 3.0, 50.0),
                              PiecewiseModel(2.0, 3.0, 10.0, 80.0)};
  for (const auto& m : models) {
    EXPECT_EQ(tail_quantile(m, 0.0), model_x_min(m));
    for (double p = 0.01; p < 1.0; p += 0.07) EXPECT_NEAR(tail_cdf(m, tail_quantile(m, p)), p, 1e-12);
  }
}

// --- estimation ---------------------------------------------------------------

TEST(EmpiricalCdf, RightContinuousSteps) {
  const std::vector<double> one{10};
  EXPECT_DOUBLE_EQ(empirical_tail_cdf(one, 10.0, 10.0), 1.0);
  const std::vector<double> three{10, 20, 30};
  EXPECT_DOUBLE_EQ(empirical_tail_cdf(three, 10.0, 20.0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(empirical_tail_cdf(three, 10.0, 19.99), 1.0 / 3.0);
  EXPECT_EQ(code_of([] { empirical_tail_cdf({}, 10.0, 1.0); }), ErrorCode::empty_sample);
}

TEST(MleAlpha, ClosedForm) {
  const std::vector<double> s{10, 10, 100};
  EXPECT_NEAR(mle_alpha(s, 10.0), 2.3028834457097553, 1e-13);
  EXPECT_EQ(code_of([] { mle_alpha(std::vector<double>{10, 10, 10}, 10.0); }), ErrorCode::degenerate_sample);
  EXPECT_EQ(code_of([] { mle_alpha(std::vector<double>{10, 5}, 10.0); }), ErrorCode::out_of_support);
}

TEST(MleAlpha, RecoversGeneratorExponent) {
  const auto s = sample_power_law(PowerLawModel(2.4, 10.0), 100000, 17);
  EXPECT_NEAR(mle_alpha(s, 10.0), 2.4, 0.02);
}

TEST(MleAlpha, ScaleEquivariant) {
  const auto s = sample_power_law(PowerLawModel(2.1, 3.0), 500, 4);
  const double base = mle_alpha(s, 3.0);
  for (double c : {1e-3, 0.5, 7.0, 1e4}) {
    std::vector<double> scaled(s);
    for (auto& x : scaled) x *= c;
    EXPECT_NEAR(mle_alpha(scaled, 3.0 * c), base, 1e-12);
  }
}

TEST(LogLikelihood, Values) {
  const TailModel m = PowerLawModel(2.0, 1.0);
  EXPECT_NEAR(log_likelihood(m, std::vector<double>{1.0}), 0.0, 1e-15);
  EXPECT_NEAR(log_likelihood(m, std::vector<double>{2.0}), -std::log(4.0), 1e-15);
  EXPECT_EQ(code_of([&] { log_likelihood(m, std::vector<double>{0.5}); }), ErrorCode::out_of_support);

  const auto s = sample_power_law(PowerLawModel(2.4, 10.0), 1000, 2);
  EXPECT_NEAR(log_likelihood(PiecewiseModel(2.4, 2.4, 10.0, 80.0), s), log_likelihood(PowerLawModel(2.4, 10.0), s),
              1e-9);
}

TEST(KsDistance, HandConstructedSamples) {
  const TailModel m = PowerLawModel(2.5, 10.0);
  EXPECT_DOUBLE_EQ(ks_distance(m, std::vector<double>{10.0}, 10.0), 1.0);

  const double eps = 1e-9;
  const std::vector<double> at_quantiles{tail_quantile(m, 0.25), tail_quantile(m, 0.5), tail_quantile(m, 0.75),
                                         tail_quantile(m, 1.0 - eps)};
  EXPECT_NEAR(ks_distance(m, at_quantiles, 10.0), 0.25, 1e-8);
  EXPECT_EQ(code_of([&] { ks_distance(m, {}, 10.0); }), ErrorCode::empty_sample);
}

TEST(KsDistance, SmallForDrawsFromModel) {
  const PowerLawModel model(2.5, 10.0);
  const auto s = sample_power_law(model, 10000, 99);
  EXPECT_LT(ks_distance(model, s, 10.0), 0.025);
}

TEST(KsDistance, ScaledStatisticFollowsKolmogorovLaw) {
  const PowerLawModel model(2.2, 10.0);
  std::vector<double> scaled;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto s = sample_power_law(model, 1000, 1000 + seed);
    scaled.push_back(std::sqrt(1000.0) * ks_distance(model, s, 10.0));
  }
  std::sort(scaled.begin(), scaled.end());
  const double p95 = scaled[474];
  EXPECT_GE(p95, 1.22);
  EXPECT_LE(p95, 1.50);
}

TEST(SelectXmin, PurePowerLaw) {
  const auto s = sample_power_law(PowerLawModel(2.5, 10.0), 10000, 7);
  const auto fit = select_xmin(s);
  EXPECT_NEAR(std::get<PowerLawModel>(fit.model).alpha(), 2.5, 0.05);
  EXPECT_LE(fit.x_min(), 12.0);
  EXPECT_GE(fit.ks_error, 0.0);
  EXPECT_LE(fit.ks_error, 1.0);
}

TEST(SelectXmin, BodyPlusTail) {
  std::vector<double> picks;
  int in_band = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> body(1.0, 10.0);
    std::vector<double> s = sample_power_law(PowerLawModel(2.5, 10.0), 5000, seed + 100);
    for (int i = 0; i < 5000; ++i) s.push_back(body(gen));
    const double x = select_xmin(s).x_min();
    picks.push_back(x);
    in_band += x >= 8.0 && x <= 13.0;
  }
  std::sort(picks.begin(), picks.end());
  EXPECT_GE(picks[picks.size() / 2], 8.0);
  EXPECT_LE(picks[picks.size() / 2], 13.0);
  EXPECT_GE(in_band, 7);
}

TEST(SelectXmin, TwoDistinctValuesAndErrors) {
  const auto fit = select_xmin(std::vector<double>{3, 3, 7, 7, 7});
  EXPECT_EQ(fit.x_min(), 3.0);
  EXPECT_EQ(fit.n_tail, 5u);
  EXPECT_EQ(code_of([] { select_xmin(std::vector<double>{4, 4, 4}); }), ErrorCode::too_few_distinct_values);
  EXPECT_EQ(code_of([] { select_xmin(std::vector<double>{}); }), ErrorCode::too_few_distinct_values);
}

TEST(SelectXmin, InvariantToDuplicatingSample) {
  for (std::uint64_t seed : {5, 6}) {
    std::vector<double> s = sample_power_law(PowerLawModel(2.3, 1.0), 800, seed);
    for (auto& x : s) x = std::floor(x * 4.0);  // integer-like data with ties
    std::vector<double> doubled(s);
    doubled.insert(doubled.end(), s.begin(), s.end());
    EXPECT_EQ(select_xmin(s).x_min(), select_xmin(doubled).x_min());
  }
}

TEST(SelectXmin, ExplicitCandidates) {
  const auto s = sample_power_law(PowerLawModel(2.5, 10.0), 2000, 8);
  const auto fit = select_xmin(s, std::vector<double>{20.0, 10.0, 15.0});
  EXPECT_TRUE(fit.x_min() == 10.0 || fit.x_min() == 15.0 || fit.x_min() == 20.0);
}

TEST(FitPiecewise, SinglePowerLawData) {
  const auto s = sample_power_law(PowerLawModel(2.4, 10.0), 10000, 21);
  const auto fit = fit_piecewise(s, 10.0, 60.0);
  const auto& m = std::get<PiecewiseModel>(fit.model);
  EXPECT_NEAR(m.alpha1(), 2.4, 0.1);
  EXPECT_NEAR(m.alpha2(), 2.4, 0.1);
  EXPECT_GE(fit.log_lik, fit_power_law(s, 10.0).log_lik - 1e-9);
}

TEST(FitPiecewise, RecoversBothExponents) {
  const PiecewiseModel truth(2.0, 3.0, 10.0, 80.0);
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto s = sample_piecewise(truth, 10000, seed);
    const auto fit = fit_piecewise(s, 10.0, 80.0);
    const auto& m = std::get<PiecewiseModel>(fit.model);
    EXPECT_NEAR(m.alpha1(), 2.0, 0.15);
    EXPECT_NEAR(m.alpha2(), 3.0, 0.15);
    const auto above = static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](double x) { return x >= 80.0; }));
    EXPECT_EQ(fit.n_above_break, above);
    EXPECT_EQ(fit.n_tail, s.size());
  }
}

TEST(FitPiecewise, MatchesBruteForceGridMaximum) {
  const auto s = sample_piecewise(PiecewiseModel(1.6, 2.8, 5.0, 40.0), 400, 31);
  const auto fit = fit_piecewise(s, 5.0, 40.0);
  double best = -1e300;
  for (double a1 = 1.0; a1 < 2.4; a1 += 0.005) {
    for (double a2 = 1.8; a2 < 4.5; a2 += 0.005) best = std::max(best, log_likelihood(PiecewiseModel(a1, a2, 5.0, 40.0), s));
  }
  EXPECT_GE(fit.log_lik, best - 1e-9);
  EXPECT_LT(fit.log_lik - best, 0.05);
}

TEST(FitPiecewise, EmptySegment) {
  const auto s = sample_power_law(PowerLawModel(2.4, 10.0), 100, 3);
  const double top = *std::max_element(s.begin(), s.end());
  EXPECT_EQ(code_of([&] { fit_piecewise(s, 10.0, top * 2.0); }), ErrorCode::empty_segment);
  EXPECT_EQ(code_of([&] { fit_piecewise(std::vector<double>{50, 60}, 10.0, 20.0); }), ErrorCode::empty_segment);
}

TEST(LikelihoodRatio, Values) {
  const auto s = sample_power_law(PowerLawModel(2.4, 10.0), 500, 12);
  const auto single = fit_power_law(s, 10.0);
  const auto same = likelihood_ratio_test(single, single, 1);
  EXPECT_EQ(same.statistic, 0.0);
  EXPECT_EQ(same.p_value, 1.0);

  EXPECT_NEAR(chi_squared_sf(2.706, 1), 0.09997137812525883, 1e-12);
  EXPECT_NEAR(chi_squared_sf(2.706, 1), 0.100, 1e-3);

  const auto pw = fit_piecewise(s, 10.0, 40.0);
  const auto lrt = likelihood_ratio_test(single, pw, 2);
  EXPECT_GE(lrt.statistic, 0.0);
  EXPECT_NEAR(lrt.p_value, chi_squared_sf(lrt.statistic, 2), 1e-15);

  const auto other = fit_power_law(s, 12.0);
  EXPECT_EQ(code_of([&] { likelihood_ratio_test(other, pw, 1); }), ErrorCode::mismatched_fits);
}

TEST(LikelihoodRatio, StatisticNonNegative) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = sample_power_law(PowerLawModel(2.0 + 0.05 * static_cast<double>(seed), 1.0), 200, seed);
    auto sorted = s;
    std::sort(sorted.begin(), sorted.end());
    const auto lrt = likelihood_ratio_test(fit_power_law(s, 1.0), fit_piecewise(s, 1.0, sorted[180]), 1);
    EXPECT_GE(lrt.statistic, 0.0);
  }
}

// --- sample max and exceedance ---------------------------------------------------

TEST(SampleMaxQuantile, ReducesToQuantileForOneDraw) {
  const PowerLawModel m(2.4, 10.0);
  for (double q : {0.1, 0.5, 0.9, 0.99}) EXPECT_NEAR(sample_max_quantile(m, 1, q), tail_quantile(m, q), 1e-9);
}

TEST(SampleMaxQuantile, ClosedFormValues) {
  EXPECT_NEAR(sample_max_quantile(PowerLawModel(2.4, 10.0), 994, 0.95), 11544.724380689642, 1e-6);
  EXPECT_NEAR(sample_max_quantile(PowerLawModel(2.4, 10.0), 994, 0.99), 36983.30489724544, 1e-5);
  EXPECT_NEAR(sample_max_quantile(PowerLawModel(2.2, 10.0), 994, 0.95), 37392.18386008998, 1e-5);
  EXPECT_NEAR(sample_max_quantile(PowerLawModel(2.2, 10.0), 994, 0.99), 145436.47424164557, 1e-4);
  EXPECT_THROW(sample_max_quantile(PowerLawModel(2.2, 10.0), 0, 0.5), Error);
  EXPECT_THROW(sample_max_quantile(PowerLawModel(2.2, 10.0), 10, 1.0), Error);
}

TEST(SampleMaxQuantile, AgreesWithMonteCarloMaxima) {
  const double alpha = 2.4, x_min = 10.0;
  const int n = 994, reps = 100000;
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> maxima(reps);
  for (auto& m : maxima) {
    double u_max = 0.0;
    for (int i = 0; i < n; ++i) u_max = std::max(u_max, u01(gen));
    m = pareto_draw(alpha, x_min, u_max);
  }
  for (double q : {0.90, 0.95, 0.99}) {
    const double x_q = sample_max_quantile(PowerLawModel(alpha, x_min), n, q);
    const double frac = static_cast<double>(std::count_if(maxima.begin(), maxima.end(), [&](double m) { return m <= x_q; })) / reps;
    EXPECT_LE(std::abs(frac - q), 3.0 * std::sqrt(q * (1 - q) / reps)) << q;
  }
}

TEST(Exceedance, Values) {
  const TailModel m = PowerLawModel(2.4, 10.0);
  EXPECT_EQ(exceedance_probability(m, 0, 2749.0), 0.0);
  EXPECT_EQ(exceedance_probability(m, 1, 10.0), 1.0);
  EXPECT_EQ(exceedance_probability(m, 50, 10.0), 1.0);
  EXPECT_NEAR(exceedance_probability(m, 994, 2749.0), 0.3178424234043087, 1e-12);
  const double s = tail_survival(m, 5000.0);
  const double naive = 1.0 - std::pow(1.0 - s, 321);
  EXPECT_NEAR(exceedance_probability(m, 321, 5000.0), naive, 1e-12 * naive);
  EXPECT_EQ(code_of([&] { exceedance_probability(m, 5, 3.0); }), ErrorCode::out_of_support);
}

TEST(Exceedance, AgreesWithMonteCarlo) {
  const TailModel m = PiecewiseModel(2.0, 3.0, 10.0, 80.0);
  const int n = 300, reps = 100000;
  const double target = 1000.0;
  const double p = exceedance_probability(m, n, target);
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  // Inverse of the piecewise CDF above the break; the event depends only on
  // the maximum uniform.
  const double u_target = tail_cdf(m, target);
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    double u_max = 0.0;
    for (int i = 0; i < n; ++i) u_max = std::max(u_max, u01(gen));
    hits += u_max >= u_target;
  }
  const double freq = static_cast<double>(hits) / reps;
  EXPECT_LE(std::abs(freq - p), 3.0 * std::sqrt(p * (1 - p) / reps));
}

// --- bootstrap -------------------------------------------------------------------

TEST(Bootstrap, RepeatedValueFailsEveryResample) {
  const std::vector<double> s(50, 12.0);
  const auto r = bootstrap_fit(s, 25, 1);
  EXPECT_TRUE(r.draws.empty());
  EXPECT_EQ(r.failures, 25u);
  EXPECT_EQ(r.n_resamples, 25u);
}

TEST(Bootstrap, RecoversExponentAndStaysAtSampleMinimum) {
  const auto s = sample_power_law(PowerLawModel(2.4, 10.0), 10000, 44);
  const auto r = bootstrap_fit(s, 200, 9, Parallelism{0});
  ASSERT_EQ(r.draws.size() + r.failures, 200u);
  double mean = 0.0;
  for (const auto& d : r.draws) mean += d.alpha;
  mean /= static_cast<double>(r.draws.size());
  EXPECT_NEAR(mean, 2.4, 0.05);
  auto sorted = s;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> x_mins;
  for (const auto& d : r.draws) x_mins.push_back(d.x_min);
  std::sort(x_mins.begin(), x_mins.end());
  // Median selected threshold sits in the bottom quarter of the sample.
  EXPECT_LE(x_mins[x_mins.size() / 2], sorted[sorted.size() / 4]);
}

TEST(Bootstrap, DeterministicAcrossThreadCounts) {
  const auto s = sample_power_law(PowerLawModel(2.2, 5.0), 1500, 3);
  const auto a = bootstrap_fit(s, 24, 77, Parallelism{1});
  const auto b = bootstrap_fit(s, 24, 77, Parallelism{4});
  EXPECT_EQ(a.draws, b.draws);
  EXPECT_EQ(a.failures, b.failures);
  const auto c = bootstrap_fit(s, 24, 78, Parallelism{1});
  EXPECT_NE(a.draws, c.draws);
}

// --- extreme tail ------------------------------------------------------------------

TEST(ExtremeTailKs, ReducesToKsAtXmin) {
  const auto s = sample_power_law(PowerLawModel(2.4, 10.0), 3000, 5);
  const TailModel m = PowerLawModel(2.35, 10.0);
  EXPECT_NEAR(extreme_tail_ks(m, s, 10.0), ks_distance(m, s, 10.0), 1e-14);
  EXPECT_EQ(code_of([&] { extreme_tail_ks(m, s, 1e12); }), ErrorCode::empty_extreme_tail);
}

TEST(ExtremeTailKs, SingleFitWorseOnPiecewiseData) {
  const auto s = sample_piecewise(PiecewiseModel(2.0, 3.0, 10.0, 80.0), 10000, 6);
  const auto single = fit_power_law(s, 10.0);
  const auto pw = fit_piecewise(s, 10.0, 80.0);
  EXPECT_GT(extreme_tail_ks(single.model, s, 80.0), extreme_tail_ks(pw.model, s, 80.0));
}

TEST(ExtremeTailKs, ExposesMidTailBlindSpot) {
  // Sample at the exact quantiles of a model whose extreme tail (x >= 100) is
  // a power law with exponent 2.5 but whose mid-tail is much flatter.
  const PiecewiseModel truth(1.2, 2.5, 10.0, 100.0);
  std::vector<double> s;
  const int n = 2000;
  for (int i = 0; i < n; ++i) s.push_back(tail_quantile(truth, (i + 0.5) / n));
  const TailModel wrong_mid = PowerLawModel(2.5, 10.0);
  const double extreme = extreme_tail_ks(wrong_mid, s, 100.0);
  const double whole = ks_distance(wrong_mid, s, 10.0);
  EXPECT_LT(extreme, 0.02);
  EXPECT_GT(whole, 0.3);
}

// --- cross-validation ---------------------------------------------------------------

TEST(CvSelectXmin, PurePowerLawRecoversExponent) {
  // Every threshold is correct for a pure power law, so held-out scores are
  // flat and the chosen x_min wanders; the exponent should not.
  std::vector<double> alphas;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = sample_power_law(PowerLawModel(2.5, 10.0), 5000, 13 + seed);
    const auto cv = cv_select_xmin(s, {.seed = seed});
    EXPECT_LE(cv.scores.size(), 100u);
    const auto best = std::min_element(cv.scores.begin(), cv.scores.end(),
                                       [](const CvScore& a, const CvScore& b) { return a.mean_score < b.mean_score; });
    EXPECT_EQ(best->x_min, cv.fit.x_min());
    alphas.push_back(std::get<PowerLawModel>(cv.fit.model).alpha());
  }
  std::sort(alphas.begin(), alphas.end());
  EXPECT_NEAR(alphas[alphas.size() / 2], 2.5, 0.1);
}

TEST(CvSelectXmin, OneStandardErrorRuleStaysLow) {
  int low = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = sample_power_law(PowerLawModel(2.5, 10.0), 5000, 13 + seed);
    auto sorted = s;
    std::sort(sorted.begin(), sorted.end());
    const auto cv = cv_select_xmin(s, {.seed = seed, .one_standard_error_rule = true});
    low += cv.fit.x_min() <= sorted[sorted.size() / 10];
  }
  EXPECT_GE(low, 7);
}

TEST(CvSelectXmin, FavoursBreakRegionMoreOftenThanKsSelection) {
  const PiecewiseModel truth(2.0, 3.0, 10.0, 80.0);
  int cv_near_break = 0, ks_near_break = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample_piecewise(truth, 4000, 500 + seed);
    cv_near_break += cv_select_xmin(s, {.seed = seed}).fit.x_min() >= 60.0;
    ks_near_break += select_xmin(s).x_min() >= 60.0;
  }
  EXPECT_GT(cv_near_break, ks_near_break);
}

TEST(CvSelectXmin, BoundaryAndErrors) {
  const auto s = sample_power_law(PowerLawModel(2.5, 10.0), 40, 2);
  EXPECT_NO_THROW(cv_select_xmin(s, {.k_folds = 20, .x_tail_fraction = 0.3}));
  EXPECT_EQ(code_of([&] { cv_select_xmin(s, {.k_folds = 21}); }), ErrorCode::too_few_points);
  const auto a = cv_select_xmin(s, {.k_folds = 4, .x_tail_fraction = 0.3, .seed = 5});
  const auto b = cv_select_xmin(s, {.k_folds = 4, .x_tail_fraction = 0.3, .seed = 5});
  EXPECT_EQ(a.fit.x_min(), b.fit.x_min());
}

}  // namespace
}  // namespace tailrisk
