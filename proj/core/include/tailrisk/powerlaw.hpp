#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "tailrisk/parallel.hpp"

namespace tailrisk {

/// Continuous power law on [x_min, inf): density (alpha - 1) / x_min * (x / x_min)^-alpha.
class PowerLawModel {
 public:
  /// Throws invalid_argument unless alpha > 1 and x_min > 0.
  PowerLawModel(double alpha, double x_min);

  double alpha() const noexcept { return alpha_; }
  double x_min() const noexcept { return x_min_; }

  bool operator==(const PowerLawModel&) const = default;

 private:
  double alpha_;
  double x_min_;
};

/// Two power-law segments joined continuously at x_break:
///   c (x / x_min)^-alpha1                                 on [x_min, x_break)
///   c (x_break / x_min)^-alpha1 (x / x_break)^-alpha2     on [x_break, inf)
/// with c fixed by unit total mass.
class PiecewiseModel {
 public:
  /// Throws invalid_argument unless alpha1 > 0, alpha2 > 1 and 0 < x_min < x_break.
  PiecewiseModel(double alpha1, double alpha2, double x_min, double x_break);

  double alpha1() const noexcept { return alpha1_; }
  double alpha2() const noexcept { return alpha2_; }
  double x_min() const noexcept { return x_min_; }
  double x_break() const noexcept { return x_break_; }

  /// Probability mass on [x_min, x_break).
  double mass_below_break() const noexcept { return mass_below_; }
  /// Density constant c.
  double normalization() const noexcept { return 1.0 / (x_min_ * z_); }

  bool operator==(const PiecewiseModel&) const = default;

 private:
  friend double tail_cdf(const PiecewiseModel&, double);
  friend double tail_survival(const PiecewiseModel&, double);
  friend double log_density(const PiecewiseModel&, double);
  friend double tail_quantile(const PiecewiseModel&, double);

  double alpha1_;
  double alpha2_;
  double x_min_;
  double x_break_;
  double z_;           // normalizer divided by x_min
  double mass_below_;  // F(x_break)
};

using TailModel = std::variant<PowerLawModel, PiecewiseModel>;

double model_x_min(const TailModel& model) noexcept;

// Distribution functions. All throw out_of_support for x < x_min.
double tail_cdf(const PowerLawModel& model, double x);
double tail_cdf(const PiecewiseModel& model, double x);
double tail_cdf(const TailModel& model, double x);

double tail_survival(const PowerLawModel& model, double x);
double tail_survival(const PiecewiseModel& model, double x);
double tail_survival(const TailModel& model, double x);

double log_density(const PowerLawModel& model, double x);
double log_density(const PiecewiseModel& model, double x);
double log_density(const TailModel& model, double x);

/// Inverse CDF on [0, 1).
double tail_quantile(const PowerLawModel& model, double p);
double tail_quantile(const PiecewiseModel& model, double p);
double tail_quantile(const TailModel& model, double p);

/// Fraction of `severities` <= x. Throws empty_sample.
double empirical_tail_cdf(std::span<const double> severities, double x_min, double x);

/// Continuous MLE 1 + n / sum(ln(x_i / x_min)). Throws degenerate_sample when
/// every value equals x_min.
double mle_alpha(std::span<const double> severities, double x_min);

/// Sum of log densities; throws out_of_support if any value is below x_min.
double log_likelihood(const TailModel& model, std::span<const double> severities);

/// Sup distance between model CDF and empirical CDF, evaluated on both sides
/// of every empirical step.
double ks_distance(const TailModel& model, std::span<const double> severities, double x_min);

/// KS distance between the conditional distributions on [x_tail_start, inf).
/// Sample values below x_tail_start are ignored. Throws empty_extreme_tail.
double extreme_tail_ks(const TailModel& model, std::span<const double> severities, double x_tail_start);

struct TailFit {
  TailModel model;
  double ks_error = 0.0;
  std::size_t n_tail = 0;
  double log_lik = 0.0;
  /// Events at or above x_break (piecewise fits only).
  std::size_t n_above_break = 0;

  double x_min() const noexcept { return model_x_min(model); }
  bool is_piecewise() const noexcept { return std::holds_alternative<PiecewiseModel>(model); }
};

/// MLE fit at a fixed threshold using every value >= x_min.
TailFit fit_power_law(std::span<const double> severities, double x_min);

/// Picks x_min minimizing KS distance, alpha by MLE at each candidate. The
/// default candidates are the distinct observed values except the largest.
/// Ties go to the smallest x_min.
TailFit select_xmin(std::span<const double> severities,
                    const std::optional<std::vector<double>>& candidates = std::nullopt);

/// Maximum-likelihood piecewise fit on the values >= x_min with the break
/// held fixed. Throws empty_segment if either side of the break is empty.
TailFit fit_piecewise(std::span<const double> severities, double x_min, double x_break);

struct LikelihoodRatio {
  double statistic = 0.0;
  double p_value = 1.0;
  int df = 1;
};

/// 2 (logL_piecewise - logL_single) referred to chi-squared(df).
LikelihoodRatio likelihood_ratio_test(const TailFit& single, const TailFit& piecewise, int df = 1);

/// Chi-squared upper tail probability.
double chi_squared_sf(double statistic, int df);

/// q-quantile of the maximum of n i.i.d. draws: F^-1(q^(1/n)).
double sample_max_quantile(const PowerLawModel& model, std::int64_t n, double q);

/// Probability that at least one of n draws reaches x_target: 1 - F(x_target)^n.
double exceedance_probability(const TailModel& model, std::int64_t n, double x_target);

struct BootstrapDraw {
  std::size_t resample = 0;
  double x_min = 0.0;
  double alpha = 0.0;

  bool operator==(const BootstrapDraw&) const = default;
};

struct BootstrapResult {
  std::vector<BootstrapDraw> draws;  // ordered by resample index
  std::size_t n_resamples = 0;
  std::size_t failures = 0;
  std::uint64_t seed = 0;
};

/// Nonparametric bootstrap of the joint (x_min, alpha) selection. Resample r
/// draws from the stream (seed, r); degenerate resamples are counted as
/// failures.
BootstrapResult bootstrap_fit(std::span<const double> severities, std::size_t n_resamples, std::uint64_t seed,
                              Parallelism parallelism = {});

struct CvOptions {
  std::optional<std::vector<double>> candidates;
  std::size_t k_folds = 5;
  double x_tail_fraction = 0.05;
  std::uint64_t seed = 0;
  std::size_t max_default_candidates = 100;
  /// Pick the smallest candidate whose mean score is within one standard
  /// error of the best mean score, instead of the arg-min itself. Steadier on
  /// pure power laws, but it rarely moves past a break.
  bool one_standard_error_rule = false;
};

struct CvScore {
  double x_min = 0.0;
  double mean_score = 0.0;  // +inf when the candidate could not be scored
  double std_error = 0.0;   // of the mean over scored folds
  std::size_t folds_scored = 0;
};

struct CvResult {
  TailFit fit;
  double x_tail_start = 0.0;
  std::vector<CvScore> scores;
};

/// k-fold cross-validated threshold choice: alpha is fit on the training
/// folds, and each candidate is scored by the extreme-tail KS distance on the
/// held-out fold. The extreme tail starts at the (1 - x_tail_fraction)
/// empirical quantile of the whole sample (or at the candidate, if larger).
/// Default candidates are distinct values at or below that quantile, thinned
/// evenly by rank to at most max_default_candidates. Ties go to the smallest
/// x_min.
CvResult cv_select_xmin(std::span<const double> severities, const CvOptions& options = {});

}  // namespace tailrisk
