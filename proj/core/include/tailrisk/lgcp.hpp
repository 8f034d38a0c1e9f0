#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "tailrisk/catalog.hpp"
#include "tailrisk/parallel.hpp"
#include "tailrisk/rng.hpp"

namespace tailrisk {

/// Ornstein-Uhlenbeck log-intensity dx = -omega (x - mu) dt + sigma dB.
/// Time is in days, so omega is per day and sigma per sqrt(day).
struct OuParams {
  double omega = 1.0 / 365.0;
  double mu = 0.0;
  double sigma = 0.05;

  /// Throws invalid_argument unless omega > 0, sigma > 0 and mu finite.
  void validate() const;

  double stationary_variance() const noexcept { return sigma * sigma / (2.0 * omega); }

  bool operator==(const OuParams&) const = default;
};

struct OuMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact transition of the OU process over a step of dt days.
OuMoments ou_moments(double x_prev, const OuParams& params, double dt);

/// Log-intensity per bin; intensity is exp(x) events per day.
struct LatentPath {
  double dt = 30.0;
  std::vector<double> x;

  bool operator==(const LatentPath&) const = default;
};

struct NormalPrior {
  double mean = 0.0;
  double sd = 1.0;

  double log_density(double v) const;
};

/// Priors on the sampler's working coordinates (log omega, mu, log sigma).
struct LgcpPriors {
  NormalPrior log_omega;
  NormalPrior mu;
  NormalPrior log_sigma;

  /// log omega ~ N(ln(1/365), 1.5^2), mu ~ N(ln(ybar / dt), 2^2) with the mean
  /// bin count ybar floored at 0.5, log sigma ~ N(ln 0.05, 1.5^2).
  static LgcpPriors defaults_for(const BinnedCounts& counts);
};

/// Which terms enter the log posterior. Tests switch terms off to obtain
/// targets with known moments.
struct PosteriorTerms {
  bool likelihood = true;    // Poisson counts
  bool latent_prior = true;  // stationary x_0 plus OU transitions
  bool param_prior = true;

  bool operator==(const PosteriorTerms&) const = default;
};

struct LgcpTarget {
  LgcpPriors priors;
  PosteriorTerms terms;

  static LgcpTarget defaults_for(const BinnedCounts& counts);
};

/// sum_i [y_i x_i - dt exp(x_i)] + log N(x_0; mu, sigma^2 / (2 omega))
///   + sum_{i>0} log N(x_i; OU mean, OU variance) + parameter log-priors.
/// Count-only constants are dropped. Throws length_mismatch.
double log_posterior(const LatentPath& path, const OuParams& params, const BinnedCounts& counts,
                     const LgcpTarget& target);

/// Exact gradient of log_posterior with respect to the path values.
std::vector<double> grad_log_posterior(const LatentPath& path, const OuParams& params, const BinnedCounts& counts,
                                       const LgcpTarget& target);

struct MalaStep {
  LatentPath path;
  bool accepted = false;
  double acceptance_probability = 0.0;
};

/// One Metropolis-adjusted Langevin update of the whole path:
///   x' = x + (h^2 / 2) grad + h xi,  accepted with the Metropolis-Hastings
///   ratio including both proposal densities.
/// Throws nonfinite_gradient if the gradient at the current path is not finite.
MalaStep mala_step(const LatentPath& path, const OuParams& params, const BinnedCounts& counts,
                   const LgcpTarget& target, double step_size, Rng& rng);

/// Random-walk scales on (log omega, mu, log sigma).
struct ProposalScales {
  double log_omega = 0.1;
  double mu = 0.1;
  double log_sigma = 0.1;
};

struct ParamUpdate {
  OuParams params;
  std::array<bool, 3> accepted{};  // log omega, mu, log sigma
};

/// One Metropolis random-walk update per parameter, in turn, with the path fixed.
ParamUpdate update_params(const LatentPath& path, const OuParams& params, const BinnedCounts& counts,
                          const LgcpTarget& target, const ProposalScales& scales, Rng& rng);

struct SamplerConfig {
  std::size_t n_samples = 2000;
  std::size_t burn_in = 5000;
  std::size_t thin = 5;
  double step_size_init = 0.05;
  double target_acceptance = 0.574;
  std::uint64_t seed = 0;
  /// MALA path updates per sweep; each sweep ends with one parameter update.
  std::size_t path_steps_per_sweep = 1;
  ProposalScales proposal_scales;
  /// Overrides LgcpTarget::defaults_for(counts) when set.
  std::optional<LgcpTarget> target;
};

struct PosteriorDraws {
  std::vector<LatentPath> paths;
  std::vector<OuParams> params;
  double path_acceptance = 0.0;
  std::array<double, 3> param_acceptance{};
  double step_size = 0.0;  // frozen value after burn-in
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return paths.size(); }
};

/// Alternates MALA path sweeps and parameter updates. The MALA step size is
/// tuned by Robbins-Monro toward target_acceptance (and the parameter scales
/// toward 0.44) during burn-in only, then frozen. Retains every thin-th sweep
/// after burn-in. Throws adaptation_failure if the path chain accepted every
/// or no proposal over the last stretch of burn-in.
PosteriorDraws sample_posterior(const BinnedCounts& counts, const SamplerConfig& config);

/// Pointwise posterior summaries of intensity exp(x) per bin.
struct IntensityBand {
  std::vector<double> mean;
  std::vector<double> q05;
  std::vector<double> q95;
};

IntensityBand summarize_intensity(const PosteriorDraws& draws);

/// Simulates the log-intensity forward from x_start over n_bins bins of width
/// dt by exact OU transitions.
std::vector<double> simulate_ou_forward(double x_start, const OuParams& params, double dt, std::size_t n_bins,
                                        Rng& rng);

struct CountSummary {
  double mean = 0.0;
  std::int64_t q05 = 0;
  std::int64_t q50 = 0;
  std::int64_t q95 = 0;
};

/// Nearest-rank quantile (smallest value with at least q of the mass at or below it).
std::int64_t count_quantile(std::vector<std::int64_t> counts, double q);
CountSummary summarize_counts(const std::vector<std::int64_t>& counts);

struct ForecastDistribution {
  double horizon = 0.0;  // days
  std::vector<std::int64_t> counts;  // ordered by (draw, simulation)
  CountSummary summary;
};

/// Forward simulation from each draw's terminal value with the draw's
/// parameters; bins of width dt (the last one truncated to the horizon) with
/// Poisson counts of mean width * exp(x). Draw d, simulation s uses the
/// stream (seed, d, s).
ForecastDistribution forecast_counts(const PosteriorDraws& draws, double horizon, std::size_t sims_per_draw,
                                     std::uint64_t seed, Parallelism parallelism = {});

}  // namespace tailrisk
