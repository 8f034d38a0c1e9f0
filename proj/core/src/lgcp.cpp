#include "tailrisk/lgcp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tailrisk/error.hpp"

namespace tailrisk {
namespace {

constexpr double kParamTargetAcceptance = 0.44;

double normal_log_pdf(double x, double mean, double variance) {
  const double r = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * variance) + r * r / variance);
}

void check_lengths(const LatentPath& path, const BinnedCounts& counts) {
  if (path.x.size() != counts.counts.size()) {
    throw Error(ErrorCode::length_mismatch, "path and counts have different numbers of bins");
  }
  if (!path.x.empty() && path.dt != counts.dt) {
    throw Error(ErrorCode::length_mismatch, "path and counts have different bin widths");
  }
}

struct Transition {
  double decay;     // exp(-omega dt)
  double variance;  // OU transition variance over dt
  double stationary;
};

Transition transition(const OuParams& p, double dt) {
  return {std::exp(-p.omega * dt), p.sigma * p.sigma * -std::expm1(-2.0 * p.omega * dt) / (2.0 * p.omega),
          p.stationary_variance()};
}

double latent_log_density(const std::vector<double>& x, const OuParams& p, double dt) {
  if (x.empty()) return 0.0;
  const auto tr = transition(p, dt);
  double lp = normal_log_pdf(x[0], p.mu, tr.stationary);
  for (std::size_t i = 1; i < x.size(); ++i) {
    lp += normal_log_pdf(x[i], p.mu + (x[i - 1] - p.mu) * tr.decay, tr.variance);
  }
  return lp;
}

double param_log_prior(const OuParams& p, const LgcpPriors& priors) {
  return priors.log_omega.log_density(std::log(p.omega)) + priors.mu.log_density(p.mu) +
         priors.log_sigma.log_density(std::log(p.sigma));
}

// The part of the log posterior that depends on the parameters.
double param_dependent_terms(const LatentPath& path, const OuParams& p, const LgcpTarget& target) {
  double lp = 0.0;
  if (target.terms.latent_prior) lp += latent_log_density(path.x, p, path.dt);
  if (target.terms.param_prior) lp += param_log_prior(p, target.priors);
  return lp;
}

struct Evaluated {
  double log_post;
  std::vector<double> grad;
};

Evaluated evaluate(const LatentPath& path, const OuParams& params, const BinnedCounts& counts,
                   const LgcpTarget& target) {
  return {log_posterior(path, params, counts, target), grad_log_posterior(path, params, counts, target)};
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

struct StepOutcome {
  bool accepted;
  double probability;
};

// MALA step reusing the cached log posterior and gradient at the current path.
StepOutcome mala_update(LatentPath& path, Evaluated& current, const OuParams& params, const BinnedCounts& counts,
                        const LgcpTarget& target, double h, Rng& rng) {
  if (!std::isfinite(current.log_post) || !all_finite(current.grad)) {
    throw Error(ErrorCode::nonfinite_gradient, "log posterior or gradient is not finite at the current path");
  }
  const std::size_t n = path.x.size();
  const double drift = 0.5 * h * h;
  LatentPath proposal{path.dt, std::vector<double>(n)};
  double forward = 0.0;  // log q(x' | x) up to the shared constant
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = rng.normal();
    proposal.x[i] = path.x[i] + drift * current.grad[i] + h * xi;
    forward -= 0.5 * xi * xi;
  }
  const double u = rng.uniform();
  if (!all_finite(proposal.x)) return {false, 0.0};
  Evaluated next = evaluate(proposal, params, counts, target);
  if (!std::isfinite(next.log_post) || !all_finite(next.grad)) return {false, 0.0};

  double backward = 0.0;  // log q(x | x')
  for (std::size_t i = 0; i < n; ++i) {
    const double r = path.x[i] - proposal.x[i] - drift * next.grad[i];
    backward -= 0.5 * r * r / (h * h);
  }
  const double log_ratio = next.log_post - current.log_post + backward - forward;
  const double probability = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
  if (std::log(u) < log_ratio) {
    path = std::move(proposal);
    current = std::move(next);
    return {true, probability};
  }
  return {false, probability};
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

void OuParams::validate() const {
  detail::require(omega > 0.0 && std::isfinite(omega), ErrorCode::invalid_argument, "omega must be > 0");
  detail::require(sigma > 0.0 && std::isfinite(sigma), ErrorCode::invalid_argument, "sigma must be > 0");
  detail::require(std::isfinite(mu), ErrorCode::invalid_argument, "mu must be finite");
}

OuMoments ou_moments(double x_prev, const OuParams& params, double dt) {
  params.validate();
  detail::require(dt >= 0.0, ErrorCode::invalid_argument, "dt must be >= 0");
  const auto tr = transition(params, dt);
  return {params.mu + (x_prev - params.mu) * tr.decay, tr.variance};
}

double NormalPrior::log_density(double v) const { return normal_log_pdf(v, mean, sd * sd); }

LgcpPriors LgcpPriors::defaults_for(const BinnedCounts& counts) {
  const double ybar = std::max(counts.mean_count(), 0.5);
  return {{std::log(1.0 / 365.0), 1.5}, {std::log(ybar / counts.dt), 2.0}, {std::log(0.05), 1.5}};
}

LgcpTarget LgcpTarget::defaults_for(const BinnedCounts& counts) { return {LgcpPriors::defaults_for(counts), {}}; }

double log_posterior(const LatentPath& path, const OuParams& params, const BinnedCounts& counts,
                     const LgcpTarget& target) {
  check_lengths(path, counts);
  params.validate();
  double lp = 0.0;
  if (target.terms.likelihood) {
    for (std::size_t i = 0; i < path.x.size(); ++i) {
      lp += static_cast<double>(counts.counts[i]) * path.x[i] - counts.dt * std::exp(path.x[i]);
    }
  }
  return lp + param_dependent_terms(path, params, target);
}

std::vector<double> grad_log_posterior(const LatentPath& path, const OuParams& params, const BinnedCounts& counts,
                                       const LgcpTarget& target) {
  check_lengths(path, counts);
  params.validate();
  const auto& x = path.x;
  std::vector<double> g(x.size(), 0.0);
  if (target.terms.likelihood) {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = static_cast<double>(counts.counts[i]) - counts.dt * std::exp(x[i]);
  }
  if (target.terms.latent_prior && !x.empty()) {
    const auto tr = transition(params, path.dt);
    g[0] -= (x[0] - params.mu) / tr.stationary;
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double r = x[i] - params.mu - tr.decay * (x[i - 1] - params.mu);
      g[i] -= r / tr.variance;
      g[i - 1] += tr.decay * r / tr.variance;
    }
  }
  return g;
}

MalaStep mala_step(const LatentPath& path, const OuParams& params, const BinnedCounts& counts,
                   const LgcpTarget& target, double step_size, Rng& rng) {
  detail::require(step_size > 0.0, ErrorCode::invalid_argument, "step size must be > 0");
  MalaStep out{path};
  Evaluated current = evaluate(path, params, counts, target);
  const auto outcome = mala_update(out.path, current, params, counts, target, step_size, rng);
  out.accepted = outcome.accepted;
  out.acceptance_probability = outcome.probability;
  return out;
}

ParamUpdate update_params(const LatentPath& path, const OuParams& params, const BinnedCounts& counts,
                          const LgcpTarget& target, const ProposalScales& scales, Rng& rng) {
  check_lengths(path, counts);
  params.validate();
  detail::require(scales.log_omega >= 0.0 && scales.mu >= 0.0 && scales.log_sigma >= 0.0,
                  ErrorCode::invalid_argument, "proposal scales must be >= 0");
  ParamUpdate out{params, {}};
  double current = param_dependent_terms(path, out.params, target);
  const std::array<double, 3> scale{scales.log_omega, scales.mu, scales.log_sigma};
  for (int j = 0; j < 3; ++j) {
    const double step = scale[j] * rng.normal();
    const double u = rng.uniform();
    if (scale[j] == 0.0) {
      out.accepted[j] = true;
      continue;
    }
    OuParams proposal = out.params;
    if (j == 0) proposal.omega = std::exp(std::log(proposal.omega) + step);
    if (j == 1) proposal.mu += step;
    if (j == 2) proposal.sigma = std::exp(std::log(proposal.sigma) + step);
    if (!(proposal.omega > 0.0) || !(proposal.sigma > 0.0) || !std::isfinite(proposal.omega) ||
        !std::isfinite(proposal.sigma)) {
      continue;
    }
    const double next = param_dependent_terms(path, proposal, target);
    if (std::isfinite(next) && std::log(u) < next - current) {
      out.params = proposal;
      current = next;
      out.accepted[j] = true;
    }
  }
  return out;
}

PosteriorDraws sample_posterior(const BinnedCounts& counts, const SamplerConfig& config) {
  if (counts.counts.empty()) throw Error(ErrorCode::empty_catalog, "no bins to fit");
  detail::require(config.n_samples >= 1, ErrorCode::invalid_argument, "n_samples must be >= 1");
  detail::require(config.thin >= 1, ErrorCode::invalid_argument, "thin must be >= 1");
  detail::require(config.path_steps_per_sweep >= 1, ErrorCode::invalid_argument, "need >= 1 path step per sweep");
  detail::require(config.step_size_init > 0.0, ErrorCode::invalid_argument, "initial step size must be > 0");
  detail::require(config.target_acceptance > 0.0 && config.target_acceptance < 1.0, ErrorCode::invalid_argument,
                  "target acceptance must lie in (0, 1)");
  const LgcpTarget target = config.target.value_or(LgcpTarget::defaults_for(counts));

  LatentPath path{counts.dt, std::vector<double>(counts.counts.size())};
  for (std::size_t i = 0; i < path.x.size(); ++i) {
    path.x[i] = std::log((static_cast<double>(counts.counts[i]) + 0.5) / counts.dt);
  }
  OuParams params;
  params.omega = std::exp(target.priors.log_omega.mean);
  params.mu = std::accumulate(path.x.begin(), path.x.end(), 0.0) / static_cast<double>(path.x.size());
  params.sigma = std::exp(target.priors.log_sigma.mean);

  Rng rng = Rng::stream(config.seed, {});
  double log_h = std::log(config.step_size_init);
  std::array<double, 3> log_scale{std::log(std::max(config.proposal_scales.log_omega, 1e-12)),
                                  std::log(std::max(config.proposal_scales.mu, 1e-12)),
                                  std::log(std::max(config.proposal_scales.log_sigma, 1e-12))};

  const std::size_t total = config.burn_in + config.n_samples * config.thin;
  const std::size_t window = std::max<std::size_t>(50, config.burn_in / 10);
  std::size_t window_accepts = 0, window_steps = 0;
  std::size_t kept_accepts = 0, kept_steps = 0;
  std::array<std::size_t, 3> kept_param_accepts{};
  std::size_t kept_param_sweeps = 0;

  PosteriorDraws out;
  out.seed = config.seed;
  out.paths.reserve(config.n_samples);
  out.params.reserve(config.n_samples);

  Evaluated current = evaluate(path, params, counts, target);
  for (std::size_t t = 0; t < total; ++t) {
    const bool burning = t < config.burn_in;
    const double gain = 1.0 / std::pow(static_cast<double>(t) + 1.0, 0.6);

    for (std::size_t s = 0; s < config.path_steps_per_sweep; ++s) {
      const auto outcome = mala_update(path, current, params, counts, target, std::exp(log_h), rng);
      if (burning) {
        log_h += gain * (outcome.probability - config.target_acceptance);
        if (config.burn_in - t <= window && config.burn_in >= window) {
          window_accepts += outcome.accepted;
          ++window_steps;
        }
      } else {
        kept_accepts += outcome.accepted;
        ++kept_steps;
      }
    }

    const ProposalScales scales{std::exp(log_scale[0]), std::exp(log_scale[1]), std::exp(log_scale[2])};
    const auto update = update_params(path, params, counts, target, scales, rng);
    for (int j = 0; j < 3; ++j) {
      if (burning) log_scale[j] += gain * ((update.accepted[j] ? 1.0 : 0.0) - kParamTargetAcceptance);
      else kept_param_accepts[j] += update.accepted[j];
    }
    if (!burning) ++kept_param_sweeps;
    if (update.params != params) {
      params = update.params;
      current = evaluate(path, params, counts, target);
    }

    if (t + 1 == config.burn_in && window_steps > 0 && (window_accepts == 0 || window_accepts == window_steps)) {
      throw Error(ErrorCode::adaptation_failure,
                  "path acceptance pinned at " + std::string(window_accepts == 0 ? "0" : "1") +
                      " at the end of burn-in (step size " + std::to_string(std::exp(log_h)) + ")");
    }

    if (!burning && (t - config.burn_in + 1) % config.thin == 0) {
      if (!all_finite(path.x)) throw Error(ErrorCode::nonfinite_gradient, "sampled path has nonfinite values");
      out.paths.push_back(path);
      out.params.push_back(params);
    }
  }

  out.step_size = std::exp(log_h);
  out.path_acceptance = kept_steps ? static_cast<double>(kept_accepts) / static_cast<double>(kept_steps) : 0.0;
  for (int j = 0; j < 3; ++j) {
    out.param_acceptance[j] =
        kept_param_sweeps ? static_cast<double>(kept_param_accepts[j]) / static_cast<double>(kept_param_sweeps) : 0.0;
  }
  return out;
}

IntensityBand summarize_intensity(const PosteriorDraws& draws) {
  detail::require(!draws.paths.empty(), ErrorCode::invalid_argument, "no posterior draws");
  const std::size_t bins = draws.paths.front().x.size();
  IntensityBand band;
  band.mean.resize(bins);
  band.q05.resize(bins);
  band.q95.resize(bins);
  std::vector<double> column(draws.size());
  for (std::size_t b = 0; b < bins; ++b) {
    for (std::size_t d = 0; d < draws.size(); ++d) column[d] = std::exp(draws.paths[d].x[b]);
    band.mean[b] = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(column.size());
    std::sort(column.begin(), column.end());
    band.q05[b] = quantile_sorted(column, 0.05);
    band.q95[b] = quantile_sorted(column, 0.95);
  }
  return band;
}

std::vector<double> simulate_ou_forward(double x_start, const OuParams& params, double dt, std::size_t n_bins,
                                        Rng& rng) {
  std::vector<double> x(n_bins);
  double prev = x_start;
  for (auto& v : x) {
    const auto m = ou_moments(prev, params, dt);
    prev = v = m.mean + std::sqrt(m.variance) * rng.normal();
  }
  return x;
}

std::int64_t count_quantile(std::vector<std::int64_t> counts, double q) {
  detail::require(!counts.empty(), ErrorCode::invalid_argument, "quantile of no counts");
  std::sort(counts.begin(), counts.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(counts.size())));
  return counts[std::clamp<std::size_t>(rank, 1, counts.size()) - 1];
}

CountSummary summarize_counts(const std::vector<std::int64_t>& counts) {
  detail::require(!counts.empty(), ErrorCode::invalid_argument, "summary of no counts");
  CountSummary s;
  double sum = 0.0;
  for (auto c : counts) sum += static_cast<double>(c);
  s.mean = sum / static_cast<double>(counts.size());
  s.q05 = count_quantile(counts, 0.05);
  s.q50 = count_quantile(counts, 0.50);
  s.q95 = count_quantile(counts, 0.95);
  return s;
}

ForecastDistribution forecast_counts(const PosteriorDraws& draws, double horizon, std::size_t sims_per_draw,
                                     std::uint64_t seed, Parallelism parallelism) {
  detail::require(!draws.paths.empty() && draws.paths.size() == draws.params.size(), ErrorCode::invalid_argument,
                  "need aligned, nonempty posterior draws");
  detail::require(horizon > 0.0, ErrorCode::invalid_argument, "horizon must be > 0");
  detail::require(sims_per_draw >= 1, ErrorCode::invalid_argument, "need at least one simulation per draw");

  ForecastDistribution out;
  out.horizon = horizon;
  out.counts.assign(draws.size() * sims_per_draw, 0);
  parallel_for(draws.size(), parallelism, [&](std::size_t d) {
    const auto& path = draws.paths[d];
    const auto& params = draws.params[d];
    detail::require(!path.x.empty(), ErrorCode::invalid_argument, "posterior path has no bins");
    const auto n_bins = static_cast<std::size_t>(std::ceil(horizon / path.dt));
    for (std::size_t s = 0; s < sims_per_draw; ++s) {
      Rng rng = Rng::stream(seed, {d, s});
      double x = path.x.back();
      std::int64_t total = 0;
      for (std::size_t b = 0; b < n_bins; ++b) {
        const double width = std::min(path.dt, horizon - static_cast<double>(b) * path.dt);
        const auto m = ou_moments(x, params, width);
        x = m.mean + std::sqrt(m.variance) * rng.normal();
        total += rng.poisson(width * std::exp(x));
      }
      out.counts[d * sims_per_draw + s] = total;
    }
  });
  out.summary = summarize_counts(out.counts);
  return out;
}

}  // namespace tailrisk
