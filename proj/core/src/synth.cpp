#include "tailrisk/synth.hpp"

#include <cmath>

#include "tailrisk/error.hpp"
#include "tailrisk/rng.hpp"

namespace tailrisk {
namespace {

template <class Model>
std::vector<double> inverse_cdf_sample(const Model& model, std::size_t n, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, {});
  std::vector<double> out(n);
  for (auto& x : out) x = tail_quantile(model, rng.uniform());
  return out;
}

}  // namespace

std::vector<double> sample_power_law(const PowerLawModel& model, std::size_t n, std::uint64_t seed) {
  return inverse_cdf_sample(model, n, seed);
}

std::vector<double> sample_piecewise(const PiecewiseModel& model, std::size_t n, std::uint64_t seed) {
  return inverse_cdf_sample(model, n, seed);
}

LgcpSimulation simulate_lgcp_counts(const OuParams& params, std::size_t n_bins, double dt, std::uint64_t seed) {
  params.validate();
  detail::require(n_bins >= 1, ErrorCode::invalid_argument, "need at least one bin");
  detail::require(dt > 0.0, ErrorCode::invalid_argument, "dt must be > 0");
  Rng rng = Rng::stream(seed, {});
  LgcpSimulation sim;
  sim.truth.dt = dt;
  sim.truth.x.resize(n_bins);
  sim.truth.x[0] = params.mu + std::sqrt(params.stationary_variance()) * rng.normal();
  for (std::size_t i = 1; i < n_bins; ++i) {
    const auto m = ou_moments(sim.truth.x[i - 1], params, dt);
    sim.truth.x[i] = m.mean + std::sqrt(m.variance) * rng.normal();
  }
  sim.counts.dt = dt;
  sim.counts.origin = 0.0;
  sim.counts.counts.resize(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) sim.counts.counts[i] = rng.poisson(dt * std::exp(sim.truth.x[i]));
  return sim;
}

EventCatalog synthesize_catalog(const LatentPath& path, const TailModel& severity, std::uint64_t seed,
                                const SyntheticCatalogOptions& options) {
  detail::require(!path.x.empty(), ErrorCode::invalid_argument, "path has no bins");
  Rng arrivals = Rng::stream(seed, {0});
  Rng sizes = Rng::stream(seed, {1});
  std::vector<EventRecord> events;
  double t = 0.0;
  for (std::size_t i = 0; i < path.x.size(); ++i) {
    const double rate = std::exp(path.x[i]);
    const double right = static_cast<double>(i + 1) * path.dt;
    t = static_cast<double>(i) * path.dt;  // memoryless: restart at the bin edge
    for (;;) {
      t += -std::log1p(-arrivals.uniform()) / rate;
      if (t >= right) break;
      EventRecord e;
      e.time = options.origin + std::floor(t);
      e.severity = static_cast<std::int64_t>(std::floor(tail_quantile(severity, sizes.uniform())));
      e.weapon = options.weapon;
      e.source = options.source;
      events.push_back(std::move(e));
    }
  }
  const double last_day = options.origin + std::ceil(static_cast<double>(path.x.size()) * path.dt) - 1.0;
  return EventCatalog(std::move(events), TimeSpan{options.origin, std::max(options.origin, last_day)});
}

}  // namespace tailrisk
