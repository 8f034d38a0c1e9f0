#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tailrisk/catalog.hpp"
#include "tailrisk/lgcp.hpp"
#include "tailrisk/powerlaw.hpp"

namespace tailrisk {

// Exact generators used as oracles for the estimators. Every generator is a
// pure function of its parameters and seed; uniforms are drawn on [0, 1).

std::vector<double> sample_power_law(const PowerLawModel& model, std::size_t n, std::uint64_t seed);
std::vector<double> sample_piecewise(const PiecewiseModel& model, std::size_t n, std::uint64_t seed);

struct LgcpSimulation {
  LatentPath truth;
  BinnedCounts counts;
};

/// x_0 from the stationary law, then exact OU transitions; counts are
/// Poisson(dt exp(x_i)). Bins start at day 0.
LgcpSimulation simulate_lgcp_counts(const OuParams& params, std::size_t n_bins, double dt, std::uint64_t seed);

struct SyntheticCatalogOptions {
  DayNumber origin = 0.0;
  std::string weapon = "synthetic";
  std::string source = "synth";
};

/// Event catalog whose arrivals follow the piecewise-constant intensity
/// exp(x_i) over each bin of `path` (exponential gaps, memoryless across bin
/// edges), with severities drawn from `severity` and rounded down to whole
/// deaths. The span covers every bin.
EventCatalog synthesize_catalog(const LatentPath& path, const TailModel& severity, std::uint64_t seed,
                                const SyntheticCatalogOptions& options = {});

}  // namespace tailrisk
