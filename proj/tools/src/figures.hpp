#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "table.hpp"

namespace tailrisk::cli {

// Figure kinds and the table columns each one reads:
//   ccdf             series, x, ccdf           (series "empirical" drawn as points)
//   extremes         alpha, q90, q95, q99, x_target
//   bootstrap-hist   left, right, count, density
//   forecast-hist    left, right, count, density
//   intensity        series, year, value       (series mean/q05/q95/truth/forecast_*)
//   cv               x_min, mean_score, std_error, folds_scored, selected
std::string render_figure(std::string_view kind, const Table& table);
const std::vector<std::string>& figure_kinds();

}  // namespace tailrisk::cli
