#include "figures.hpp"

#include <cmath>
#include <map>

#include "svg.hpp"
#include "tailrisk/error.hpp"

namespace tailrisk::cli {
namespace {

const char* const kPalette[] = {"#1f5fa8", "#c0392b", "#27864a", "#8e44ad", "#d68910", "#17a2b8"};

// Groups rows by the "series" column, keeping first-appearance order.
std::vector<std::pair<std::string, std::vector<svg::Point>>> by_series(const Table& t, std::string_view x,
                                                                       std::string_view y) {
  std::vector<std::pair<std::string, std::vector<svg::Point>>> out;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const auto& name = t.text(r, "series");
    auto [it, fresh] = index.try_emplace(name, out.size());
    if (fresh) out.push_back({name, {}});
    out[it->second].second.push_back({t.number(r, x), t.number(r, y)});
  }
  return out;
}

std::string ccdf(const Table& t) {
  svg::Figure f;
  f.title = "Tail distribution";
  f.x = {"severity x", true};
  f.y = {"P(X >= x)", true};
  std::size_t color = 0;
  for (auto& [name, pts] : by_series(t, "x", "ccdf")) {
    if (name == "empirical") {
      f.markers.push_back({std::move(pts), "#555555", 1.8, name});
    } else {
      f.lines.push_back({std::move(pts), kPalette[color++ % 6], 2.0, name == "piecewise", name});
    }
  }
  return svg::render(f);
}

std::string extremes(const Table& t) {
  svg::Figure f;
  f.title = "Percentiles of the sample maximum";
  f.x = {"alpha", false};
  f.y = {"severity of largest event", true};
  const auto alpha = t.numbers("alpha");
  const std::pair<const char*, const char*> qs[] = {{"q90", "90th"}, {"q95", "95th"}, {"q99", "99th"}};
  std::size_t color = 0;
  for (auto [col, label] : qs) {
    const auto v = t.numbers(col);
    svg::Line line{{}, kPalette[color++], 2.0, false, label};
    for (std::size_t i = 0; i < alpha.size(); ++i) line.points.push_back({alpha[i], v[i]});
    f.lines.push_back(std::move(line));
  }
  if (t.rows() > 0) {
    const double target = t.number(0, "x_target");
    f.refs.push_back({target, true, "x = " + format_number(target)});
  }
  return svg::render(f);
}

std::string histogram(const Table& t, std::string title, std::string xlabel) {
  svg::Figure f;
  f.title = std::move(title);
  f.x = {std::move(xlabel), false};
  f.y = {"density", false};
  f.bars.push_back({t.numbers("left"), t.numbers("right"), t.numbers("density")});
  return svg::render(f);
}

std::string intensity(const Table& t) {
  svg::Figure f;
  f.title = "Event intensity";
  f.x = {"year", false};
  f.y = {"events per day", false};
  std::vector<svg::Point> q05, q95;
  std::size_t color = 2;
  for (auto& [name, pts] : by_series(t, "year", "value")) {
    if (name == "q05") q05 = std::move(pts);
    else if (name == "q95") q95 = std::move(pts);
    else if (name == "mean") f.lines.push_back({std::move(pts), "#000000", 1.5, false, "posterior mean"});
    else if (name == "truth") f.lines.push_back({std::move(pts), "#c0392b", 1.2, false, "true intensity"});
    else if (name == "observed") f.markers.push_back({std::move(pts), "#1f5fa8", 1.5, "counts / dt"});
    else f.lines.push_back({std::move(pts), kPalette[color++ % 6], 1.0, false, ""});
  }
  if (!q05.empty() && q05.size() == q95.size()) {
    svg::Band band{{}, {}, {}, "#cccccc", "90% range"};
    for (std::size_t i = 0; i < q05.size(); ++i) {
      band.x.push_back(q05[i].x);
      band.lo.push_back(q05[i].y);
      band.hi.push_back(q95[i].y);
    }
    f.bands.push_back(std::move(band));
  }
  return svg::render(f);
}

std::string cv(const Table& t) {
  svg::Figure f;
  f.title = "Cross-validated extreme-tail KS";
  f.x = {"x_min", true};
  f.y = {"mean held-out KS", false};
  svg::Band band{{}, {}, {}, "#dddddd", "+/- 1 s.e."};
  svg::Line line{{}, kPalette[0], 1.5, false, "mean score"};
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const double x = t.number(r, "x_min"), m = t.number(r, "mean_score"), se = t.number(r, "std_error");
    if (!std::isfinite(m)) continue;
    band.x.push_back(x);
    band.lo.push_back(m - se);
    band.hi.push_back(m + se);
    line.points.push_back({x, m});
    if (t.number(r, "selected") != 0.0) f.refs.push_back({x, false, "selected"});
  }
  f.bands.push_back(std::move(band));
  f.lines.push_back(std::move(line));
  return svg::render(f);
}

}  // namespace

const std::vector<std::string>& figure_kinds() {
  static const std::vector<std::string> kinds{"ccdf", "extremes", "bootstrap-hist", "forecast-hist", "intensity", "cv"};
  return kinds;
}

std::string render_figure(std::string_view kind, const Table& table) {
  if (kind == "ccdf") return ccdf(table);
  if (kind == "extremes") return extremes(table);
  if (kind == "bootstrap-hist") return histogram(table, "Bootstrap distribution of alpha", "alpha");
  if (kind == "forecast-hist") return histogram(table, "Forecast number of events", "events over horizon");
  if (kind == "intensity") return intensity(table);
  if (kind == "cv") return cv(table);
  throw Error(ErrorCode::invalid_argument, "unknown figure kind '" + std::string(kind) + "'");
}

}  // namespace tailrisk::cli
