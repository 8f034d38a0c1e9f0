#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "figures.hpp"
#include "tailrisk/catalog.hpp"
#include "tailrisk/error.hpp"
#include "tailrisk/lgcp.hpp"
#include "tailrisk/parallel.hpp"
#include "tailrisk/powerlaw.hpp"
#include "tailrisk/rng.hpp"
#include "tailrisk/synth.hpp"

namespace tailrisk::cli {

using detail::require;
namespace fs = std::filesystem;

// --- output -------------------------------------------------------------------------

Output::Output(GlobalOptions options) : options_(std::move(options)) {
  std::error_code ec;
  fs::create_directories(options_.out_dir, ec);
  if (ec) throw Error(ErrorCode::invalid_argument, "cannot create " + options_.out_dir.string() + ": " + ec.message());
}

void Output::write(const std::string& file_name, const std::string& contents) {
  const auto path = options_.out_dir / file_name;
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + path.string());
  if (std::find(files_.begin(), files_.end(), file_name) == files_.end()) files_.push_back(file_name);
}

void Output::table(const std::string& name, const Table& table, const std::string& figure_kind) {
  const bool csv = options_.format != Format::svg || figure_kind.empty();
  const bool svg = options_.format != Format::csv && !figure_kind.empty();
  if (csv) {
    std::ostringstream s;
    table.write_csv(s);
    write(name + ".csv", s.str());
  }
  if (svg) write(name + ".svg", render_figure(figure_kind, table));
}

void Output::data_file(const std::string& file_name, const std::string& contents) { write(file_name, contents); }

void Output::report(const Report& report) {
  write("report.txt", report.to_text());
  write("report.json", report.to_json());
}

void Output::manifest(const std::string& command, const std::vector<std::pair<std::string, std::string>>& flags) {
  std::string s = "tailrisk " TAILRISK_VERSION "\ncommand = " + command + "\n";
  for (const auto& [k, v] : flags) s += k + " = " + v + "\n";
  s += "files =";
  for (const auto& f : files_) s += " " + f;
  s += " manifest.txt\n";
  write("manifest.txt", s);
}

namespace {

// --- shared helpers ---------------------------------------------------------------------

std::optional<TimeSpan> parse_window(const CatalogInput& in) {
  if (!in.start && !in.end) return std::nullopt;
  auto day = [](const std::optional<std::string>& text, double fallback) {
    if (!text) return fallback;
    const auto d = parse_date(*text);
    if (!d) throw Error(ErrorCode::invalid_argument, "bad date '" + *text + "' (want YYYY-MM-DD)");
    return *d;
  };
  const TimeSpan w{day(in.start, -1e9), day(in.end, 1e9)};
  require(w.start <= w.end, ErrorCode::invalid_range, "--start is after --end");
  return w;
}

EventCatalog load_selection(const CatalogInput& in, Report& report) {
  require(in.min_severity > 0.0, ErrorCode::invalid_argument, "--min-severity must be > 0 for tail fitting");
  const auto loaded = load_catalog(in.path);
  report.set("catalog", in.path.string());
  report.set("catalog_events", loaded.catalog.size());
  report.set("rows_dropped", loaded.warnings.dropped());
  report.set("rows_bad_date", loaded.warnings.bad_date);
  report.set("rows_bad_severity", loaded.warnings.bad_severity);
  report.set("rows_wrong_field_count", loaded.warnings.wrong_field_count);
  const auto selected = filter_tail(loaded.catalog, {in.min_severity, in.weapon, parse_window(in)});
  report.set("min_severity", in.min_severity);
  if (in.weapon) report.set("weapon", *in.weapon);
  report.set("selected_events", selected.size());
  if (selected.span()) {
    report.set("span_start", format_date(selected.span()->start));
    report.set("span_end", format_date(selected.span()->end));
  }
  return selected;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    out[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  // exp(log(lo)) can land an ulp below lo, outside the model's support.
  out.front() = lo;
  if (n > 1) out.back() = hi;
  return out;
}

// Empirical P(X >= x) at each distinct tail value.
void add_empirical_ccdf(Table& t, std::vector<double> values, double x_min) {
  std::erase_if(values, [&](double v) { return v < x_min; });
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0 && values[i] == values[i - 1]) continue;
    t.add_row({"empirical", format_number(values[i]), format_number(static_cast<double>(values.size() - i) / n)});
  }
}

void add_model_ccdf(Table& t, const std::string& name, const TailModel& model, double hi, std::size_t points) {
  for (double x : log_grid(model_x_min(model), hi, points)) {
    t.add_row({name, format_number(x), format_number(tail_survival(model, x))});
  }
}

Table histogram(const std::vector<double>& values, std::size_t bins, double lo, double hi) {
  require(bins >= 1, ErrorCode::invalid_argument, "histogram needs at least one bin");
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>(std::clamp(std::floor((v - lo) / width), 0.0, static_cast<double>(bins - 1)));
    ++counts[b];
  }
  Table t({"left", "right", "count", "density"});
  const double n = static_cast<double>(std::max<std::size_t>(values.size(), 1));
  for (std::size_t b = 0; b < bins; ++b) {
    t.add_row({format_number(lo + static_cast<double>(b) * width), format_number(lo + static_cast<double>(b + 1) * width),
               format_number(counts[b]), format_number(static_cast<double>(counts[b]) / (n * width))});
  }
  return t;
}

double to_year(DayNumber day) { return 1970.0 + day / 365.2425; }

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

// --- fit ------------------------------------------------------------------------------

void run_fit(const FitOptions& o, Output& out, Report& report) {
  require(o.x_target > 0.0, ErrorCode::invalid_argument, "--x-target must be > 0");
  require(o.curve_points >= 2, ErrorCode::invalid_argument, "--curve-points must be >= 2");
  if (o.x_min) require(*o.x_min > 0.0, ErrorCode::invalid_argument, "--x-min must be > 0");
  if (o.n_events) require(*o.n_events >= 0, ErrorCode::invalid_argument, "--n-events must be >= 0");
  const auto catalog = load_selection(o.input, report);
  const auto severities = catalog.severities();

  const TailFit single = o.x_min ? fit_power_law(severities, *o.x_min) : select_xmin(severities);
  const auto& pl = std::get<PowerLawModel>(single.model);
  if (o.x_target < pl.x_min()) {
    throw Error(ErrorCode::out_of_support, "--x-target " + format_number(o.x_target) + " is below x_min " +
                                               format_number(pl.x_min()));
  }
  const auto n = o.n_events.value_or(static_cast<std::int64_t>(single.n_tail));
  report.set("x_min_selection", o.x_min ? "fixed" : "ks");
  report.set("x_min", pl.x_min());
  report.set("alpha", pl.alpha());
  report.set("n_tail", single.n_tail);
  report.set("ks", single.ks_error);
  report.set("log_likelihood", single.log_lik);
  report.set("x_target", o.x_target);
  report.set("exceedance_n", n);
  report.set("exceedance", exceedance_probability(single.model, n, o.x_target));

  double hi = o.x_target;
  for (double v : severities) hi = std::max(hi, v);
  Table ccdf({"series", "x", "ccdf"});
  add_empirical_ccdf(ccdf, severities, pl.x_min());
  add_model_ccdf(ccdf, "single", single.model, hi, o.curve_points);

  if (o.x_break) {
    const TailFit pw = fit_piecewise(severities, pl.x_min(), *o.x_break);
    const auto& m = std::get<PiecewiseModel>(pw.model);
    report.set("x_break", m.x_break());
    report.set("alpha1", m.alpha1());
    report.set("alpha2", m.alpha2());
    report.set("n_above_break", pw.n_above_break);
    report.set("ks_piecewise", pw.ks_error);
    report.set("log_likelihood_piecewise", pw.log_lik);
    report.set("extreme_tail_ks_single", extreme_tail_ks(single.model, severities, m.x_break()));
    report.set("extreme_tail_ks_piecewise", extreme_tail_ks(pw.model, severities, m.x_break()));
    // The break is fixed, so the natural df is 1; df = 2 counts the break as fitted.
    const auto lrt1 = likelihood_ratio_test(single, pw, 1);
    const auto lrt2 = likelihood_ratio_test(single, pw, 2);
    report.set("lrt_statistic", lrt1.statistic);
    report.set("lrt_p_value_df1", lrt1.p_value);
    report.set("lrt_p_value_df2", lrt2.p_value);
    report.set("exceedance_piecewise", exceedance_probability(pw.model, n, o.x_target));
    add_model_ccdf(ccdf, "piecewise", pw.model, hi, o.curve_points);
  }
  out.table("fit_ccdf", ccdf, "ccdf");
}

// --- extremes -------------------------------------------------------------------------

void run_extremes(const ExtremesOptions& o, Output& out, Report& report) {
  require(o.alpha_step > 0.0 && std::isfinite(o.alpha_step), ErrorCode::invalid_range, "--alpha-step must be > 0");
  require(o.alpha_min > 1.0, ErrorCode::invalid_range, "--alpha-min must be > 1");
  require(o.alpha_max >= o.alpha_min, ErrorCode::invalid_range, "--alpha-max is below --alpha-min");
  require(o.x_min > 0.0, ErrorCode::invalid_argument, "--x-min must be > 0");
  require(o.n >= 1, ErrorCode::invalid_argument, "--n must be >= 1");
  require(o.x_target >= o.x_min, ErrorCode::out_of_support, "--x-target is below --x-min");

  const auto steps = static_cast<std::size_t>(std::floor((o.alpha_max - o.alpha_min) / o.alpha_step + 1e-9));
  require(steps < 100000, ErrorCode::invalid_range, "alpha grid has too many points");
  std::vector<double> alphas;
  for (std::size_t i = 0; i <= steps; ++i) alphas.push_back(o.alpha_min + static_cast<double>(i) * o.alpha_step);

  constexpr double qs[] = {0.90, 0.95, 0.99};
  std::vector<std::array<double, 3>> analytic(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    for (int j = 0; j < 3; ++j) analytic[i][j] = sample_max_quantile(PowerLawModel(alphas[i], o.x_min), o.n, qs[j]);
  }

  // Monte Carlo: the fraction of simulated maxima at or below each analytic
  // quantile should be q, within binomial error.
  std::vector<std::array<double, 3>> mc_fraction(alphas.size());
  if (o.mc_replicates > 0) {
    parallel_for(alphas.size(), Parallelism{out.options().threads}, [&](std::size_t i) {
      Rng rng = Rng::stream(out.options().seed, {i});
      const PowerLawModel model(alphas[i], o.x_min);
      std::array<std::size_t, 3> below{};
      for (std::size_t r = 0; r < o.mc_replicates; ++r) {
        double u_max = 0.0;
        for (std::int64_t k = 0; k < o.n; ++k) u_max = std::max(u_max, rng.uniform());
        const double m = tail_quantile(model, u_max);
        for (int j = 0; j < 3; ++j) below[j] += m <= analytic[i][j];
      }
      for (int j = 0; j < 3; ++j) mc_fraction[i][j] = static_cast<double>(below[j]) / static_cast<double>(o.mc_replicates);
    });
  }

  std::vector<std::string> cols{"alpha", "q90", "q95", "q99", "x_target"};
  if (o.mc_replicates > 0) cols.insert(cols.end(), {"mc_fraction_q90", "mc_fraction_q95", "mc_fraction_q99"});
  Table t(cols);
  double worst_z = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    std::vector<std::string> row{format_number(alphas[i]), format_number(analytic[i][0]), format_number(analytic[i][1]),
                                 format_number(analytic[i][2]), format_number(o.x_target)};
    const std::string a = fixed2(alphas[i]);
    for (int j = 0; j < 3; ++j) report.set("q" + std::to_string(static_cast<int>(qs[j] * 100)) + "_alpha_" + a, analytic[i][j]);
    report.set("exceedance_alpha_" + a, exceedance_probability(PowerLawModel(alphas[i], o.x_min), o.n, o.x_target));
    if (o.mc_replicates > 0) {
      for (int j = 0; j < 3; ++j) {
        row.push_back(format_number(mc_fraction[i][j]));
        const double se = std::sqrt(qs[j] * (1 - qs[j]) / static_cast<double>(o.mc_replicates));
        worst_z = std::max(worst_z, std::abs(mc_fraction[i][j] - qs[j]) / se);
      }
    }
    t.add_row(std::move(row));
  }
  report.set("x_min", o.x_min);
  report.set("n", o.n);
  report.set("x_target", o.x_target);
  report.set("alpha_points", alphas.size());
  if (o.mc_replicates > 0) {
    report.set("mc_replicates", o.mc_replicates);
    report.set("mc_max_abs_z", worst_z);
    report.set("mc_within_3se", worst_z <= 3.0);
  }
  out.table("extremes", t, "extremes");
}

// --- bootstrap --------------------------------------------------------------------------

void run_bootstrap(const BootstrapOptions& o, Output& out, Report& report) {
  require(o.resamples >= 1, ErrorCode::invalid_argument, "--resamples must be >= 1");
  require(o.window_half_width >= 0.0, ErrorCode::invalid_argument, "--window-half-width must be >= 0");
  const auto catalog = load_selection(o.input, report);
  const auto severities = catalog.severities();
  const auto result = bootstrap_fit(severities, o.resamples, out.options().seed, Parallelism{out.options().threads});

  Table draws({"resample", "x_min", "alpha"});
  std::vector<double> alphas, x_mins;
  for (const auto& d : result.draws) {
    draws.add_row({format_number(d.resample), format_number(d.x_min), format_number(d.alpha)});
    alphas.push_back(d.alpha);
    x_mins.push_back(d.x_min);
  }
  report.set("resamples", result.n_resamples);
  report.set("failures", result.failures);
  report.set("draws", result.draws.size());
  if (!alphas.empty()) {
    auto sorted = alphas;
    std::sort(sorted.begin(), sorted.end());
    auto q = [&](const std::vector<double>& v, double p) {
      return v[std::min(v.size() - 1, static_cast<std::size_t>(p * static_cast<double>(v.size())))];
    };
    const double mean = std::accumulate(alphas.begin(), alphas.end(), 0.0) / static_cast<double>(alphas.size());
    double ss = 0.0;
    for (double a : alphas) ss += (a - mean) * (a - mean);
    report.set("alpha_mean", mean);
    report.set("alpha_sd", alphas.size() > 1 ? std::sqrt(ss / static_cast<double>(alphas.size() - 1)) : 0.0);
    report.set("alpha_q05", q(sorted, 0.05));
    report.set("alpha_median", q(sorted, 0.5));
    report.set("alpha_q95", q(sorted, 0.95));
    std::sort(x_mins.begin(), x_mins.end());
    report.set("x_min_median", q(x_mins, 0.5));
    const auto inside = std::count_if(alphas.begin(), alphas.end(), [&](double a) {
      return std::abs(a - o.window_center) <= o.window_half_width;
    });
    report.set("window_center", o.window_center);
    report.set("window_half_width", o.window_half_width);
    report.set("window_fraction", static_cast<double>(inside) / static_cast<double>(alphas.size()));
    out.table("bootstrap_hist", histogram(alphas, o.hist_bins, sorted.front(), sorted.back()), "bootstrap-hist");
  }
  out.table("bootstrap_draws", draws);
}

// --- forecast ---------------------------------------------------------------------------

void run_forecast(const ForecastOptions& o, Output& out, Report& report) {
  require(o.dt > 0.0, ErrorCode::invalid_argument, "--dt must be > 0");
  require(o.horizon > 0.0, ErrorCode::invalid_argument, "--horizon must be > 0");
  require(o.samples >= 1 && o.thin >= 1, ErrorCode::invalid_argument, "--samples and --thin must be >= 1");
  require(o.sims_per_draw >= 1, ErrorCode::invalid_argument, "--sims-per-draw must be >= 1");
  require(o.step_size > 0.0, ErrorCode::invalid_argument, "--step-size must be > 0");
  const auto catalog = load_selection(o.input, report);
  const auto counts = bin_events(catalog, o.dt);

  LgcpTarget target = LgcpTarget::defaults_for(counts);
  auto apply = [](NormalPrior& prior, const std::optional<std::vector<double>>& v, const char* flag) {
    if (!v) return;
    if (v->size() != 2 || !((*v)[1] > 0.0)) {
      throw Error(ErrorCode::invalid_argument, std::string(flag) + " takes MEAN,SD with SD > 0");
    }
    prior = {(*v)[0], (*v)[1]};
  };
  apply(target.priors.log_omega, o.priors.log_omega, "--prior-log-omega");
  apply(target.priors.mu, o.priors.mu, "--prior-mu");
  apply(target.priors.log_sigma, o.priors.log_sigma, "--prior-log-sigma");

  SamplerConfig config;
  config.n_samples = o.samples;
  config.burn_in = o.burn_in;
  config.thin = o.thin;
  config.step_size_init = o.step_size;
  config.seed = out.options().seed;
  config.target = target;
  report.set("dt", o.dt);
  report.set("bins", counts.counts.size());
  report.set("binned_events", counts.total());
  report.set("prior_log_omega", format_number(target.priors.log_omega.mean) + "," + format_number(target.priors.log_omega.sd));
  report.set("prior_mu", format_number(target.priors.mu.mean) + "," + format_number(target.priors.mu.sd));
  report.set("prior_log_sigma", format_number(target.priors.log_sigma.mean) + "," + format_number(target.priors.log_sigma.sd));
  const auto draws = sample_posterior(counts, config);
  report.set("draws", draws.size());
  report.set("step_size", draws.step_size);
  report.set("path_acceptance", draws.path_acceptance);
  report.set("acceptance_log_omega", draws.param_acceptance[0]);
  report.set("acceptance_mu", draws.param_acceptance[1]);
  report.set("acceptance_log_sigma", draws.param_acceptance[2]);

  auto param_summary = [&](const char* name, auto get) {
    std::vector<double> v;
    for (const auto& p : draws.params) v.push_back(get(p));
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    std::sort(v.begin(), v.end());
    report.set(std::string(name) + "_mean", mean);
    report.set(std::string(name) + "_q05", v[static_cast<std::size_t>(0.05 * static_cast<double>(v.size() - 1))]);
    report.set(std::string(name) + "_q95", v[static_cast<std::size_t>(0.95 * static_cast<double>(v.size() - 1))]);
  };
  param_summary("omega", [](const OuParams& p) { return p.omega; });
  param_summary("mu", [](const OuParams& p) { return p.mu; });
  param_summary("sigma", [](const OuParams& p) { return p.sigma; });

  const auto forecast = forecast_counts(draws, o.horizon, o.sims_per_draw, out.options().seed,
                                        Parallelism{out.options().threads});
  report.set("horizon_days", o.horizon);
  report.set("sims_per_draw", o.sims_per_draw);
  report.set("forecast_mean", forecast.summary.mean);
  report.set("forecast_q05", forecast.summary.q05);
  report.set("forecast_q10", count_quantile(forecast.counts, 0.10));
  report.set("forecast_q50", forecast.summary.q50);
  report.set("forecast_q90", count_quantile(forecast.counts, 0.90));
  report.set("forecast_q95", forecast.summary.q95);

  // Intensity figure: posterior band over the data, then a few forward paths.
  const auto band = summarize_intensity(draws);
  Table intensity({"series", "year", "value"});
  auto centre = [&](double bin) { return to_year(counts.origin + (bin + 0.5) * o.dt); };
  for (std::size_t b = 0; b < band.mean.size(); ++b) {
    intensity.add_row({"observed", format_number(centre(static_cast<double>(b))),
                       format_number(static_cast<double>(counts.counts[b]) / o.dt)});
  }
  for (const char* s : {"q05", "q95", "mean"}) {
    const auto& v = std::string(s) == "q05" ? band.q05 : std::string(s) == "q95" ? band.q95 : band.mean;
    for (std::size_t b = 0; b < v.size(); ++b) intensity.add_row({s, format_number(centre(static_cast<double>(b))), format_number(v[b])});
  }
  const auto forward_bins = static_cast<std::size_t>(std::ceil(o.horizon / o.dt));
  const double last = static_cast<double>(band.mean.size() - 1);
  for (std::size_t k = 0; k < std::min(o.trajectories, draws.size()); ++k) {
    const std::size_t d = k * draws.size() / std::max<std::size_t>(o.trajectories, 1);
    Rng rng = Rng::stream(out.options().seed, {k});
    const auto path = simulate_ou_forward(draws.paths[d].x.back(), draws.params[d], o.dt, forward_bins, rng);
    const std::string name = "forecast_" + std::to_string(k + 1);
    intensity.add_row({name, format_number(centre(last)), format_number(std::exp(draws.paths[d].x.back()))});
    for (std::size_t b = 0; b < path.size(); ++b) {
      intensity.add_row({name, format_number(centre(last + 1.0 + static_cast<double>(b))), format_number(std::exp(path[b]))});
    }
  }
  out.table("intensity", intensity, "intensity");

  std::vector<double> totals(forecast.counts.begin(), forecast.counts.end());
  const auto [lo, hi] = std::minmax_element(totals.begin(), totals.end());
  out.table("forecast_hist", histogram(totals, o.hist_bins, *lo, *hi + 1.0), "forecast-hist");
  Table raw({"draw", "sim", "count"});
  for (std::size_t i = 0; i < forecast.counts.size(); ++i) {
    raw.add_row({format_number(i / o.sims_per_draw), format_number(i % o.sims_per_draw), format_number(forecast.counts[i])});
  }
  out.table("forecast_counts", raw);
}

// --- synth ------------------------------------------------------------------------------

void run_synth(const SynthOptions& o, Output& out, Report& report) {
  require(o.kind == "catalog" || o.kind == "severities" || o.kind == "counts", ErrorCode::invalid_argument,
          "--kind must be catalog, severities or counts");
  require(o.model == "power-law" || o.model == "piecewise", ErrorCode::invalid_argument,
          "--model must be power-law or piecewise");
  const std::uint64_t seed = out.options().seed;
  const TailModel model = o.model == "piecewise" ? TailModel(PiecewiseModel(o.alpha, o.alpha2, o.x_min, o.x_break))
                                                 : TailModel(PowerLawModel(o.alpha, o.x_min));
  report.set("kind", o.kind);
  report.set("seed", static_cast<std::int64_t>(seed));

  if (o.kind == "severities") {
    require(o.n >= 1, ErrorCode::invalid_argument, "--n must be >= 1");
    const auto values = o.model == "piecewise" ? sample_piecewise(std::get<PiecewiseModel>(model), o.n, seed)
                                               : sample_power_law(std::get<PowerLawModel>(model), o.n, seed);
    report.set("model", o.model);
    report.set("n", o.n);
    Table t({"value"});
    for (double v : values) t.add_row({format_number(v)});
    out.table("severities", t);
    Table ccdf({"series", "x", "ccdf"});
    add_empirical_ccdf(ccdf, values, o.x_min);
    add_model_ccdf(ccdf, "truth", model, *std::max_element(values.begin(), values.end()), 200);
    out.table("severities_ccdf", ccdf, "ccdf");
    return;
  }

  const OuParams params{o.omega, o.mu, o.sigma};
  const auto origin = parse_date(o.origin);
  if (!origin) throw Error(ErrorCode::invalid_argument, "bad --origin date '" + o.origin + "'");
  const auto sim = simulate_lgcp_counts(params, o.bins, o.dt, seed);
  report.set("omega", o.omega);
  report.set("mu", o.mu);
  report.set("sigma", o.sigma);
  report.set("bins", o.bins);
  report.set("dt", o.dt);
  report.set("origin", o.origin);

  Table truth({"bin", "start_day", "x", "intensity", "count"});
  Table fig({"series", "year", "value"});
  std::vector<std::int64_t> counts = sim.counts.counts;
  EventCatalog catalog;
  if (o.kind == "catalog") {
    // Counts come from the synthesized arrivals so the table matches the catalog.
    catalog = synthesize_catalog(sim.truth, model, seed, {*origin, o.weapon, "synth"});
    counts = bin_events(catalog, o.dt).counts;
    counts.resize(o.bins, 0);
    report.set("model", o.model);
    report.set("events", catalog.size());
  }
  std::int64_t total = 0;
  for (std::size_t i = 0; i < o.bins; ++i) {
    const double start = *origin + static_cast<double>(i) * o.dt;
    truth.add_row({format_number(i), format_number(start), format_number(sim.truth.x[i]),
                   format_number(std::exp(sim.truth.x[i])), format_number(counts[i])});
    const double year = to_year(start + 0.5 * o.dt);
    fig.add_row({"truth", format_number(year), format_number(std::exp(sim.truth.x[i]))});
    fig.add_row({"observed", format_number(year), format_number(static_cast<double>(counts[i]) / o.dt)});
    total += counts[i];
  }
  report.set("total_count", total);
  out.table("lgcp_truth", truth);
  out.table("synth_intensity", fig, "intensity");
  if (o.kind == "catalog") {
    std::ostringstream s;
    write_catalog(s, catalog);
    out.data_file("catalog.csv", s.str());
  }
}

// --- cv-xmin ----------------------------------------------------------------------------

void run_cv_xmin(const CvOptionsCli& o, Output& out, Report& report) {
  const auto catalog = load_selection(o.input, report);
  const auto severities = catalog.severities();
  CvOptions cv;
  cv.k_folds = o.folds;
  cv.x_tail_fraction = o.tail_fraction;
  cv.seed = out.options().seed;
  cv.max_default_candidates = o.max_candidates;
  cv.one_standard_error_rule = o.one_standard_error;
  const auto result = cv_select_xmin(severities, cv);
  const auto& pl = std::get<PowerLawModel>(result.fit.model);
  report.set("folds", o.folds);
  report.set("tail_fraction", o.tail_fraction);
  report.set("rule", o.one_standard_error ? "one-standard-error" : "min-mean");
  report.set("x_tail_start", result.x_tail_start);
  report.set("candidates", result.scores.size());
  report.set("x_min", pl.x_min());
  report.set("alpha", pl.alpha());
  report.set("n_tail", result.fit.n_tail);
  report.set("ks", result.fit.ks_error);
  const auto ks = select_xmin(severities);
  report.set("ks_selected_x_min", ks.x_min());
  report.set("ks_selected_alpha", std::get<PowerLawModel>(ks.model).alpha());

  Table t({"x_min", "mean_score", "std_error", "folds_scored", "selected"});
  for (const auto& s : result.scores) {
    t.add_row({format_number(s.x_min), format_number(s.mean_score), format_number(s.std_error),
               format_number(s.folds_scored), s.x_min == pl.x_min() ? "1" : "0"});
  }
  out.table("cv_scores", t, "cv");
}

}  // namespace tailrisk::cli
