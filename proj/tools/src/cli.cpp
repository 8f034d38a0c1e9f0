#include <fstream>
#include <iostream>
#include <map>
#include <type_traits>

#include "CLI11.hpp"
#include "commands.hpp"
#include "figures.hpp"
#include "tailrisk/error.hpp"

namespace tailrisk::cli {
namespace {

// CLI11 prints defaults at stream precision; manifests need exact values.
template <class T>
CLI::Option* option(CLI::App* app, const std::string& name, T& value, const std::string& description) {
  auto* opt = app->add_option(name, value, description);
  if constexpr (std::is_floating_point_v<T>) opt->default_str(format_number(value));
  return opt;
}

void add_catalog_flags(CLI::App* sub, CatalogInput& in) {
  sub->add_option("-i,--input", in.path, "Event catalog CSV (date, deaths[, weapon, source])")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--weapon", in.weapon, "Keep only events with this weapon label");
  sub->add_option("--start", in.start, "First day kept, YYYY-MM-DD");
  sub->add_option("--end", in.end, "Last day kept, YYYY-MM-DD");
  option(sub, "--min-severity", in.min_severity, "Drop events below this severity")
      ->check(CLI::PositiveNumber);
}

std::string option_value(const CLI::Option* opt) {
  if (opt->count() == 0) return opt->get_default_str().empty() ? "(unset)" : opt->get_default_str();
  std::string v;
  for (const auto& r : opt->results()) v += (v.empty() ? "" : ",") + r;
  return v;
}

void collect_flags(const CLI::App* app, std::vector<std::pair<std::string, std::string>>& flags) {
  for (const auto* opt : app->get_options()) {
    if (opt->get_name() == "--help" || opt->get_name() == "-h,--help" || opt->get_name() == "--version") continue;
    if (opt->get_lnames().empty()) continue;
    flags.emplace_back("--" + opt->get_lnames().front(), option_value(opt));
  }
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Heavy-tailed event severity and intensity analysis", "tailrisk"};
  app.set_version_flag("--version", TAILRISK_VERSION);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  GlobalOptions global;
  std::string format = "both";
  app.add_option("--seed", global.seed, "Root seed for every random stream");
  app.add_option("--out-dir", global.out_dir, "Directory for report, tables, figures and manifest");
  app.add_option("--format", format, "Which of tables and figures to write")
      ->check(CLI::IsMember({"csv", "svg", "both"}));
  app.add_option("--threads", global.threads, "Worker threads (0 = all cores); results do not depend on it");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a power-law tail and compare with a piecewise fit");
  fit_cmd->fallthrough();
  add_catalog_flags(fit_cmd, fit.input);
  fit_cmd->add_option("--x-min", fit.x_min, "Fix the threshold instead of choosing it by KS distance")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--break", fit.x_break, "Also fit a piecewise power law with this break")
      ->check(CLI::PositiveNumber);
  option(fit_cmd, "--x-target", fit.x_target, "Catastrophe severity for the exceedance probability")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--n-events", fit.n_events, "Number of events for the exceedance probability [tail size]")
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--curve-points", fit.curve_points, "Points per model curve")->check(CLI::Range(2, 100000));

  ExtremesOptions ext;
  auto* ext_cmd = app.add_subcommand("extremes", "Tabulate percentiles of the sample maximum over an alpha grid");
  ext_cmd->fallthrough();
  option(ext_cmd, "--alpha-min", ext.alpha_min, "Smallest alpha");
  option(ext_cmd, "--alpha-max", ext.alpha_max, "Largest alpha");
  option(ext_cmd, "--alpha-step", ext.alpha_step, "Grid spacing");
  option(ext_cmd, "--x-min", ext.x_min, "Tail threshold")->check(CLI::PositiveNumber);
  ext_cmd->add_option("-n,--n", ext.n, "Number of tail events")->check(CLI::PositiveNumber);
  option(ext_cmd, "--x-target", ext.x_target, "Reference severity drawn as a dashed line");
  ext_cmd->add_option("--mc", ext.mc_replicates, "Monte Carlo replicates for a cross-check (0 = off)");

  BootstrapOptions boot;
  auto* boot_cmd = app.add_subcommand("bootstrap", "Bootstrap the joint (x_min, alpha) estimate");
  boot_cmd->fallthrough();
  add_catalog_flags(boot_cmd, boot.input);
  boot_cmd->add_option("--resamples", boot.resamples, "Number of resamples")->check(CLI::PositiveNumber);
  boot_cmd->add_option("--hist-bins", boot.hist_bins, "Histogram bins")->check(CLI::PositiveNumber);
  option(boot_cmd, "--window-center", boot.window_center, "Report the fraction of alphas near this value");
  option(boot_cmd, "--window-half-width", boot.window_half_width, "Half width of that window")
      ->check(CLI::NonNegativeNumber);

  ForecastOptions fc;
  auto* fc_cmd = app.add_subcommand("forecast", "Fit the Cox process to binned counts and forecast event totals");
  fc_cmd->fallthrough();
  add_catalog_flags(fc_cmd, fc.input);
  option(fc_cmd, "--dt", fc.dt, "Bin width in days")->check(CLI::PositiveNumber);
  fc_cmd->add_option("--burn-in", fc.burn_in, "Burn-in sweeps");
  fc_cmd->add_option("--samples", fc.samples, "Retained draws")->check(CLI::PositiveNumber);
  fc_cmd->add_option("--thin", fc.thin, "Keep every thin-th sweep")->check(CLI::PositiveNumber);
  option(fc_cmd, "--step-size", fc.step_size, "Initial MALA step size")->check(CLI::PositiveNumber);
  option(fc_cmd, "--horizon", fc.horizon, "Forecast horizon in days")->check(CLI::PositiveNumber);
  fc_cmd->add_option("--sims-per-draw", fc.sims_per_draw, "Forward simulations per draw")->check(CLI::PositiveNumber);
  fc_cmd->add_option("--trajectories", fc.trajectories, "Forward intensity paths drawn in the figure");
  fc_cmd->add_option("--hist-bins", fc.hist_bins, "Histogram bins")->check(CLI::PositiveNumber);
  fc_cmd->add_option("--prior-log-omega", fc.priors.log_omega, "Normal prior MEAN,SD on log omega")->delimiter(',');
  fc_cmd->add_option("--prior-mu", fc.priors.mu, "Normal prior MEAN,SD on mu")->delimiter(',');
  fc_cmd->add_option("--prior-log-sigma", fc.priors.log_sigma, "Normal prior MEAN,SD on log sigma")->delimiter(',');

  SynthOptions syn;
  auto* syn_cmd = app.add_subcommand("synth", "Generate synthetic severities, counts or a full catalog");
  syn_cmd->fallthrough();
  syn_cmd->add_option("--kind", syn.kind, "What to generate")->check(CLI::IsMember({"catalog", "severities", "counts"}));
  syn_cmd->add_option("--model", syn.model, "Severity model")->check(CLI::IsMember({"power-law", "piecewise"}));
  option(syn_cmd, "--alpha", syn.alpha, "Exponent (below the break for piecewise)");
  option(syn_cmd, "--alpha2", syn.alpha2, "Exponent above the break");
  option(syn_cmd, "--x-min", syn.x_min, "Severity threshold")->check(CLI::PositiveNumber);
  option(syn_cmd, "--break", syn.x_break, "Break severity")->check(CLI::PositiveNumber);
  syn_cmd->add_option("-n,--n", syn.n, "Severities to draw (kind=severities)")->check(CLI::PositiveNumber);
  option(syn_cmd, "--omega", syn.omega, "Mean reversion per day")->check(CLI::PositiveNumber);
  option(syn_cmd, "--mu", syn.mu, "Long-run log events per day");
  option(syn_cmd, "--sigma", syn.sigma, "Diffusion per sqrt(day)")->check(CLI::PositiveNumber);
  syn_cmd->add_option("--bins", syn.bins, "Number of bins")->check(CLI::PositiveNumber);
  option(syn_cmd, "--dt", syn.dt, "Bin width in days")->check(CLI::PositiveNumber);
  syn_cmd->add_option("--origin", syn.origin, "First day, YYYY-MM-DD");
  syn_cmd->add_option("--weapon", syn.weapon, "Weapon label on synthetic events");

  CvOptionsCli cv;
  auto* cv_cmd = app.add_subcommand("cv-xmin", "Choose x_min by cross-validated extreme-tail KS distance");
  cv_cmd->fallthrough();
  add_catalog_flags(cv_cmd, cv.input);
  cv_cmd->add_option("--folds", cv.folds, "Number of folds")->check(CLI::Range(2, 1000000));
  option(cv_cmd, "--tail-fraction", cv.tail_fraction, "Extreme tail as a fraction of the sample")
      ->check(CLI::Range(0.0, 1.0));
  cv_cmd->add_option("--max-candidates", cv.max_candidates, "Cap on the default threshold grid")
      ->check(CLI::PositiveNumber);
  cv_cmd->add_flag("--one-se", cv.one_standard_error, "Smallest x_min within one standard error of the best");

  std::string render_kind;
  std::filesystem::path render_table, render_output;
  auto* render_cmd = app.add_subcommand("render", "Re-render a figure from its CSV table");
  render_cmd->add_option("--kind", render_kind, "Figure kind")->required()->check(CLI::IsMember(figure_kinds()));
  render_cmd->add_option("--table", render_table, "CSV table")->required()->check(CLI::ExistingFile);
  render_cmd->add_option("-o,--output", render_output, "SVG file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  global.format = format == "csv" ? Format::csv : format == "svg" ? Format::svg : Format::both;

  if (render_cmd->parsed()) {
    try {
      std::ofstream out(render_output, std::ios::binary);
      out << render_figure(render_kind, Table::load(render_table));
      if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + render_output.string());
    } catch (const Error& e) {
      std::cerr << "tailrisk render: " << e.what() << '\n';
      return 1;
    }
    return 0;
  }

  const CLI::App* sub = app.get_subcommands().front();
  std::vector<std::pair<std::string, std::string>> flags;
  collect_flags(&app, flags);
  collect_flags(sub, flags);

  std::optional<Output> out;
  Report report;
  report.set("command", sub->get_name());
  report.set("status", "ok");
  try {
    out.emplace(global);
    if (sub == fit_cmd) run_fit(fit, *out, report);
    else if (sub == ext_cmd) run_extremes(ext, *out, report);
    else if (sub == boot_cmd) run_bootstrap(boot, *out, report);
    else if (sub == fc_cmd) run_forecast(fc, *out, report);
    else if (sub == syn_cmd) run_synth(syn, *out, report);
    else if (sub == cv_cmd) run_cv_xmin(cv, *out, report);
    out->report(report);
    out->manifest(sub->get_name(), flags);
  } catch (const Error& e) {
    std::cerr << "tailrisk " << sub->get_name() << ": " << e.what() << '\n';
    if (out) {
      report.set("status", "error");
      report.set("error_code", to_string(e.code()));
      report.set("error_message", e.what());
      try {
        out->report(report);
        out->manifest(sub->get_name(), flags);
      } catch (const Error&) {
      }
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "tailrisk " << sub->get_name() << ": unexpected error: " << e.what() << '\n';
    return 1;
  }
  std::cout << report.to_text();
  return 0;
}

}  // namespace tailrisk::cli
