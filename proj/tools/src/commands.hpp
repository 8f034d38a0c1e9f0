#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"
#include "table.hpp"

namespace tailrisk::cli {

enum class Format { csv, svg, both };

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "tailrisk-out";
  Format format = Format::both;
  unsigned threads = 1;  // 0 = all hardware threads
};

/// Writes a run's files into its output directory and remembers their names
/// for the manifest.
class Output {
 public:
  explicit Output(GlobalOptions options);

  const GlobalOptions& options() const noexcept { return options_; }

  /// Writes <name>.csv and, when `figure_kind` is set, <name>.svg rendered from
  /// the same table; --format decides which of the two reach the disk.
  void table(const std::string& name, const Table& table, const std::string& figure_kind = {});
  /// Always written, whatever --format says.
  void data_file(const std::string& file_name, const std::string& contents);
  void report(const Report& report);
  /// manifest.txt: the command, every flag value (defaults included) and the files written.
  void manifest(const std::string& command, const std::vector<std::pair<std::string, std::string>>& flags);

  const std::vector<std::string>& files() const noexcept { return files_; }

 private:
  void write(const std::string& file_name, const std::string& contents);

  GlobalOptions options_;
  std::vector<std::string> files_;
};

struct CatalogInput {
  std::filesystem::path path;
  std::optional<std::string> weapon;
  std::optional<std::string> start;  // YYYY-MM-DD, inclusive
  std::optional<std::string> end;
  double min_severity = 1.0;
};

struct FitOptions {
  CatalogInput input;
  std::optional<double> x_min;
  std::optional<double> x_break;
  double x_target = 2749.0;
  std::optional<std::int64_t> n_events;  // exceedance n; default: events in the fitted tail
  std::size_t curve_points = 200;
};

struct ExtremesOptions {
  double alpha_min = 2.0;
  double alpha_max = 2.6;
  double alpha_step = 0.05;
  double x_min = 10.0;
  std::int64_t n = 994;
  double x_target = 2749.0;
  std::size_t mc_replicates = 0;
};

struct BootstrapOptions {
  CatalogInput input;
  std::size_t resamples = 200;
  std::size_t hist_bins = 40;
  double window_center = 2.2;
  double window_half_width = 0.05;
};

struct PriorOverride {
  std::optional<std::vector<double>> log_omega, mu, log_sigma;  // {mean, sd}
};

struct ForecastOptions {
  CatalogInput input{{}, {}, {}, {}, 10.0};
  double dt = 30.0;
  std::size_t burn_in = 5000;
  std::size_t samples = 2000;
  std::size_t thin = 5;
  double step_size = 0.05;
  double horizon = 3653.0;
  std::size_t sims_per_draw = 10;
  std::size_t trajectories = 5;
  std::size_t hist_bins = 30;
  PriorOverride priors;
};

struct SynthOptions {
  std::string kind = "catalog";  // catalog | severities | counts
  std::string model = "power-law";  // power-law | piecewise
  double alpha = 2.4;
  double alpha2 = 3.0;
  double x_min = 10.0;
  double x_break = 80.0;
  std::size_t n = 1000;
  double omega = 1.0 / 180.0;
  double mu = -2.302585092994046;  // ln(3 / 30)
  double sigma = 0.08;
  std::size_t bins = 384;
  double dt = 30.0;
  std::string origin = "1980-01-01";
  std::string weapon = "synthetic";
};

struct CvOptionsCli {
  CatalogInput input;
  std::size_t folds = 5;
  double tail_fraction = 0.05;
  std::size_t max_candidates = 100;
  bool one_standard_error = false;
};

void run_fit(const FitOptions& options, Output& out, Report& report);
void run_extremes(const ExtremesOptions& options, Output& out, Report& report);
void run_bootstrap(const BootstrapOptions& options, Output& out, Report& report);
void run_forecast(const ForecastOptions& options, Output& out, Report& report);
void run_synth(const SynthOptions& options, Output& out, Report& report);
void run_cv_xmin(const CvOptionsCli& options, Output& out, Report& report);

/// Entry point shared by the executable and the tests. Returns the exit code:
/// 0 on success, 1 on an operation error, 2 on a usage error.
int run(int argc, const char* const* argv);

}  // namespace tailrisk::cli
