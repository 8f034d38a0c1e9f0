#include "tailrisk/powerlaw.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "tailrisk/error.hpp"
#include "tailrisk/rng.hpp"

namespace tailrisk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bounds for the piecewise optimizer.
constexpr double kAlpha1Lower = 1e-6;
constexpr double kAlpha2Lower = 1.0 + 1e-6;
constexpr double kAlphaUpper = 100.0;

// I_k(b, L) = integral_0^L t^k e^(b t) dt for k = 0, 1, 2.
std::array<double, 3> exp_moments(double b, double L) {
  const double bl = b * L;
  std::array<double, 3> out{};
  if (std::abs(bl) <= 2.0) {
    // L^(k+1) sum_j (bL)^j / (j! (j + k + 1))
    for (int k = 0; k < 3; ++k) {
      double term = 1.0;  // (bL)^j / j!
      double sum = 0.0;
      for (int j = 0; j < 40; ++j) {
        sum += term / (j + k + 1);
        term *= bl / (j + 1);
      }
      out[k] = std::pow(L, k + 1) * sum;
    }
    return out;
  }
  const double e = std::exp(bl);
  out[0] = std::expm1(bl) / b;
  out[1] = (L * e - out[0]) / b;
  out[2] = (L * L * e - 2.0 * out[1]) / b;
  return out;
}

double exp_integral(double b, double L) {
  if (b == 0.0) return L;
  if (std::abs(b * L) <= 2.0) return exp_moments(b, L)[0];
  return std::expm1(b * L) / b;
}

void check_support(double x, double x_min) {
  if (!(x >= x_min)) throw Error(ErrorCode::out_of_support, "value below x_min");
}

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Two-sided step comparison over a sorted sample.
template <class Cdf>
double ks_sorted(std::span<const double> sorted, Cdf&& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double f = cdf(sorted[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(j) / n)});
    i = j;
  }
  return d;
}

// Sufficient statistics of a tail sample for the piecewise likelihood.
struct PiecewiseStats {
  double n1 = 0, n2 = 0;
  double s1 = 0;  // sum ln(x / x_min) below break
  double s2 = 0;  // sum ln(x / x_break) at or above break
  double log_r = 0;
  double x_min = 0;
};

struct Objective {
  double value;
  std::array<double, 2> grad;
  std::array<double, 4> hess;  // row-major 2x2
};

// Log-likelihood in (alpha1, alpha2) and its exact derivatives:
//   l = -n ln(x_min z) - alpha1 (s1 + n2 L) - alpha2 s2
//   z = g(alpha1) + r^(1 - alpha1) / (alpha2 - 1),  g(a) = I_0(1 - a, L)
Objective piecewise_objective(const PiecewiseStats& st, double a1, double a2) {
  const double L = st.log_r;
  const double n = st.n1 + st.n2;
  const auto m = exp_moments(1.0 - a1, L);
  const double h = std::exp((1.0 - a1) * L);
  const double k = a2 - 1.0;
  const double z = m[0] + h / k;
  const double z1 = -m[1] - L * h / k;
  const double z2 = -h / (k * k);
  const double z11 = m[2] + L * L * h / k;
  const double z12 = L * h / (k * k);
  const double z22 = 2.0 * h / (k * k * k);

  Objective o;
  o.value = -n * (std::log(st.x_min) + std::log(z)) - a1 * (st.s1 + st.n2 * L) - a2 * st.s2;
  o.grad = {-n * z1 / z - (st.s1 + st.n2 * L), -n * z2 / z - st.s2};
  o.hess = {-n * (z11 / z - z1 * z1 / (z * z)), -n * (z12 / z - z1 * z2 / (z * z)),
            -n * (z12 / z - z1 * z2 / (z * z)), -n * (z22 / z - z2 * z2 / (z * z))};
  return o;
}

struct Maximum {
  double a1, a2, value;
};

// Projected Newton ascent with Armijo backtracking. The objective is concave
// (ln z is a sum of log-convex terms), so every start reaches the same
// optimum; an accepted step never decreases the objective.
Maximum maximize_piecewise(const PiecewiseStats& st, double a1, double a2) {
  const std::array<double, 2> lo{kAlpha1Lower, kAlpha2Lower};
  const std::array<double, 2> hi{kAlphaUpper, kAlphaUpper};
  std::array<double, 2> a{std::clamp(a1, lo[0], hi[0]), std::clamp(a2, lo[1], hi[1])};
  const double n = st.n1 + st.n2;
  const double tol = 1e-10 * std::max(1.0, n);  // 1e-10 on the per-observation gradient

  Objective cur = piecewise_objective(st, a[0], a[1]);
  for (int iter = 0; iter < 200; ++iter) {
    std::array<bool, 2> active{};
    std::array<double, 2> pg = cur.grad;
    for (int i = 0; i < 2; ++i) {
      active[i] = (a[i] <= lo[i] && cur.grad[i] < 0) || (a[i] >= hi[i] && cur.grad[i] > 0);
      if (active[i]) pg[i] = 0.0;
    }
    if (std::hypot(pg[0], pg[1]) < tol) break;

    std::array<double, 2> d{};
    const auto& H = cur.hess;
    if (!active[0] && !active[1]) {
      const double det = H[0] * H[3] - H[1] * H[2];
      d = {-(H[3] * cur.grad[0] - H[1] * cur.grad[1]) / det, -(-H[2] * cur.grad[0] + H[0] * cur.grad[1]) / det};
    } else {
      for (int i = 0; i < 2; ++i) d[i] = active[i] ? 0.0 : -cur.grad[i] / H[i * 3];
    }
    if (!std::isfinite(d[0]) || !std::isfinite(d[1]) || d[0] * pg[0] + d[1] * pg[1] <= 0.0) d = pg;

    bool moved = false;
    for (double t = 1.0; t > 1e-20; t *= 0.5) {
      const std::array<double, 2> next{std::clamp(a[0] + t * d[0], lo[0], hi[0]),
                                       std::clamp(a[1] + t * d[1], lo[1], hi[1])};
      if (next == a) break;
      const Objective cand = piecewise_objective(st, next[0], next[1]);
      const double slope = cur.grad[0] * (next[0] - a[0]) + cur.grad[1] * (next[1] - a[1]);
      if (std::isfinite(cand.value) && cand.value >= cur.value + 1e-4 * slope) {
        a = next;
        cur = cand;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return {a[0], a[1], cur.value};
}

double sum_log_ratio(std::span<const double> values, double scale) {
  double s = 0.0;
  for (double x : values) s += std::log(x / scale);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Models

PowerLawModel::PowerLawModel(double alpha, double x_min) : alpha_(alpha), x_min_(x_min) {
  detail::require(alpha > 1.0 && std::isfinite(alpha), ErrorCode::invalid_argument, "power law needs alpha > 1");
  detail::require(x_min > 0.0 && std::isfinite(x_min), ErrorCode::invalid_argument, "power law needs x_min > 0");
}

PiecewiseModel::PiecewiseModel(double alpha1, double alpha2, double x_min, double x_break)
    : alpha1_(alpha1), alpha2_(alpha2), x_min_(x_min), x_break_(x_break) {
  detail::require(alpha1 > 0.0 && std::isfinite(alpha1), ErrorCode::invalid_argument, "piecewise needs alpha1 > 0");
  detail::require(alpha2 > 1.0 && std::isfinite(alpha2), ErrorCode::invalid_argument, "piecewise needs alpha2 > 1");
  detail::require(x_min > 0.0 && x_min < x_break && std::isfinite(x_break), ErrorCode::invalid_argument,
                  "piecewise needs 0 < x_min < x_break");
  const double L = std::log(x_break / x_min);
  const double below = exp_integral(1.0 - alpha1, L);
  const double above = std::exp((1.0 - alpha1) * L) / (alpha2 - 1.0);
  z_ = below + above;
  mass_below_ = below / z_;
}

double model_x_min(const TailModel& model) noexcept {
  return std::visit([](const auto& m) { return m.x_min(); }, model);
}

double tail_survival(const PowerLawModel& model, double x) {
  check_support(x, model.x_min());
  return std::exp((1.0 - model.alpha()) * std::log(x / model.x_min()));
}

double tail_cdf(const PowerLawModel& model, double x) {
  check_support(x, model.x_min());
  return -std::expm1((1.0 - model.alpha()) * std::log(x / model.x_min()));
}

double log_density(const PowerLawModel& model, double x) {
  check_support(x, model.x_min());
  return std::log((model.alpha() - 1.0) / model.x_min()) - model.alpha() * std::log(x / model.x_min());
}

double tail_quantile(const PowerLawModel& model, double p) {
  detail::require(p >= 0.0 && p < 1.0, ErrorCode::invalid_argument, "quantile level must lie in [0, 1)");
  return model.x_min() * std::exp(std::log1p(-p) / (1.0 - model.alpha()));
}

double tail_cdf(const PiecewiseModel& model, double x) {
  check_support(x, model.x_min_);
  if (x < model.x_break_) return exp_integral(1.0 - model.alpha1_, std::log(x / model.x_min_)) / model.z_;
  return 1.0 - tail_survival(model, x);
}

double tail_survival(const PiecewiseModel& model, double x) {
  check_support(x, model.x_min_);
  if (x < model.x_break_) return 1.0 - tail_cdf(model, x);
  return (1.0 - model.mass_below_) * std::exp((1.0 - model.alpha2_) * std::log(x / model.x_break_));
}

double log_density(const PiecewiseModel& model, double x) {
  check_support(x, model.x_min_);
  const double log_c = -std::log(model.x_min_ * model.z_);
  if (x < model.x_break_) return log_c - model.alpha1_ * std::log(x / model.x_min_);
  return log_c - model.alpha1_ * std::log(model.x_break_ / model.x_min_) -
         model.alpha2_ * std::log(x / model.x_break_);
}

double tail_quantile(const PiecewiseModel& model, double p) {
  detail::require(p >= 0.0 && p < 1.0, ErrorCode::invalid_argument, "quantile level must lie in [0, 1)");
  if (p < model.mass_below_) {
    // Invert I_0(b, t) = p z for t = ln(x / x_min).
    const double b = 1.0 - model.alpha1_;
    const double target = p * model.z_;
    const double t = b == 0.0 ? target : std::log1p(b * target) / b;
    return std::min(model.x_min_ * std::exp(t), model.x_break_);
  }
  const double survival = 1.0 - p;
  return model.x_break_ * std::exp(std::log(survival / (1.0 - model.mass_below_)) / (1.0 - model.alpha2_));
}

double tail_cdf(const TailModel& model, double x) {
  return std::visit([x](const auto& m) { return tail_cdf(m, x); }, model);
}
double tail_survival(const TailModel& model, double x) {
  return std::visit([x](const auto& m) { return tail_survival(m, x); }, model);
}
double log_density(const TailModel& model, double x) {
  return std::visit([x](const auto& m) { return log_density(m, x); }, model);
}
double tail_quantile(const TailModel& model, double p) {
  return std::visit([p](const auto& m) { return tail_quantile(m, p); }, model);
}

// ---------------------------------------------------------------------------
// Estimation

double empirical_tail_cdf(std::span<const double> severities, double x_min, double x) {
  detail::require(!severities.empty(), ErrorCode::empty_sample, "empirical CDF of an empty sample");
  for (double v : severities) check_support(v, x_min);
  const auto at_or_below = std::count_if(severities.begin(), severities.end(), [x](double v) { return v <= x; });
  return static_cast<double>(at_or_below) / static_cast<double>(severities.size());
}

double mle_alpha(std::span<const double> severities, double x_min) {
  detail::require(severities.size() >= 2, ErrorCode::invalid_argument, "MLE needs at least two values");
  detail::require(x_min > 0.0, ErrorCode::invalid_argument, "x_min must be > 0");
  for (double x : severities) check_support(x, x_min);
  const double s = sum_log_ratio(severities, x_min);
  if (!(s > 0.0)) throw Error(ErrorCode::degenerate_sample, "all values equal x_min; alpha diverges");
  return 1.0 + static_cast<double>(severities.size()) / s;
}

double log_likelihood(const TailModel& model, std::span<const double> severities) {
  double sum = 0.0;
  for (double x : severities) sum += log_density(model, x);
  return sum;
}

double ks_distance(const TailModel& model, std::span<const double> severities, double x_min) {
  detail::require(!severities.empty(), ErrorCode::empty_sample, "KS distance of an empty sample");
  detail::require(model_x_min(model) == x_min, ErrorCode::invalid_argument, "model x_min differs from x_min");
  const auto sorted = sorted_copy(severities);
  check_support(sorted.front(), x_min);
  return ks_sorted(sorted, [&](double x) { return tail_cdf(model, x); });
}

double extreme_tail_ks(const TailModel& model, std::span<const double> severities, double x_tail_start) {
  detail::require(x_tail_start >= model_x_min(model), ErrorCode::invalid_argument, "x_tail_start below model x_min");
  std::vector<double> extreme;
  for (double x : severities) {
    if (x >= x_tail_start) extreme.push_back(x);
  }
  if (extreme.empty()) throw Error(ErrorCode::empty_extreme_tail, "no sample point at or above x_tail_start");
  std::sort(extreme.begin(), extreme.end());
  const double s0 = tail_survival(model, x_tail_start);
  return ks_sorted(extreme, [&](double x) { return 1.0 - tail_survival(model, x) / s0; });
}

TailFit fit_power_law(std::span<const double> severities, double x_min) {
  std::vector<double> tail;
  for (double x : severities) {
    if (x >= x_min) tail.push_back(x);
  }
  const PowerLawModel model(mle_alpha(tail, x_min), x_min);
  TailFit fit{model};
  fit.n_tail = tail.size();
  fit.ks_error = ks_distance(fit.model, tail, x_min);
  fit.log_lik = log_likelihood(fit.model, tail);
  return fit;
}

TailFit select_xmin(std::span<const double> severities, const std::optional<std::vector<double>>& candidates) {
  const auto sorted = sorted_copy(severities);
  std::vector<double> distinct;
  std::unique_copy(sorted.begin(), sorted.end(), std::back_inserter(distinct));
  if (distinct.size() < 2) throw Error(ErrorCode::too_few_distinct_values, "need at least two distinct values");
  detail::require(sorted.front() > 0.0, ErrorCode::invalid_argument, "severities must be > 0 for tail fitting");

  std::vector<double> grid;
  if (candidates) {
    grid = *candidates;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  } else {
    grid.assign(distinct.begin(), distinct.end() - 1);
  }

  const std::size_t n = sorted.size();
  std::vector<double> logs(n);
  std::transform(sorted.begin(), sorted.end(), logs.begin(), [](double x) { return std::log(x); });
  // suffix[i] = sum of logs[i..n)
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + logs[i];

  double best_ks = kInf;
  std::optional<double> best_x_min;
  for (double x_min : grid) {
    if (!(x_min > 0.0)) continue;
    const auto first = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), x_min) - sorted.begin());
    const std::size_t m = n - first;
    if (m < 2 || sorted.back() <= x_min) continue;
    const double log_x_min = std::log(x_min);
    const double s = suffix[first] - static_cast<double>(m) * log_x_min;
    if (!(s > 0.0)) continue;
    const double exponent = -static_cast<double>(m) / s;  // 1 - alpha
    const std::span<const double> tail_logs(logs.data() + first, m);
    const std::span<const double> tail(sorted.data() + first, m);
    // Steps of the empirical CDF are tracked on the values; the model CDF on
    // the precomputed logs.
    const double dm = static_cast<double>(m);
    double d = 0.0;
    std::size_t i = 0;
    while (i < m) {
      std::size_t j = i;
      while (j < m && tail[j] == tail[i]) ++j;
      const double f = -std::expm1(exponent * (tail_logs[i] - log_x_min));
      d = std::max({d, std::abs(f - static_cast<double>(i) / dm), std::abs(f - static_cast<double>(j) / dm)});
      if (d >= best_ks) break;  // cannot win; the running sup only grows
      i = j;
    }
    if (d < best_ks) {
      best_ks = d;
      best_x_min = x_min;
    }
  }
  if (!best_x_min) throw Error(ErrorCode::too_few_distinct_values, "no candidate threshold leaves a fittable tail");
  return fit_power_law(sorted, *best_x_min);
}

TailFit fit_piecewise(std::span<const double> severities, double x_min, double x_break) {
  detail::require(x_min > 0.0 && x_min < x_break, ErrorCode::invalid_argument, "need 0 < x_min < x_break");
  std::vector<double> tail;
  PiecewiseStats st;
  st.x_min = x_min;
  st.log_r = std::log(x_break / x_min);
  for (double x : severities) {
    if (x < x_min) continue;
    tail.push_back(x);
    if (x < x_break) {
      st.n1 += 1;
      st.s1 += std::log(x / x_min);
    } else {
      st.n2 += 1;
      st.s2 += std::log(x / x_break);
    }
  }
  if (st.n1 == 0 || st.n2 == 0) {
    throw Error(ErrorCode::empty_segment, "piecewise fit needs events on both sides of x_break");
  }

  // Start set: the single power-law MLE (guarantees logL_pw >= logL_single)
  // plus two spread-out points.
  const double s_all = sum_log_ratio(tail, x_min);
  const double single = s_all > 0.0 ? 1.0 + static_cast<double>(tail.size()) / s_all : 2.0;
  const std::array<std::array<double, 2>, 3> starts{{{single, single}, {1.5, 2.5}, {single, single + 1.0}}};
  Maximum best{0, 0, -kInf};
  for (const auto& s : starts) {
    const auto m = maximize_piecewise(st, s[0], s[1]);
    if (m.value > best.value) best = m;
  }

  const PiecewiseModel model(best.a1, best.a2, x_min, x_break);
  TailFit fit{model};
  fit.n_tail = tail.size();
  fit.ks_error = ks_distance(fit.model, tail, x_min);
  fit.log_lik = log_likelihood(fit.model, tail);
  fit.n_above_break = static_cast<std::size_t>(st.n2);
  return fit;
}

double chi_squared_sf(double statistic, int df) {
  detail::require(df >= 1, ErrorCode::invalid_argument, "degrees of freedom must be >= 1");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * statistic);
}

LikelihoodRatio likelihood_ratio_test(const TailFit& single, const TailFit& piecewise, int df) {
  if (single.n_tail != piecewise.n_tail || single.x_min() != piecewise.x_min()) {
    throw Error(ErrorCode::mismatched_fits, "fits do not share the same tail sample");
  }
  const double tol = 1e-8 * std::max(1.0, std::abs(single.log_lik));
  double stat = 2.0 * (piecewise.log_lik - single.log_lik);
  if (stat < -2.0 * tol) {
    throw Error(ErrorCode::mismatched_fits, "piecewise log-likelihood below the nested single fit");
  }
  stat = std::max(stat, 0.0);
  return {stat, chi_squared_sf(stat, df), df};
}

double sample_max_quantile(const PowerLawModel& model, std::int64_t n, double q) {
  detail::require(n >= 1, ErrorCode::invalid_argument, "sample size must be >= 1");
  detail::require(q > 0.0 && q < 1.0, ErrorCode::invalid_argument, "q must lie in (0, 1)");
  // 1 - q^(1/n) without cancellation.
  const double survival = -std::expm1(std::log(q) / static_cast<double>(n));
  return model.x_min() * std::exp(std::log(survival) / (1.0 - model.alpha()));
}

double exceedance_probability(const TailModel& model, std::int64_t n, double x_target) {
  detail::require(n >= 0, ErrorCode::invalid_argument, "event count must be >= 0");
  const double survival = tail_survival(model, x_target);
  if (n == 0) return 0.0;
  if (survival >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(n) * std::log1p(-survival));
}

BootstrapResult bootstrap_fit(std::span<const double> severities, std::size_t n_resamples, std::uint64_t seed,
                              Parallelism parallelism) {
  detail::require(n_resamples >= 1, ErrorCode::invalid_argument, "need at least one resample");
  detail::require(!severities.empty(), ErrorCode::empty_sample, "cannot bootstrap an empty sample");
  const std::vector<double> data(severities.begin(), severities.end());
  std::vector<std::optional<BootstrapDraw>> slots(n_resamples);

  parallel_for(n_resamples, parallelism, [&](std::size_t r) {
    Rng rng = Rng::stream(seed, {r});
    std::vector<double> resample(data.size());
    for (auto& x : resample) x = data[rng.index(data.size())];
    try {
      const TailFit fit = select_xmin(resample);
      slots[r] = BootstrapDraw{r, fit.x_min(), std::get<PowerLawModel>(fit.model).alpha()};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::too_few_distinct_values && e.code() != ErrorCode::degenerate_sample) throw;
    }
  });

  BootstrapResult out;
  out.n_resamples = n_resamples;
  out.seed = seed;
  for (auto& slot : slots) {
    if (slot) out.draws.push_back(*slot);
    else ++out.failures;
  }
  return out;
}

CvResult cv_select_xmin(std::span<const double> severities, const CvOptions& options) {
  const std::size_t n = severities.size();
  const std::size_t k = options.k_folds;
  detail::require(k >= 2, ErrorCode::invalid_argument, "need at least two folds");
  detail::require(options.x_tail_fraction > 0.0 && options.x_tail_fraction < 1.0, ErrorCode::invalid_argument,
                  "x_tail_fraction must lie in (0, 1)");
  if (n < 2 * k) throw Error(ErrorCode::too_few_points, "need at least 2 points per fold");

  const auto sorted = sorted_copy(severities);
  detail::require(sorted.front() > 0.0, ErrorCode::invalid_argument, "severities must be > 0 for tail fitting");
  const auto quantile_index = static_cast<std::size_t>(
      std::ceil((1.0 - options.x_tail_fraction) * static_cast<double>(n))) - 1;
  const double q_tail = sorted[std::min(quantile_index, n - 1)];

  std::vector<double> grid;
  if (options.candidates) {
    grid = *options.candidates;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  } else {
    std::vector<double> pool;
    for (double x : sorted) {
      if (x > q_tail) break;
      if (pool.empty() || pool.back() != x) pool.push_back(x);
    }
    const std::size_t cap = std::max<std::size_t>(1, options.max_default_candidates);
    if (pool.size() <= cap) {
      grid = pool;
    } else {
      const std::size_t steps = std::max<std::size_t>(cap - 1, 1);
      for (std::size_t i = 0; i < cap; ++i) grid.push_back(pool[i * (pool.size() - 1) / steps]);
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }
  }

  // Fold assignment: position in a seeded permutation modulo k.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::stream(options.seed, {0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
  std::vector<std::size_t> fold_of(n);
  for (std::size_t pos = 0; pos < n; ++pos) fold_of[order[pos]] = pos % k;

  std::vector<std::vector<double>> train(k), held(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < k; ++f) (fold_of[i] == f ? held[f] : train[f]).push_back(severities[i]);
  }

  std::vector<CvScore> scores;
  for (double x_min : grid) {
    CvScore score{x_min, kInf, 0.0, 0};
    std::vector<double> fold_scores;
    bool usable = x_min > 0.0;
    for (std::size_t f = 0; usable && f < k; ++f) {
      std::vector<double> tail;
      for (double x : train[f]) {
        if (x >= x_min) tail.push_back(x);
      }
      const double s = tail.size() >= 2 ? sum_log_ratio(tail, x_min) : 0.0;
      if (!(s > 0.0)) {
        usable = false;
        break;
      }
      const PowerLawModel model(1.0 + static_cast<double>(tail.size()) / s, x_min);
      const double start = std::max(q_tail, x_min);
      const bool has_extreme = std::any_of(held[f].begin(), held[f].end(), [&](double x) { return x >= start; });
      if (has_extreme) fold_scores.push_back(extreme_tail_ks(model, held[f], start));
    }
    if (usable && !fold_scores.empty()) {
      const double m = static_cast<double>(fold_scores.size());
      const double mean = std::accumulate(fold_scores.begin(), fold_scores.end(), 0.0) / m;
      double ss = 0.0;
      for (double v : fold_scores) ss += (v - mean) * (v - mean);
      score.mean_score = mean;
      score.std_error = m > 1 ? std::sqrt(ss / (m - 1.0) / m) : 0.0;
      score.folds_scored = fold_scores.size();
    }
    scores.push_back(score);
  }

  // Grid is ascending, so the first strict improvement gives ties to the smallest x_min.
  const CvScore* best = nullptr;
  for (const auto& sc : scores) {
    if (std::isfinite(sc.mean_score) && (!best || sc.mean_score < best->mean_score)) best = &sc;
  }
  if (!best) throw Error(ErrorCode::too_few_points, "no candidate threshold could be cross-validated");
  double chosen = best->x_min;
  if (options.one_standard_error_rule) {
    const double limit = best->mean_score + best->std_error;
    for (const auto& sc : scores) {
      if (std::isfinite(sc.mean_score) && sc.mean_score <= limit) {
        chosen = sc.x_min;
        break;
      }
    }
  }
  return CvResult{fit_power_law(sorted, chosen), q_tail, std::move(scores)};
}

}  // namespace tailrisk
