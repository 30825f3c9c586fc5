#include "varext/uniformity.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "varext/error.hpp"
#include "varext/rng.hpp"

namespace varext {
namespace {

constexpr std::array<StatKind, 12> kAllKinds = {
    StatKind::GV, StatKind::GD, StatKind::GB, StatKind::GS, StatKind::GQ, StatKind::KS,
    StatKind::TV, StatKind::TE, StatKind::TD, StatKind::TB, StatKind::TC, StatKind::TA};

std::string upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

double variance(std::span<const double> v) { return 4.0 * quarter_variance(v); }

std::size_t two_sided_window(const Sample& s, const EstimatorOptions& options) {
  const std::size_t m = options.window.value_or(default_window(s.size(), WindowKind::TwoSided));
  if (m < 1 || 2 * m >= s.size()) {
    throw Error(ErrorKind::WindowTooLarge,
                "two-sided window m=" + std::to_string(m) + " must satisfy 1 <= m < n/2");
  }
  return m;
}

double checked_log(double v, std::size_t i, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::DegenerateDensity,
                std::string("log of non-positive ") + what + " at i=" + std::to_string(i), i);
  }
  return std::log(v);
}

// log(X_(i+m) - X_(i-m)) with clamped indices, or TiedSpacings.
double log_gap(const Sample& s, std::size_t i, std::size_t m) {
  const long il = static_cast<long>(i);
  const long ml = static_cast<long>(m);
  const double gap = order_statistic_clamped(s, il + ml) - order_statistic_clamped(s, il - ml);
  if (!(gap > 0.0)) {
    throw Error(ErrorKind::TiedSpacings,
                "zero window width around X_(" + std::to_string(i) + ")", i);
  }
  return std::log(gap);
}

double stat_tv(const Sample& s, std::size_t m) {
  std::vector<double> v(s.size());
  for (std::size_t i = 1; i <= s.size(); ++i) v[i - 1] = log_gap(s, i, m);
  return variance(v);
}

double stat_te(const Sample& s, std::size_t m) {
  const std::size_t n = s.size();
  const double mn = static_cast<double>(m) / static_cast<double>(n);
  std::vector<double> v(n);
  for (std::size_t i = 1; i <= n; ++i) {
    v[i - 1] = std::log(c_weight(n, m, i) * mn) - log_gap(s, i, m);
  }
  return variance(v);
}

double stat_td(const Sample& s, const EstimatorOptions& options) {
  const double h = options.bandwidth.value_or(silverman_bandwidth(s));
  const DensityModel model = make_density_model(s, h);
  const GridSpec grid = default_grid(s, h, options.grid_points);
  const std::vector<double> f = kde_on_grid(model, grid);
  const std::vector<double> w = trapezoid_weights(grid);
  double a = 0.0;
  double b = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!(f[k] > 0.0)) continue;  // f log f -> 0
    const double lf = std::log(f[k]);
    a += w[k] * f[k] * lf * lf;
    b += w[k] * f[k] * lf;
  }
  return a - b * b;
}

std::vector<double> kde_at_points(const Sample& s, const EstimatorOptions& options) {
  const double h = options.bandwidth.value_or(silverman_bandwidth(s));
  const DensityModel model = make_density_model(s, h);
  std::vector<double> f(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) f[i] = kde_at(model, s.values()[i]);
  return f;
}

double stat_tb(const Sample& s, const EstimatorOptions& options) {
  const std::vector<double> f = kde_at_points(s, options);
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) v[i] = checked_log(f[i], i + 1, "density");
  return variance(v);
}

double stat_ta(const Sample& s, std::size_t m, const EstimatorOptions& options) {
  const std::size_t n = s.size();
  const std::vector<double> f = kde_at_points(s, options);  // sorted order
  auto clamped = [&](long j) {
    return f[static_cast<std::size_t>(std::clamp<long>(j, 1, static_cast<long>(n)) - 1)];
  };
  std::vector<double> v(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const long il = static_cast<long>(i);
    const long ml = static_cast<long>(m);
    v[i - 1] = checked_log(clamped(il + ml) + clamped(il - ml), i, "density sum");
  }
  return variance(v);
}

double stat_tc(const Sample& s, std::size_t m) {
  const std::size_t n = s.size();
  const long ml = static_cast<long>(m);
  const double width = static_cast<double>(2 * m + 1);
  std::vector<double> v(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const long il = static_cast<long>(i);
    double mean = 0.0;
    for (long j = il - ml; j <= il + ml; ++j) mean += order_statistic_clamped(s, j);
    mean /= width;
    double num = 0.0;
    double den = 0.0;
    for (long j = il - ml; j <= il + ml; ++j) {
      const double d = order_statistic_clamped(s, j) - mean;
      num += d * static_cast<double>(j - il);
      den += d * d;
    }
    const double ratio = num / (static_cast<double>(n) * den);
    if (!(den > 0.0) || !(ratio > 0.0)) {
      throw Error(ErrorKind::TiedSpacings,
                  "flat window around X_(" + std::to_string(i) + ")", i);
    }
    v[i - 1] = std::log(ratio);
  }
  return variance(v);
}

}  // namespace

std::string_view to_string(StatKind kind) noexcept {
  switch (kind) {
    case StatKind::GV: return "GV";
    case StatKind::GD: return "GD";
    case StatKind::GB: return "GB";
    case StatKind::GS: return "GS";
    case StatKind::GQ: return "GQ";
    case StatKind::KS: return "KS";
    case StatKind::TV: return "TV";
    case StatKind::TE: return "TE";
    case StatKind::TD: return "TD";
    case StatKind::TB: return "TB";
    case StatKind::TC: return "TC";
    case StatKind::TA: return "TA";
  }
  return "?";
}

StatKind parse_stat_kind(std::string_view text) {
  const std::string up = upper(text);
  for (StatKind k : kAllKinds) {
    if (up == to_string(k)) return k;
  }
  throw Error(ErrorKind::InvalidArgument,
              "unknown statistic '" + std::string(text) +
                  "' (expected GV GD GB GS GQ KS TV TE TD TB TC TA)");
}

std::vector<StatKind> parse_stat_kinds(std::string_view text) {
  std::vector<StatKind> out;
  auto add = [&](StatKind k) {
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string item(text.substr(pos, comma - pos));
    item.erase(std::remove_if(item.begin(), item.end(),
                              [](unsigned char c) { return std::isspace(c); }),
               item.end());
    const std::string up = upper(item);
    if (up == "G" || up == "ALL") {
      for (StatKind k : kGStatistics) add(k);
    }
    if (up == "T" || up == "ALL") {
      for (StatKind k : kCompetitorStatistics) add(k);
    }
    if (up != "G" && up != "T" && up != "ALL") add(parse_stat_kind(item));
    pos = comma + 1;
  }
  return out;
}

bool is_g_statistic(StatKind kind) noexcept {
  return std::find(kGStatistics.begin(), kGStatistics.end(), kind) != kGStatistics.end();
}

EstimatorId estimator_for(StatKind kind) {
  switch (kind) {
    case StatKind::GV: return EstimatorId::VJV;
    case StatKind::GD: return EstimatorId::VJD;
    case StatKind::GB: return EstimatorId::VJB;
    case StatKind::GS: return EstimatorId::VJS;
    case StatKind::GQ: return EstimatorId::VJQ;
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument,
              std::string(to_string(kind)) + " is not a varextropy statistic");
}

EstimatorOptions unit_interval_options() {
  EstimatorOptions o;
  o.conventions = Conventions::nonnegative();
  return o;
}

void require_unit_interval(const Sample& s) {
  const auto x = s.values();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0 || x[i] > 1.0) {
      throw Error(ErrorKind::OutOfUnitInterval,
                  "observation X_(" + std::to_string(i + 1) + ") = " + std::to_string(x[i]) +
                      " lies outside [0,1]",
                  i + 1);
    }
  }
}

double g_statistic(StatKind kind, const Sample& s, const EstimatorOptions& options) {
  require_unit_interval(s);
  return estimate(estimator_for(kind), s, options).value;
}

double ks_statistic(const Sample& s) {
  require_unit_interval(s);
  const auto x = s.values();
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double k = static_cast<double>(i);
    d = std::max({d, (k + 1.0) / n - x[i], x[i] - k / n});
  }
  return d;
}

double competitor_statistic(StatKind kind, const Sample& s, const EstimatorOptions& options) {
  require_unit_interval(s);
  switch (kind) {
    case StatKind::TV: return stat_tv(s, two_sided_window(s, options));
    case StatKind::TE: return stat_te(s, two_sided_window(s, options));
    case StatKind::TD: return stat_td(s, options);
    case StatKind::TB: return stat_tb(s, options);
    case StatKind::TC: return stat_tc(s, two_sided_window(s, options));
    case StatKind::TA: return stat_ta(s, two_sided_window(s, options), options);
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument,
              std::string(to_string(kind)) + " is not a competitor statistic");
}

double statistic(StatKind kind, const Sample& s, const EstimatorOptions& options) {
  if (is_g_statistic(kind)) return g_statistic(kind, s, options);
  if (kind == StatKind::KS) return ks_statistic(s);
  return competitor_statistic(kind, s, options);
}

// ---------------------------------------------------------------------------

std::optional<double> CriticalValueTable::at(std::size_t n) const {
  const auto it = entries.find(n);
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

const CriticalValueTable* find_critical_table(std::span<const CriticalValueTable> tables,
                                              StatKind kind, double alpha, std::size_t n) {
  for (const auto& t : tables) {
    if (t.kind == kind && std::abs(t.alpha - alpha) <= 1e-12 && t.at(n)) return &t;
  }
  return nullptr;
}

double empirical_upper_quantile(std::vector<double> values, double alpha) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "no simulated values");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
  }
  const double count = static_cast<double>(values.size());
  const double target = (1.0 - alpha) * count;
  auto rank = static_cast<std::size_t>(std::ceil(target * (1.0 - 1e-9)));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

std::vector<std::vector<double>> simulate_null_statistics(std::span<const StatKind> kinds,
                                                          std::size_t n,
                                                          const CalibrationOptions& options,
                                                          std::size_t* redraws) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "calibration needs n >= 3");
  if (kinds.empty()) throw Error(ErrorKind::InvalidArgument, "no statistics requested");
  std::vector<std::vector<double>> out(options.reps, std::vector<double>(kinds.size()));
  std::vector<std::size_t> redrawn(options.reps, 0);
  parallel_for(options.reps, options.workers, [&](std::size_t r) {
    Substream rng = rng_substream(options.seed, r);
    std::vector<double> u(n);
    for (;;) {
      for (double& v : u) v = rng.uniform();
      Sample s = make_sample(u);
      if (s.has_ties()) {
        ++redrawn[r];
        continue;
      }
      for (std::size_t k = 0; k < kinds.size(); ++k) {
        out[r][k] = statistic(kinds[k], s, options.estimator);
      }
      return;
    }
  });
  if (redraws) *redraws = std::accumulate(redrawn.begin(), redrawn.end(), std::size_t{0});
  return out;
}

std::vector<CalibrationResult> calibrate_critical_values(std::span<const StatKind> kinds,
                                                         std::size_t n, double alpha,
                                                         const CalibrationOptions& options) {
  if (options.reps < 1000) {
    throw Error(ErrorKind::InvalidArgument, "calibration needs reps >= 1000");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
  }
  std::size_t redraws = 0;
  const auto rows = simulate_null_statistics(kinds, n, options, &redraws);
  std::vector<CalibrationResult> out;
  std::vector<double> column(rows.size());
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][k];
    out.push_back({kinds[k], n, empirical_upper_quantile(column, alpha), redraws});
  }
  return out;
}

CalibrationResult calibrate_critical_value(StatKind kind, std::size_t n, double alpha,
                                           std::size_t reps, std::uint64_t seed,
                                           std::size_t workers) {
  CalibrationOptions o;
  o.reps = reps;
  o.seed = seed;
  o.workers = workers;
  const StatKind kinds[] = {kind};
  return calibrate_critical_values(kinds, n, alpha, o).front();
}

// ---------------------------------------------------------------------------

TestOutcome run_test(StatKind kind, const Sample& s, const CriticalValueTable& table,
                     const EstimatorOptions& options) {
  const auto c = table.at(s.size());
  if (!c) {
    throw Error(ErrorKind::MissingCriticalValue,
                "no " + std::string(to_string(kind)) + " critical value for n=" +
                    std::to_string(s.size()) + " (calibrate one with --calibrate)");
  }
  TestOutcome o;
  o.kind = kind;
  o.statistic = statistic(kind, s, options);
  o.critical_value = *c;
  o.alpha = table.alpha;
  o.reject = o.statistic >= o.critical_value;
  return o;
}

Sample probability_integral_transform(std::span<const double> values,
                                      const ReferenceDistribution& model) {
  model.validate();
  constexpr double eps = 1e-12;
  std::vector<double> u(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = values[i];
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::NonFiniteValue, "non-finite value at index " + std::to_string(i), i);
    }
    const bool above = (model.family == Family::Uniform01 && x > 1.0) ||
                       (model.family == Family::Uniform && x > model.p2);
    if (x < model.support_lower() || above ||
        (model.family == Family::ADistribution && !(x > 0.0))) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "value " << x << " (index " << i << ") is outside the support of "
          << model.name();
      throw Error(ErrorKind::DomainError, msg.str(), i);
    }
    double v = model.cdf(x);
    if (v == 0.0) v = eps;
    if (v == 1.0) v = 1.0 - eps;
    u[i] = v;
  }
  return make_sample(std::move(u));
}

double a_distribution_log_likelihood(double beta, std::span<const double> values) {
  double ll = 0.0;
  for (double x : values) {
    ll += -std::expm1(beta / x) / beta + beta / x - 2.0 * std::log(x);
  }
  return ll;
}

ReferenceDistribution fit_model(Family family, std::span<const double> values) {
  if (values.size() < 2) throw Error(ErrorKind::EmptyOrSingleton, "fitting needs n >= 2");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::NonFiniteValue, "non-finite value at index " + std::to_string(i), i);
    }
  }
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  auto require_positive = [&](const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] > 0.0)) {
        throw Error(ErrorKind::DomainError,
                    std::string(what) + " needs positive data; index " + std::to_string(i) +
                        " is " + std::to_string(values[i]),
                    i);
      }
    }
  };
  switch (family) {
    case Family::Normal:
      return ReferenceDistribution::normal(mean, sample_std(values));
    case Family::Exponential:
      require_positive("exponential fit");
      return ReferenceDistribution::exponential(1.0 / mean);
    case Family::ADistribution: {
      require_positive("A-distribution fit");
      // Scan log(beta) to bracket the maximum, then refine with Brent.
      const double xmin = *std::min_element(values.begin(), values.end());
      auto nll = [&](double log_beta) {
        const double v = -a_distribution_log_likelihood(std::exp(log_beta), values);
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
      };
      // exp(beta/x) overflows near beta/x = 709
      const double hi = std::log(700.0 * xmin);
      const double lo = hi - std::log(1e12);
      constexpr int kScan = 240;
      int best = 0;
      double best_v = std::numeric_limits<double>::max();
      for (int k = 0; k <= kScan; ++k) {
        const double v = nll(lo + (hi - lo) * k / kScan);
        if (v < best_v) {
          best_v = v;
          best = k;
        }
      }
      if (best == 0 || best == kScan) {
        throw Error(ErrorKind::NoConvergence,
                    "A-distribution likelihood has no interior maximum");
      }
      const double a = lo + (hi - lo) * (best - 1) / kScan;
      const double b = lo + (hi - lo) * (best + 1) / kScan;
      std::uintmax_t iters = 200;
      const auto r = boost::math::tools::brent_find_minima(nll, a, b, 40, iters);
      if (iters >= 200) throw Error(ErrorKind::NoConvergence, "A-distribution fit did not converge");
      return ReferenceDistribution::a_distribution(std::exp(r.first));
    }
    case Family::Uniform: {
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      if (*lo == *hi) throw Error(ErrorKind::ZeroVariance, "uniform fit needs distinct values");
      return ReferenceDistribution::uniform(*lo, *hi);
    }
    case Family::Uniform01:
    case Family::ExponentialMean1:
    case Family::Gamma_2_1: {
      ReferenceDistribution d{family};
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < d.support_lower() ||
            (family == Family::Uniform01 && values[i] > 1.0)) {
          throw Error(ErrorKind::DomainError,
                      "value at index " + std::to_string(i) + " is outside the support of " +
                          d.name(),
                      i);
        }
      }
      return d;
    }
  }
  throw Error(ErrorKind::UnsupportedFamily, "cannot fit this family");
}

}  // namespace varext
