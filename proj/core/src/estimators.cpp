#include "varext/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "varext/error.hpp"

namespace varext {

std::string_view to_string(EstimatorId id) noexcept {
  switch (id) {
    case EstimatorId::VJV: return "VJV";
    case EstimatorId::VJD: return "VJD";
    case EstimatorId::VJB: return "VJB";
    case EstimatorId::VJS: return "VJS";
    case EstimatorId::VJQ: return "VJQ";
  }
  return "?";
}

EstimatorId parse_estimator_id(std::string_view text) {
  std::string up(text);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (auto id : {EstimatorId::VJV, EstimatorId::VJD, EstimatorId::VJB, EstimatorId::VJS,
                  EstimatorId::VJQ}) {
    if (up == to_string(id)) return id;
  }
  throw Error(ErrorKind::InvalidArgument,
              "unknown estimator '" + std::string(text) + "' (expected VJV|VJD|VJB|VJS|VJQ)");
}

std::string Conventions::name() const {
  if (support_floor && *support_floor == 0.0 &&
      u_bandwidth == QuantileBandwidth::DataScale && plot_positions == PlotPositions::Rank) {
    return "nonnegative";
  }
  if (!support_floor && u_bandwidth == QuantileBandwidth::PlotPositionScale &&
      plot_positions == PlotPositions::CountAtOrBelow) {
    return "equivariant";
  }
  return "custom";
}

Conventions parse_conventions(std::string_view text) {
  if (text == "equivariant") return Conventions::equivariant();
  if (text == "nonnegative") return Conventions::nonnegative();
  throw Error(ErrorKind::InvalidArgument,
              "unknown conventions '" + std::string(text) +
                  "' (expected equivariant|nonnegative)");
}

double quarter_variance(std::span<const double> values) noexcept {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (values.empty() || *lo == *hi) return 0.0;
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return 0.25 * ss / n;
}

VarextropyEstimate vjv(const Sample& s, std::size_t m) {
  const std::size_t n = s.size();
  if (m < 1 || m > n - 1) {
    throw Error(ErrorKind::WindowTooLarge,
                "one-sided window m=" + std::to_string(m) + " must lie in [1, " +
                    std::to_string(n - 1) + "]");
  }
  const auto x = s.values();
  const double scale = static_cast<double>(m) / static_cast<double>(n + 1);
  std::vector<double> t(n - m);
  for (std::size_t j = 0; j + m < n; ++j) {
    const double gap = x[j + m] - x[j];
    if (!(gap > 0.0)) {
      throw Error(ErrorKind::TiedSpacings,
                  "zero spacing X_(" + std::to_string(j + 1 + m) + ") - X_(" +
                      std::to_string(j + 1) + ")",
                  j + 1);
    }
    t[j] = scale / gap;
  }
  return {EstimatorId::VJV, quarter_variance(t), m, std::nullopt, std::nullopt};
}

VarextropyEstimate vjd(const Sample& s, double h, const GridSpec& grid) {
  grid.validate();
  const DensityModel model = make_density_model(s, h);
  const double missed = kde_mass_outside(model, grid);
  if (missed > 1e-3) {
    throw Error(ErrorKind::GridTooNarrow,
                "grid misses " + std::to_string(missed) + " of the kernel mass");
  }
  std::vector<double> f = kde_on_grid(model, grid);
  const std::vector<double> w = trapezoid_weights(grid);

  double mass = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) mass += w[k] * f[k];
  if (!(mass > 0.0)) {
    throw Error(ErrorKind::DegenerateDensity, "density vanishes on the grid");
  }
  if (!grid.support_floor) {
    for (double& v : f) v /= mass;
    mass = 1.0;
  }
  // int f^3 - (int f^2)^2 = sum p (f - mu)^2 + M (1 - M) mu^2 with p = w f,
  // M = sum p and mu = sum p f / M; nonnegative whenever M <= 1.
  double first = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) first += w[k] * f[k] * f[k];
  const double mu = first / mass;
  double spread = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double d = f[k] - mu;
    spread += w[k] * f[k] * d * d;
  }
  const double value = 0.25 * (spread + mass * (1.0 - mass) * mu * mu);
  return {EstimatorId::VJD, value, std::nullopt, h, grid};
}

VarextropyEstimate vjb(const Sample& s, std::optional<double> h) {
  if (s.size() < 3) {
    throw Error(ErrorKind::TooFewPoints, "VJB needs n >= 3");
  }
  std::vector<double> d;
  if (h) {
    if (!(*h > 0.0)) throw Error(ErrorKind::NonpositiveScale, "bandwidth must be positive");
    const auto x = s.values();
    const std::size_t n = x.size();
    d.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) sum += kernel_value(Kernel::Normal, (x[i] - x[j]) / *h);
      }
      d[i] = sum / (static_cast<double>(n - 1) * *h);
    }
  } else {
    sample_std(s);  // ZeroVariance for constant samples
    d = loo_kde_all(s);
  }
  return {EstimatorId::VJB, quarter_variance(d), std::nullopt, h, std::nullopt};
}

VarextropyEstimate vjs(const Sample& s, const QuantileDensityOptions& options,
                       std::size_t u_points) {
  if (u_points < 2) throw Error(ErrorKind::InvalidArgument, "u grid needs >= 2 nodes");
  const QuantileDensityModel q = make_quantile_density(s, options);
  const double step = 1.0 / static_cast<double>(u_points);
  const std::vector<double> qv = q.on_grid(0.5 * step, step, u_points);
  std::vector<double> inv(u_points);
  for (std::size_t k = 0; k < u_points; ++k) {
    if (!(qv[k] > 0.0) || !std::isfinite(qv[k])) {
      throw Error(ErrorKind::DegenerateDensity,
                  "quantile density vanishes at u-node " + std::to_string(k), k);
    }
    inv[k] = 1.0 / qv[k];
  }
  // equal midpoint weights form a probability vector, so this is a variance
  VarextropyEstimate e{EstimatorId::VJS, quarter_variance(inv), std::nullopt,
                       q.u_bandwidth(), std::nullopt};
  e.grid = GridSpec{0.5 * step, 1.0 - 0.5 * step, u_points, std::nullopt};
  return e;
}

VarextropyEstimate vjq(const Sample& s, std::size_t m) {
  const std::size_t n = s.size();
  if (m < 1 || 2 * m >= n) {
    throw Error(ErrorKind::WindowTooLarge,
                "two-sided window m=" + std::to_string(m) + " must satisfy 1 <= m < n/2 (n=" +
                    std::to_string(n) + ")");
  }
  const double mn = static_cast<double>(m) / static_cast<double>(n);
  std::vector<double> t(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const long il = static_cast<long>(i);
    const long ml = static_cast<long>(m);
    const double gap = order_statistic_clamped(s, il + ml) - order_statistic_clamped(s, il - ml);
    if (!(gap > 0.0)) {
      throw Error(ErrorKind::TiedSpacings,
                  "zero window width around X_(" + std::to_string(i) + ")", i);
    }
    t[i - 1] = c_weight(n, m, i) * mn / gap;
  }
  return {EstimatorId::VJQ, quarter_variance(t), m, std::nullopt, std::nullopt};
}

VarextropyEstimate estimate(EstimatorId id, const Sample& s, const EstimatorOptions& options) {
  switch (id) {
    case EstimatorId::VJV:
      return vjv(s, options.window.value_or(default_window(s.size(), WindowKind::OneSided)));
    case EstimatorId::VJQ:
      return vjq(s, options.window.value_or(default_window(s.size(), WindowKind::TwoSided)));
    case EstimatorId::VJD: {
      const double h = options.bandwidth.value_or(silverman_bandwidth(s));
      return vjd(s, h,
                 default_grid(s, h, options.grid_points, options.conventions.support_floor));
    }
    case EstimatorId::VJB:
      return vjb(s, options.bandwidth);
    case EstimatorId::VJS: {
      QuantileDensityOptions q;
      q.bandwidth = options.conventions.u_bandwidth;
      q.positions = options.conventions.plot_positions;
      q.data_bandwidth = options.bandwidth;
      return vjs(s, q, options.u_grid_points);
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown estimator");
}

}  // namespace varext
