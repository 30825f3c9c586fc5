#include "varext/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "varext/error.hpp"

namespace varext {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2 pi)
constexpr double kNegligible = 1e-300;
constexpr std::size_t kReanchorEvery = 64;

inline double phi(double z) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

}  // namespace

double kernel_value(Kernel, double z) noexcept { return phi(z); }

double kernel_cdf(Kernel, double z) noexcept {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double silverman_bandwidth(std::size_t n, double s) {
  if (n < 2) {
    throw Error(ErrorKind::InvalidArgument,
                "bandwidth needs n >= 2, got " + std::to_string(n));
  }
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorKind::NonpositiveScale, "scale must be positive and finite");
  }
  return 1.06 * s * std::pow(static_cast<double>(n), -0.2);
}

double silverman_bandwidth(const Sample& s) {
  return silverman_bandwidth(s.size(), sample_std(s));
}

DensityModel make_density_model(const Sample& s, std::optional<double> h) {
  const double bw = h ? *h : silverman_bandwidth(s);
  if (!(bw > 0.0) || !std::isfinite(bw)) {
    throw Error(ErrorKind::NonpositiveScale, "bandwidth must be positive and finite");
  }
  return DensityModel{s.values(), bw, Kernel::Normal};
}

double kde_at(const DensityModel& model, double x) noexcept {
  const double h = model.bandwidth;
  double sum = 0.0;
  for (double xi : model.points) sum += phi((x - xi) / h);
  return sum / (static_cast<double>(model.points.size()) * h);
}

namespace {

// Leave-one-out density at sorted index i given the retained-sample bandwidth.
double loo_density(std::span<const double> v, std::size_t i, double h) noexcept {
  double sum = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j != i) sum += phi((v[i] - v[j]) / h);
  }
  return sum / (static_cast<double>(v.size() - 1) * h);
}

struct Moments {
  double mean = 0.0;
  double ss = 0.0;  // sum of squared deviations
};

Moments moments(std::span<const double> v) noexcept {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.ss += (x - m.mean) * (x - m.mean);
  return m;
}

// Bandwidth of the KDE over v without v[i], from the retained sd.
double loo_bandwidth(std::span<const double> v, std::size_t i, const Moments& full) {
  const std::size_t n = v.size();
  const double nd = static_cast<double>(n);
  const double mean_wo = (nd * full.mean - v[i]) / (nd - 1.0);
  double ss_wo = full.ss - (v[i] - full.mean) * (v[i] - mean_wo);
  // all retained values equal: the downdate can leave rounding residue
  const bool retained_constant =
      (i == 0 ? v[1] == v[n - 1] : (i == n - 1 ? v[0] == v[n - 2] : v[0] == v[n - 1]));
  if (retained_constant || !(ss_wo > 0.0)) {
    throw Error(ErrorKind::ZeroVariance,
                "leave-one-out sample is constant at index " + std::to_string(i), i);
  }
  const double sd = std::sqrt(ss_wo / (nd - 2.0));
  return silverman_bandwidth(n - 1, sd);
}

}  // namespace

double loo_kde_at(const Sample& s, std::size_t i) {
  const auto v = s.values();
  if (v.size() < 3) {
    throw Error(ErrorKind::TooFewPoints, "leave-one-out density needs n >= 3");
  }
  if (i >= v.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "index " + std::to_string(i), i);
  }
  return loo_density(v, i, loo_bandwidth(v, i, moments(v)));
}

std::vector<double> loo_kde_all(const Sample& s) {
  const auto v = s.values();
  if (v.size() < 3) {
    throw Error(ErrorKind::TooFewPoints, "leave-one-out density needs n >= 3");
  }
  const Moments full = moments(v);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = loo_density(v, i, loo_bandwidth(v, i, full));
  }
  return out;
}

void GridSpec::validate() const {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorKind::InvalidArgument, "grid needs finite lo < hi");
  }
  if (points < 64) {
    throw Error(ErrorKind::InvalidArgument,
                "grid needs at least 64 points, got " + std::to_string(points));
  }
}

GridSpec default_grid(const Sample& s, double h, std::size_t points,
                      std::optional<double> support_floor) {
  if (!(h > 0.0)) throw Error(ErrorKind::NonpositiveScale, "bandwidth must be positive");
  GridSpec g{s.min() - kGridTailWidths * h, s.max() + kGridTailWidths * h, points,
             support_floor};
  if (support_floor) {
    if (s.min() < *support_floor) {
      throw Error(ErrorKind::DomainError, "sample extends below the support floor");
    }
    g.lo = std::max(g.lo, *support_floor);
  }
  g.validate();
  return g;
}

std::vector<double> grid_nodes(const GridSpec& grid) {
  std::vector<double> out(grid.points);
  for (std::size_t k = 0; k < grid.points; ++k) out[k] = grid.node(k);
  return out;
}

std::vector<double> trapezoid_weights(const GridSpec& grid) {
  std::vector<double> w(grid.points, grid.step());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double integrate(std::span<const double> values, const GridSpec& grid) {
  if (values.size() != grid.points) {
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(values.size()) + " values for a grid of " +
                    std::to_string(grid.points) + " points");
  }
  double interior = 0.0;
  for (std::size_t k = 1; k + 1 < values.size(); ++k) interior += values[k];
  return grid.step() * (interior + 0.5 * (values.front() + values.back()));
}

void accumulate_normal_kernel(double center, double h, double weight, double lo,
                              double step, std::span<double> out) noexcept {
  const std::size_t count = out.size();
  if (count == 0) return;
  const double d = step / h;
  const double q = std::exp(-d * d);
  const double half_d2 = 0.5 * d * d;
  const double pos = (center - lo) / step;
  const auto k0 = static_cast<std::size_t>(
      std::clamp(std::nearbyint(pos), 0.0, static_cast<double>(count - 1)));
  auto z_at = [&](std::size_t k) { return (lo + static_cast<double>(k) * step - center) / h; };

  // rightward: phi(z + d) = phi(z) * exp(-z d - d^2/2)
  {
    double z = z_at(k0);
    double v = weight * phi(z);
    double r = std::exp(-z * d - half_d2);
    for (std::size_t k = k0, steps = 0; k < count; ++k, ++steps) {
      if (steps == kReanchorEvery) {
        z = z_at(k);
        v = weight * phi(z);
        r = std::exp(-z * d - half_d2);
        steps = 0;
      }
      if (v < kNegligible && k > k0) break;
      out[k] += v;
      v *= r;
      r *= q;
    }
  }
  // leftward: phi(z - d) = phi(z) * exp(z d - d^2/2)
  if (k0 > 0) {
    double z = z_at(k0 - 1);
    double v = weight * phi(z);
    double r = std::exp(z * d - half_d2);
    std::size_t steps = 0;
    for (std::size_t k = k0; k-- > 0; ++steps) {
      if (steps == kReanchorEvery) {
        z = z_at(k);
        v = weight * phi(z);
        r = std::exp(z * d - half_d2);
        steps = 0;
      }
      if (v < kNegligible) break;
      out[k] += v;
      v *= r;
      r *= q;
    }
  }
}

std::vector<double> kde_on_grid(const DensityModel& model, const GridSpec& grid) {
  grid.validate();
  std::vector<double> out(grid.points, 0.0);
  const double w = 1.0 / (static_cast<double>(model.points.size()) * model.bandwidth);
  const double step = grid.step();
  for (double xi : model.points) {
    accumulate_normal_kernel(xi, model.bandwidth, w, grid.lo, step, out);
  }
  return out;
}

double kde_mass_outside(const DensityModel& model, const GridSpec& grid) noexcept {
  const double h = model.bandwidth;
  double missing = 0.0;
  for (double xi : model.points) {
    double below = kernel_cdf(Kernel::Normal, (grid.lo - xi) / h);
    if (grid.support_floor) {
      below -= kernel_cdf(Kernel::Normal, (*grid.support_floor - xi) / h);
    }
    const double above = kernel_cdf(Kernel::Normal, (xi - grid.hi) / h);
    missing += std::max(below, 0.0) + above;
  }
  return missing / static_cast<double>(model.points.size());
}

// ---------------------------------------------------------------------------

QuantileDensityModel::QuantileDensityModel(std::vector<double> plot_positions,
                                           std::vector<double> kde_at_order_stats,
                                           double u_bandwidth)
    : plot_positions_(std::move(plot_positions)),
      kde_at_order_stats_(std::move(kde_at_order_stats)),
      u_bandwidth_(u_bandwidth) {
  if (plot_positions_.size() != kde_at_order_stats_.size()) {
    throw Error(ErrorKind::LengthMismatch, "plot positions and densities differ in length");
  }
  if (!(u_bandwidth_ > 0.0)) {
    throw Error(ErrorKind::NonpositiveScale, "u-space bandwidth must be positive");
  }
  for (std::size_t i = 0; i < kde_at_order_stats_.size(); ++i) {
    if (!(kde_at_order_stats_[i] > 0.0) || !std::isfinite(kde_at_order_stats_[i])) {
      throw Error(ErrorKind::DegenerateDensity,
                  "density estimate vanishes at order statistic " + std::to_string(i + 1),
                  i);
    }
  }
}

double QuantileDensityModel::operator()(double u) const noexcept {
  const double h = u_bandwidth_;
  double sum = 0.0;
  for (std::size_t i = 0; i < plot_positions_.size(); ++i) {
    sum += phi((plot_positions_[i] - u) / h) / kde_at_order_stats_[i];
  }
  return sum / (static_cast<double>(plot_positions_.size()) * h);
}

std::vector<double> QuantileDensityModel::on_grid(double lo, double step,
                                                  std::size_t count) const {
  std::vector<double> out(count, 0.0);
  const double nh = static_cast<double>(plot_positions_.size()) * u_bandwidth_;
  for (std::size_t i = 0; i < plot_positions_.size(); ++i) {
    accumulate_normal_kernel(plot_positions_[i], u_bandwidth_,
                             1.0 / (nh * kde_at_order_stats_[i]), lo, step, out);
  }
  return out;
}

QuantileDensityModel make_quantile_density(const Sample& s,
                                           const QuantileDensityOptions& options) {
  const auto v = s.values();
  const std::size_t n = v.size();
  const double nd = static_cast<double>(n);
  const DensityModel f = make_density_model(s, options.data_bandwidth);

  std::vector<double> positions(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (options.positions == PlotPositions::Rank) {
      positions[i] = static_cast<double>(i + 1) / nd;
    } else {
      std::size_t last = i;
      while (last + 1 < n && v[last + 1] == v[i]) ++last;
      positions[i] = static_cast<double>(last + 1) / nd;
    }
  }

  std::vector<double> dens(n);
  for (std::size_t i = 0; i < n; ++i) dens[i] = kde_at(f, v[i]);

  double hu = f.bandwidth;
  if (options.bandwidth == QuantileBandwidth::PlotPositionScale) {
    hu = silverman_bandwidth(n, sample_std(positions));
  }
  return QuantileDensityModel(std::move(positions), std::move(dens), hu);
}

double quantile_density(const Sample& s, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "u must lie in (0, 1)");
  }
  return make_quantile_density(s)(u);
}

}  // namespace varext
