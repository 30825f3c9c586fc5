#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "varext/sample.hpp"

namespace varext {

enum class Kernel { Normal };

double kernel_value(Kernel kernel, double z) noexcept;
/// Integral of the kernel over (-inf, z].
double kernel_cdf(Kernel kernel, double z) noexcept;

/// 1.06 * s * n^(-1/5). Throws NonpositiveScale for s <= 0 and
/// InvalidArgument for n < 2.
double silverman_bandwidth(std::size_t n, double s);

/// Silverman bandwidth from the sample's own n-1 standard deviation.
double silverman_bandwidth(const Sample& s);

/// Kernel density estimate over borrowed points. The span must outlive the
/// model.
struct DensityModel {
  std::span<const double> points;
  double bandwidth = 0.0;
  Kernel kernel = Kernel::Normal;
};

/// Model over `s` with bandwidth `h`, or the Silverman bandwidth if unset.
DensityModel make_density_model(const Sample& s, std::optional<double> h = std::nullopt);

/// (1/(n h)) sum_i K((x - X_i)/h).
double kde_at(const DensityModel& model, double x) noexcept;

/// Leave-one-out density at the sorted observation with 0-based index i.
///
/// The retained n-1 points form an ordinary KDE whose Silverman bandwidth
/// is h_{n-1} = 1.06 s_{-i} (n-1)^(-1/5), with s_{-i} the standard
/// deviation of the retained points. Throws TooFewPoints for n < 3 and
/// ZeroVariance when the retained points coincide.
double loo_kde_at(const Sample& s, std::size_t i);

/// loo_kde_at for every observation, in sorted order. O(n^2).
std::vector<double> loo_kde_all(const Sample& s);

inline constexpr std::size_t kDefaultGridPoints = 2048;
inline constexpr double kGridTailWidths = 4.0;

/// Uniform quadrature grid over [lo, hi].
///
/// `support_floor`, when set, declares that the density is integrated over
/// [support_floor, inf) only: mass below the floor is intentionally cut,
/// and estimators treat the truncated integral as the functional.
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = kDefaultGridPoints;
  std::optional<double> support_floor;

  double step() const noexcept { return (hi - lo) / static_cast<double>(points - 1); }
  double node(std::size_t k) const noexcept {
    return lo + static_cast<double>(k) * step();
  }
  /// Throws InvalidArgument unless lo < hi and points >= 64.
  void validate() const;
};

/// [X_(1) - 4h, X_(n) + 4h] with the lower end raised to `support_floor`
/// when that is larger.
GridSpec default_grid(const Sample& s, double h,
                      std::size_t points = kDefaultGridPoints,
                      std::optional<double> support_floor = std::nullopt);

std::vector<double> grid_nodes(const GridSpec& grid);

/// Composite trapezoid rule over the grid nodes. Throws LengthMismatch.
double integrate(std::span<const double> values, const GridSpec& grid);

/// Trapezoid weights for the grid; they sum to hi - lo.
std::vector<double> trapezoid_weights(const GridSpec& grid);

/// KDE values at every grid node.
std::vector<double> kde_on_grid(const DensityModel& model, const GridSpec& grid);

/// Kernel mass that falls outside [lo, hi] but inside the declared support.
double kde_mass_outside(const DensityModel& model, const GridSpec& grid) noexcept;

/// Adds weight * phi((lo + k*step - center)/h) to out[k] for every k.
///
/// Walks outward from the node nearest `center` with a multiplicative
/// recurrence, re-anchoring with a direct evaluation every 64 nodes, and
/// stops once contributions drop below 1e-300.
void accumulate_normal_kernel(double center, double h, double weight, double lo,
                              double step, std::span<double> out) noexcept;

// ---------------------------------------------------------------------------
// Quantile density

/// How the u-space smoothing bandwidth of the quantile density is chosen.
enum class QuantileBandwidth {
  /// 1.06 * sd(S_i) * n^(-1/5): dimensionless, so the estimate is exactly
  /// location/scale equivariant.
  PlotPositionScale,
  /// Reuse the data-space bandwidth of f_n in u-space.
  DataScale,
};

enum class PlotPositions {
  /// S_i = #{X_j <= X_(i)} / n; tied observations share the largest rank.
  CountAtOrBelow,
  /// S_i = i / n.
  Rank,
};

struct QuantileDensityOptions {
  QuantileBandwidth bandwidth = QuantileBandwidth::PlotPositionScale;
  PlotPositions positions = PlotPositions::CountAtOrBelow;
  /// Bandwidth of f_n; Silverman when unset.
  std::optional<double> data_bandwidth;
};

/// Smooth quantile density
///   q(u) = (1/(n h_u)) sum_i K((S_i - u)/h_u) / f_n(X_(i)).
class QuantileDensityModel {
 public:
  QuantileDensityModel(std::vector<double> plot_positions,
                       std::vector<double> kde_at_order_stats, double u_bandwidth);

  double operator()(double u) const noexcept;

  /// q at u_k = lo + k*step, k = 0..count-1.
  std::vector<double> on_grid(double lo, double step, std::size_t count) const;

  double u_bandwidth() const noexcept { return u_bandwidth_; }
  std::span<const double> plot_positions() const noexcept { return plot_positions_; }
  std::span<const double> kde_at_order_stats() const noexcept { return kde_at_order_stats_; }

 private:
  std::vector<double> plot_positions_;
  std::vector<double> kde_at_order_stats_;
  double u_bandwidth_;
};

/// Throws DegenerateDensity if f_n underflows at an order statistic.
QuantileDensityModel make_quantile_density(const Sample& s,
                                           const QuantileDensityOptions& options = {});

/// q at u in (0,1) with default options.
double quantile_density(const Sample& s, double u);

}  // namespace varext
