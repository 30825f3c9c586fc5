#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "varext/density.hpp"
#include "varext/distributions.hpp"
#include "varext/sample.hpp"

namespace varext {

enum class EstimatorId { VJV, VJD, VJB, VJS, VJQ };

std::string_view to_string(EstimatorId id) noexcept;
/// Accepts "VJV".."VJQ" in any case. Throws InvalidArgument.
EstimatorId parse_estimator_id(std::string_view text);

/// Integration and smoothing conventions shared by the KDE-based estimators.
struct Conventions {
  /// Lower end of the integration domain for VJD; unset integrates over the
  /// whole line.
  std::optional<double> support_floor;
  QuantileBandwidth u_bandwidth = QuantileBandwidth::PlotPositionScale;
  PlotPositions plot_positions = PlotPositions::CountAtOrBelow;

  /// Location/scale equivariant estimators (the default).
  static Conventions equivariant() { return {}; }

  /// For data on [0, inf) measured on a fixed scale, e.g. probability
  /// integral transforms or lifetime data: KDE functionals integrate over
  /// [0, inf), the quantile density reuses the data-space bandwidth, and
  /// plot positions are i/n.
  static Conventions nonnegative() {
    return {0.0, QuantileBandwidth::DataScale, PlotPositions::Rank};
  }

  std::string name() const;
};

/// Parses "equivariant" or "nonnegative". Throws InvalidArgument.
Conventions parse_conventions(std::string_view text);

struct EstimatorOptions {
  std::optional<std::size_t> window;   // m; default_window(n) when unset
  std::optional<double> bandwidth;     // data-space h; Silverman when unset
  std::size_t grid_points = kDefaultGridPoints;
  std::size_t u_grid_points = 1024;
  Conventions conventions;
};

struct VarextropyEstimate {
  EstimatorId id = EstimatorId::VJV;
  double value = 0.0;
  std::optional<std::size_t> window;
  std::optional<double> bandwidth;
  std::optional<GridSpec> grid;
};

/// Spacing estimator (1/4)(T' - T''^2) with local histogram density
/// (m/(n+1)) / (X_(j+m) - X_(j)), j = 1..n-m. Requires 1 <= m <= n-1.
/// Throws WindowTooLarge or TiedSpacings (index j, 1-based).
VarextropyEstimate vjv(const Sample& s, std::size_t m);

/// Kernel plug-in (1/4)[int f^3 - (int f^2)^2] on `grid`.
///
/// Without a support floor the discretised density is rescaled to unit
/// quadrature mass, which makes the result a discrete variance. With a
/// floor the truncated integrals are used as they stand. Throws
/// GridTooNarrow if more than 1e-3 of the kernel mass inside the support
/// misses the grid.
VarextropyEstimate vjd(const Sample& s, double h, const GridSpec& grid);

/// Resubstitution estimator over leave-one-out densities at the
/// observations. `h` fixes the leave-one-out bandwidth; by default each
/// point uses the Silverman bandwidth of its retained sample.
VarextropyEstimate vjb(const Sample& s, std::optional<double> h = std::nullopt);

/// Quantile-density plug-in (1/4)[int du/q^2 - (int du/q)^2] with a
/// midpoint rule on `u_points` interior nodes.
VarextropyEstimate vjs(const Sample& s, const QuantileDensityOptions& options = {},
                       std::size_t u_points = 1024);

/// Centred-window estimator with c_i boundary weights and clamped order
/// statistics. Requires 1 <= m < n/2.
VarextropyEstimate vjq(const Sample& s, std::size_t m);

/// Dispatch with defaults: m = default_window(n), h = Silverman, grids per
/// `options`.
VarextropyEstimate estimate(EstimatorId id, const Sample& s,
                            const EstimatorOptions& options = {});

/// (1/4) * population variance of `values`; exactly 0 for constant input.
double quarter_variance(std::span<const double> values) noexcept;

}  // namespace varext
