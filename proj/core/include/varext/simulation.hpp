#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "varext/distributions.hpp"
#include "varext/estimators.hpp"
#include "varext/rng.hpp"
#include "varext/sample.hpp"
#include "varext/uniformity.hpp"

namespace varext {

enum class AltKind { A, B, C };

/// Alternatives on [0, 1] for power studies.
///   A_k: F(x) = 1 - (1-x)^k
///   B_k: F(x) = 2^(k-1) x^k below 1/2, mirrored above
///   C_k: F(x) = 1/2 - 2^(k-1) (1/2 - x)^k below 1/2, mirrored above
struct AlternativeFamily {
  AltKind kind = AltKind::A;
  double k = 2.0;

  /// Throws DomainError unless k > 0.
  void validate() const;
  /// True for the usual grid: A and C with k in {1.5, 2}, B with k in {1.5, 2, 3}.
  bool is_standard() const noexcept;
  double cdf(double x) const noexcept;
  /// "A2", "B1.5", ...
  std::string name() const;
};

/// Parses names such as "A2" or "B1.5". Throws ConfigError.
AlternativeFamily parse_alternative(std::string_view text);

/// Closed-form inverse of the alternative's CDF on [0, 1].
double inverse_cdf_alternative(const AlternativeFamily& fam, double u) noexcept;

/// n inverse-CDF draws.
Sample sample_alternative(const AlternativeFamily& fam, std::size_t n, Substream& rng);

/// Anything a study can draw replicates from.
using DataSource = std::variant<ReferenceDistribution, AlternativeFamily>;

std::string source_name(const DataSource& source);
/// Alternative names first ("A2"), then reference distributions ("Exp1",
/// "A(125.662)", ...). Throws ConfigError.
DataSource parse_data_source(const std::string& text);

/// n raw draws. Uniform and exponential laws use the inverse CDF, Gamma(2,1)
/// the sum of two exponential draws, so every draw consumes a fixed number of
/// stream values.
std::vector<double> draw(const DataSource& source, std::size_t n, Substream& rng);

// ---------------------------------------------------------------------------

enum class StudyKind { Mse, Power, Critical };

std::string_view to_string(StudyKind kind) noexcept;
/// "mse", "power" or "critical". Throws ConfigError.
StudyKind parse_study_kind(std::string_view text);

struct StudyConfig {
  StudyKind kind = StudyKind::Mse;
  std::vector<EstimatorId> estimators;  // mse studies
  std::vector<StatKind> statistics;     // power and critical studies
  std::vector<std::size_t> sample_sizes;
  std::vector<DataSource> distributions;
  std::size_t reps = 10000;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  std::size_t workers = 0;
  EstimatorOptions estimator = unit_interval_options();
  /// Replicates for critical values that a power study calibrates itself.
  std::size_t calibration_reps = 100000;
  std::optional<std::uint64_t> calibration_seed;  // defaults to seed
  /// Key/value lines as given, echoed verbatim in reports.
  std::vector<std::pair<std::string, std::string>> echo;

  /// Throws ConfigError.
  void validate() const;
};

struct StudyCell {
  std::string kind;
  std::size_t n = 0;
  std::string distribution;
  std::string metric;  // bias, mse, power or critical
  double value = 0.0;
  double mc_se = 0.0;
};

struct StudyReport {
  StudyConfig config;
  std::vector<StudyCell> cells;
  /// Replicates redrawn because of floating-point ties.
  std::size_t redraws = 0;
};

/// Bias and MSE against analytic_varextropy for every (estimator, n,
/// distribution). Replicates are shared across estimators.
StudyReport mse_bias_study(const StudyConfig& cfg);

/// Rejection rates with critical values from `tables`; a missing entry
/// throws MissingCriticalValue.
StudyReport power_study(const StudyConfig& cfg, std::span<const CriticalValueTable> tables);

/// Calibrates the critical values a power study needs, with
/// cfg.calibration_reps and cfg.calibration_seed.
std::vector<CriticalValueTable> calibrate_for(const StudyConfig& cfg);

/// Percentage points over the (statistic, n) grid.
StudyReport critical_value_study(const StudyConfig& cfg);

/// Runs the study the config describes; power studies calibrate first.
StudyReport run_study(const StudyConfig& cfg);

/// Critical values of a critical study as tables, one per statistic.
std::vector<CriticalValueTable> critical_tables_from(const StudyReport& report);

/// Reference-grid presets "table1" .. "table6". Throws ConfigError listing the
/// known names.
StudyConfig preset(std::string_view name);
std::span<const std::string_view> preset_names() noexcept;

/// Applies key = value settings on top of `base`. Recognised keys: preset,
/// study, estimators, statistics, sizes, distributions, reps, seed, alpha,
/// workers, conventions, calibration_reps, calibration_seed, grid_points.
/// Every pair is appended to the echo. Throws ConfigError.
StudyConfig apply_settings(StudyConfig base,
                           std::span<const std::pair<std::string, std::string>> settings);

}  // namespace varext
