#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "varext/distributions.hpp"
#include "varext/estimators.hpp"
#include "varext/sample.hpp"

namespace varext {

/// Uniformity test statistics. GV..GQ are the varextropy estimators applied
/// to data on [0, 1]; KS and the T* family are the competitors.
enum class StatKind { GV, GD, GB, GS, GQ, KS, TV, TE, TD, TB, TC, TA };

inline constexpr std::array<StatKind, 5> kGStatistics = {
    StatKind::GV, StatKind::GD, StatKind::GB, StatKind::GS, StatKind::GQ};
inline constexpr std::array<StatKind, 7> kCompetitorStatistics = {
    StatKind::TV, StatKind::TE, StatKind::TD, StatKind::TB,
    StatKind::TC, StatKind::TA, StatKind::KS};

std::string_view to_string(StatKind kind) noexcept;
/// Case-insensitive. Throws InvalidArgument listing the accepted names.
StatKind parse_stat_kind(std::string_view text);
/// Comma-separated list; "G" expands to GV..GQ, "T" to the competitors, "all"
/// to both.
std::vector<StatKind> parse_stat_kinds(std::string_view text);

bool is_g_statistic(StatKind kind) noexcept;
/// Estimator behind a G statistic. Throws InvalidArgument otherwise.
EstimatorId estimator_for(StatKind kind);

/// Options used for G statistics unless overridden: default windows and
/// bandwidths with the nonnegative conventions, since the data live on [0,1].
EstimatorOptions unit_interval_options();

/// Throws OutOfUnitInterval (with the 1-based order index) unless every
/// observation lies in [0, 1].
void require_unit_interval(const Sample& s);

double g_statistic(StatKind kind, const Sample& s,
                   const EstimatorOptions& options = unit_interval_options());

/// sup |F_n - F| against U(0, 1).
double ks_statistic(const Sample& s);

/// TV, TE, TD, TB, TC or TA. `window` and `bandwidth` in `options` override
/// the defaults; conventions are ignored (these integrate over the full
/// default grid).
double competitor_statistic(StatKind kind, const Sample& s,
                            const EstimatorOptions& options = {});

/// Any statistic; G statistics use `options` as given.
double statistic(StatKind kind, const Sample& s,
                 const EstimatorOptions& options = unit_interval_options());

// ---------------------------------------------------------------------------
// Critical values

/// Monte Carlo percentage points of one statistic at one level.
struct CriticalValueTable {
  StatKind kind = StatKind::GV;
  double alpha = 0.05;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::map<std::size_t, double> entries;  // n -> C_{1-alpha}

  std::optional<double> at(std::size_t n) const;
};

/// Reads every table in a versioned critical-value file. Rows for the same
/// (kind, alpha, reps, seed) are merged. Throws ParseError with line numbers.
std::vector<CriticalValueTable> read_critical_tables(std::istream& in);
std::vector<CriticalValueTable> load_critical_tables(const std::string& path);
void write_critical_tables(std::ostream& out, std::span<const CriticalValueTable> tables);
void save_critical_tables(const std::string& path, std::span<const CriticalValueTable> tables);

/// First table for (kind, alpha) holding an entry for n, if any.
const CriticalValueTable* find_critical_table(std::span<const CriticalValueTable> tables,
                                              StatKind kind, double alpha, std::size_t n);

/// The ceil((1 - alpha) * count)-th smallest value; a relative guard of
/// 1e-9 keeps products such as 0.95 * 100000 from rounding up a rank.
/// Throws InvalidArgument for empty input or alpha outside (0, 1).
double empirical_upper_quantile(std::vector<double> values, double alpha);

struct CalibrationResult {
  StatKind kind = StatKind::GV;
  std::size_t n = 0;
  double critical_value = 0.0;
  /// Replicates redrawn because the uniform sample contained ties.
  std::size_t redraws = 0;
};

struct CalibrationOptions {
  std::size_t reps = 100000;
  std::uint64_t seed = 1;
  std::size_t workers = 0;  // 0 = hardware concurrency
  EstimatorOptions estimator = unit_interval_options();
};

/// Simulates null statistics for every kind on shared U(0, 1)^n replicates.
/// Replicate r draws from rng_substream(seed, r), so the result does not
/// depend on the worker count. Requires reps >= 1000 and alpha in (0, 1).
std::vector<CalibrationResult> calibrate_critical_values(std::span<const StatKind> kinds,
                                                         std::size_t n, double alpha,
                                                         const CalibrationOptions& options);

CalibrationResult calibrate_critical_value(StatKind kind, std::size_t n, double alpha,
                                           std::size_t reps, std::uint64_t seed,
                                           std::size_t workers = 0);

/// Raw null statistics, one row per replicate and one column per kind.
/// Shares the replicate construction of calibrate_critical_values without
/// the reps lower bound.
std::vector<std::vector<double>> simulate_null_statistics(std::span<const StatKind> kinds,
                                                          std::size_t n,
                                                          const CalibrationOptions& options,
                                                          std::size_t* redraws = nullptr);

// ---------------------------------------------------------------------------
// Decisions

struct TestOutcome {
  StatKind kind = StatKind::GV;
  double statistic = 0.0;
  double critical_value = 0.0;
  double alpha = 0.05;
  bool reject = false;
};

/// Rejects iff statistic >= C. Throws MissingCriticalValue unless the table
/// has an entry for exactly n.
TestOutcome run_test(StatKind kind, const Sample& s, const CriticalValueTable& table,
                     const EstimatorOptions& options = unit_interval_options());

// ---------------------------------------------------------------------------
// Composite nulls

/// U_i = F0(X_i), sorted. Values that map to exactly 0 or 1 are pulled to
/// 1e-12 or 1 - 1e-12. Throws DomainError naming the offending value.
Sample probability_integral_transform(std::span<const double> values,
                                      const ReferenceDistribution& model);

/// Maximum-likelihood fit for Normal (sd with divisor n-1, matching the
/// usual sample estimate), Exponential and the A distribution. The fixed
/// families are returned as they are after a support check.
/// Throws DomainError, ZeroVariance, NoConvergence or UnsupportedFamily.
ReferenceDistribution fit_model(Family family, std::span<const double> values);

/// Log-likelihood of the A distribution at beta.
double a_distribution_log_likelihood(double beta, std::span<const double> values);

}  // namespace varext
