#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace varext {

/// Validated observation vector kept in ascending order.
///
/// Construction rejects fewer than two values and any non-finite entry.
/// Ties are recorded rather than rejected; spacing estimators refuse them
/// later if they land on a zero-width window.
class Sample {
 public:
  /// Sorts a copy of `values`. Throws EmptyOrSingleton or NonFiniteValue
  /// (the latter carries the offending input index).
  static Sample make(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool has_ties() const noexcept { return tie_count_ > 0; }
  /// Number of adjacent sorted pairs that compare equal.
  std::size_t tie_count() const noexcept { return tie_count_; }

  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }

  /// 1-based order statistic without clamping; i must lie in [1, n].
  double operator()(std::size_t i) const noexcept { return values_[i - 1]; }

 private:
  explicit Sample(std::vector<double> sorted);

  std::vector<double> values_;
  std::size_t tie_count_ = 0;
};

inline Sample make_sample(std::vector<double> values) {
  return Sample::make(std::move(values));
}

/// X_(i) for 1 <= i <= n, X_(1) below the range and X_(n) above it.
double order_statistic_clamped(const Sample& s, long i) noexcept;

/// Right-continuous empirical CDF: (1/n) #{X_i <= x}.
double empirical_cdf(const Sample& s, double x) noexcept;

enum class WindowKind {
  OneSided,  // forward spacings X_(j+m) - X_(j): 1 <= m <= n-1
  TwoSided,  // centred windows X_(i+m) - X_(i-m): 1 <= m < n/2
};

/// floor(sqrt(n) + 0.5), clipped to the largest admissible window for
/// `kind`. Requires n >= 2 (n >= 3 for two-sided windows).
std::size_t default_window(std::size_t n, WindowKind kind = WindowKind::TwoSided);

/// Largest admissible m for the given window kind.
std::size_t max_window(std::size_t n, WindowKind kind) noexcept;

/// Boundary weight c_i for centred windows with clamped order statistics.
/// Throws IndexOutOfRange unless 1 <= i <= n, WindowTooLarge unless
/// 1 <= m < n/2.
double c_weight(std::size_t n, std::size_t m, std::size_t i);

/// Standard deviation with divisor n-1. Throws ZeroVariance when all
/// values coincide.
double sample_std(std::span<const double> values);
inline double sample_std(const Sample& s) { return sample_std(s.values()); }

}  // namespace varext
