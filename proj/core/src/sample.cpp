#include "varext/sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varext/error.hpp"

namespace varext {

Sample Sample::make(std::vector<double> values) {
  if (values.size() < 2) {
    throw Error(ErrorKind::EmptyOrSingleton,
                "a sample needs at least 2 observations, got " +
                    std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::NonFiniteValue,
                  "observation at index " + std::to_string(i) + " is not finite",
                  i);
    }
  }
  std::sort(values.begin(), values.end());
  return Sample(std::move(values));
}

Sample::Sample(std::vector<double> sorted) : values_(std::move(sorted)) {
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] == values_[i - 1]) ++tie_count_;
  }
}

double order_statistic_clamped(const Sample& s, long i) noexcept {
  const long n = static_cast<long>(s.size());
  const long k = std::clamp(i, 1L, n);
  return s.values()[static_cast<std::size_t>(k - 1)];
}

double empirical_cdf(const Sample& s, double x) noexcept {
  const auto v = s.values();
  const auto count = std::upper_bound(v.begin(), v.end(), x) - v.begin();
  return static_cast<double>(count) / static_cast<double>(v.size());
}

std::size_t max_window(std::size_t n, WindowKind kind) noexcept {
  if (kind == WindowKind::OneSided) return n > 1 ? n - 1 : 0;
  // largest m with 2m < n, i.e. ceil(n/2) - 1
  return n > 2 ? (n + 1) / 2 - 1 : 0;
}

std::size_t default_window(std::size_t n, WindowKind kind) {
  const std::size_t cap = max_window(n, kind);
  if (cap == 0) {
    throw Error(ErrorKind::TooFewPoints,
                "no admissible window for n=" + std::to_string(n));
  }
  const auto raw = static_cast<std::size_t>(
      std::floor(std::sqrt(static_cast<double>(n)) + 0.5));
  return std::clamp<std::size_t>(raw, 1, cap);
}

double c_weight(std::size_t n, std::size_t m, std::size_t i) {
  if (m == 0 || 2 * m >= n) {
    throw Error(ErrorKind::WindowTooLarge,
                "window m=" + std::to_string(m) + " must satisfy 1 <= m < n/2 (n=" +
                    std::to_string(n) + ")");
  }
  if (i < 1 || i > n) {
    throw Error(ErrorKind::IndexOutOfRange,
                "index " + std::to_string(i) + " outside [1, " + std::to_string(n) + "]",
                i);
  }
  const double md = static_cast<double>(m);
  if (i <= m) return 1.0 + static_cast<double>(i - 1) / md;
  if (i <= n - m) return 2.0;
  return 1.0 + static_cast<double>(n - i) / md;
}

double sample_std(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw Error(ErrorKind::EmptyOrSingleton, "standard deviation needs n >= 2");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    throw Error(ErrorKind::ZeroVariance, "all observations are equal");
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) {
    throw Error(ErrorKind::ZeroVariance, "all observations are equal");
  }
  return sd;
}

}  // namespace varext
