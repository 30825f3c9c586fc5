#pragma once

#include <string>

namespace varext {

enum class Family {
  Uniform01,
  ExponentialMean1,
  Gamma_2_1,
  ADistribution,  // F(x) = exp((1/beta)(1 - exp(beta/x))), x > 0
  Normal,
  Exponential,    // rate parameterisation
  Uniform,        // on [p1, p2]
};

/// A continuous reference law. Parameter meaning depends on the family:
///   Normal: p1 = mean, p2 = sd;  Exponential: p1 = rate;
///   ADistribution: p1 = beta;    Uniform: [p1, p2];
///   the fixed families ignore both.
struct ReferenceDistribution {
  Family family = Family::Uniform01;
  double p1 = 0.0;
  double p2 = 0.0;

  static ReferenceDistribution uniform01() { return {Family::Uniform01}; }
  static ReferenceDistribution exponential_mean1() { return {Family::ExponentialMean1}; }
  static ReferenceDistribution gamma_2_1() { return {Family::Gamma_2_1}; }
  static ReferenceDistribution a_distribution(double beta) {
    return {Family::ADistribution, beta};
  }
  static ReferenceDistribution normal(double mean, double sd) {
    return {Family::Normal, mean, sd};
  }
  static ReferenceDistribution exponential(double rate) {
    return {Family::Exponential, rate};
  }
  static ReferenceDistribution uniform(double lo, double hi) {
    return {Family::Uniform, lo, hi};
  }

  /// Throws DomainError if the parameters are outside the family's domain.
  void validate() const;

  double pdf(double x) const;
  /// Throws DomainError for x outside the support when the CDF is not
  /// defined there (A distribution at x <= 0).
  double cdf(double x) const;
  /// Quantile function; closed form for every family except Gamma(2,1),
  /// which is inverted numerically.
  double quantile(double u) const;

  double support_lower() const;

  /// Short stable identifier, e.g. "Exp1", "Normal(0,1)".
  std::string name() const;
};

/// Parses the names produced by ReferenceDistribution::name(), plus the
/// aliases "uniform", "exp", "gamma". Throws ConfigError.
ReferenceDistribution parse_reference_distribution(const std::string& text);

/// VJ = (1/4)[int f^3 - (int f^2)^2]. Closed forms for the uniform,
/// exponential, gamma(2,1) and normal families; the A distribution is
/// integrated numerically over its quantile representation.
double analytic_varextropy(const ReferenceDistribution& d);

}  // namespace varext
