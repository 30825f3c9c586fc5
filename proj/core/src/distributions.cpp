#include "varext/distributions.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "varext/error.hpp"

namespace varext {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// A distribution: Q(u) = beta / log(1 - beta log u)
double a_quantile(double beta, double u) { return beta / std::log1p(-beta * std::log(u)); }

// f(Q(u)) = u (1 - beta log u) / Q(u)^2
double a_density_at_quantile(double beta, double u) {
  const double x = a_quantile(beta, u);
  return u * (1.0 - beta * std::log(u)) / (x * x);
}

}  // namespace

void ReferenceDistribution::validate() const {
  switch (family) {
    case Family::Normal:
      if (!(p2 > 0.0) || !std::isfinite(p1) || !std::isfinite(p2)) {
        throw Error(ErrorKind::DomainError, "normal sd must be positive");
      }
      break;
    case Family::Exponential:
      if (!(p1 > 0.0) || !std::isfinite(p1)) {
        throw Error(ErrorKind::DomainError, "exponential rate must be positive");
      }
      break;
    case Family::ADistribution:
      if (!(p1 > 0.0) || !std::isfinite(p1)) {
        throw Error(ErrorKind::DomainError, "A-distribution beta must be positive");
      }
      break;
    case Family::Uniform:
      if (!(p2 > p1) || !std::isfinite(p1) || !std::isfinite(p2)) {
        throw Error(ErrorKind::DomainError, "uniform bounds must satisfy lo < hi");
      }
      break;
    default:
      break;
  }
}

double ReferenceDistribution::pdf(double x) const {
  switch (family) {
    case Family::Uniform01: return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    case Family::Uniform: return (x >= p1 && x <= p2) ? 1.0 / (p2 - p1) : 0.0;
    case Family::ExponentialMean1: return x >= 0.0 ? std::exp(-x) : 0.0;
    case Family::Gamma_2_1: return x >= 0.0 ? x * std::exp(-x) : 0.0;
    case Family::Exponential: return x >= 0.0 ? p1 * std::exp(-p1 * x) : 0.0;
    case Family::Normal: {
      const double z = (x - p1) / p2;
      return std::exp(-0.5 * z * z) / (p2 * std::sqrt(2.0 * std::numbers::pi));
    }
    case Family::ADistribution: {
      if (x <= 0.0) return 0.0;
      const double e = std::exp(p1 / x);
      if (!std::isfinite(e)) return 0.0;
      return std::exp((1.0 - e) / p1) * e / (x * x);
    }
  }
  return 0.0;
}

double ReferenceDistribution::cdf(double x) const {
  switch (family) {
    case Family::Uniform01: return std::clamp(x, 0.0, 1.0);
    case Family::Uniform: return std::clamp((x - p1) / (p2 - p1), 0.0, 1.0);
    case Family::ExponentialMean1: return x > 0.0 ? -std::expm1(-x) : 0.0;
    case Family::Gamma_2_1: return x > 0.0 ? boost::math::gamma_p(2.0, x) : 0.0;
    case Family::Exponential: return x > 0.0 ? -std::expm1(-p1 * x) : 0.0;
    case Family::Normal: return 0.5 * std::erfc(-(x - p1) / (p2 * std::numbers::sqrt2));
    case Family::ADistribution: {
      if (!(x > 0.0)) {
        throw Error(ErrorKind::DomainError,
                    "A-distribution CDF needs x > 0, got " + fmt(x));
      }
      return std::exp(-std::expm1(p1 / x) / p1);
    }
  }
  return 0.0;
}

double ReferenceDistribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw Error(ErrorKind::DomainError, "quantile level outside [0,1]: " + fmt(u));
  }
  switch (family) {
    case Family::Uniform01: return u;
    case Family::Uniform: return p1 + u * (p2 - p1);
    case Family::ExponentialMean1: return -std::log1p(-u);
    case Family::Exponential: return -std::log1p(-u) / p1;
    case Family::Gamma_2_1:
      if (u == 0.0) return 0.0;
      if (u == 1.0) return INFINITY;
      return boost::math::gamma_p_inv(2.0, u);
    case Family::Normal:
      if (u == 0.0) return -INFINITY;
      if (u == 1.0) return INFINITY;
      return boost::math::quantile(boost::math::normal_distribution<double>(p1, p2), u);
    case Family::ADistribution:
      if (u == 0.0) return 0.0;
      if (u == 1.0) return INFINITY;
      return a_quantile(p1, u);
  }
  return 0.0;
}

double ReferenceDistribution::support_lower() const {
  if (family == Family::Uniform) return p1;
  return family == Family::Normal ? -INFINITY : 0.0;
}

std::string ReferenceDistribution::name() const {
  switch (family) {
    case Family::Uniform01: return "U01";
    case Family::ExponentialMean1: return "Exp1";
    case Family::Gamma_2_1: return "Gamma21";
    case Family::ADistribution: return "A(" + fmt(p1) + ")";
    case Family::Normal: return "Normal(" + fmt(p1) + "," + fmt(p2) + ")";
    case Family::Exponential: return "Exponential(" + fmt(p1) + ")";
    case Family::Uniform: return "Uniform(" + fmt(p1) + "," + fmt(p2) + ")";
  }
  return "?";
}

ReferenceDistribution parse_reference_distribution(const std::string& text) {
  auto args = [&](std::size_t open) {
    const auto close = text.rfind(')');
    if (close == std::string::npos || close < open) {
      throw Error(ErrorKind::ConfigError, "malformed distribution '" + text + "'");
    }
    std::vector<double> out;
    std::stringstream ss(text.substr(open + 1, close - open - 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
      } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigError, "bad parameter in '" + text + "'");
      }
    }
    return out;
  };
  if (text == "U01" || text == "uniform") return ReferenceDistribution::uniform01();
  if (text == "Exp1" || text == "exp") return ReferenceDistribution::exponential_mean1();
  if (text == "Gamma21" || text == "gamma") return ReferenceDistribution::gamma_2_1();
  ReferenceDistribution d;
  if (text.rfind("Normal(", 0) == 0) {
    const auto a = args(6);
    if (a.size() != 2) throw Error(ErrorKind::ConfigError, "Normal needs (mean,sd)");
    d = ReferenceDistribution::normal(a[0], a[1]);
  } else if (text.rfind("Exponential(", 0) == 0) {
    const auto a = args(11);
    if (a.size() != 1) throw Error(ErrorKind::ConfigError, "Exponential needs (rate)");
    d = ReferenceDistribution::exponential(a[0]);
  } else if (text.rfind("Uniform(", 0) == 0) {
    const auto a = args(7);
    if (a.size() != 2) throw Error(ErrorKind::ConfigError, "Uniform needs (lo,hi)");
    d = ReferenceDistribution::uniform(a[0], a[1]);
  } else if (text.rfind("A(", 0) == 0) {
    const auto a = args(1);
    if (a.size() != 1) throw Error(ErrorKind::ConfigError, "A needs (beta)");
    d = ReferenceDistribution::a_distribution(a[0]);
  } else {
    throw Error(ErrorKind::ConfigError, "unknown distribution '" + text + "'");
  }
  try {
    d.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  return d;
}

double analytic_varextropy(const ReferenceDistribution& d) {
  d.validate();
  switch (d.family) {
    case Family::Uniform01:
    case Family::Uniform: return 0.0;
    case Family::ExponentialMean1: return 1.0 / 48.0;
    case Family::Gamma_2_1: return 5.0 / 1728.0;
    case Family::Exponential: return d.p1 * d.p1 / 48.0;
    case Family::Normal: {
      // int f^2 = 1/(2 sd sqrt(pi)), int f^3 = 1/(2 sqrt(3) pi sd^2)
      const double s2 = d.p2 * d.p2;
      const double f3 = 1.0 / (2.0 * std::sqrt(3.0) * std::numbers::pi * s2);
      const double f2 = 1.0 / (2.0 * d.p2 * std::sqrt(std::numbers::pi));
      return 0.25 * (f3 - f2 * f2);
    }
    case Family::ADistribution: {
      // int f^k dx = int_0^1 f(Q(u))^(k-1) du
      boost::math::quadrature::tanh_sinh<double> integrator;
      const double beta = d.p1;
      const double m1 = integrator.integrate(
          [beta](double u) { return a_density_at_quantile(beta, u); }, 0.0, 1.0);
      const double m2 = integrator.integrate(
          [beta](double u) {
            const double f = a_density_at_quantile(beta, u);
            return f * f;
          },
          0.0, 1.0);
      return 0.25 * (m2 - m1 * m1);
    }
  }
  throw Error(ErrorKind::UnsupportedFamily, "no varextropy oracle for " + d.name());
}

}  // namespace varext
