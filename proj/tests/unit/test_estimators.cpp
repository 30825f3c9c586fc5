#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "varext/error.hpp"
#include "varext/estimators.hpp"
#include "varext/uniformity.hpp"

using namespace varext;

namespace {

// Term-by-term reference evaluations in long double.
long double oracle_vjv(std::vector<double> x, std::size_t m) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  long double s1 = 0, s2 = 0;
  for (std::size_t j = 1; j + m <= n; ++j) {
    const long double t = (static_cast<long double>(m) / (n + 1)) / (x[j + m - 1] - x[j - 1]);
    s1 += t;
    s2 += t * t;
  }
  const long double k = static_cast<long double>(n - m);
  return 0.25L * (s2 / k - (s1 / k) * (s1 / k));
}

long double oracle_vjq(std::vector<double> x, std::size_t m) {
  std::sort(x.begin(), x.end());
  const long n = static_cast<long>(x.size());
  const long mm = static_cast<long>(m);
  auto X = [&](long i) { return static_cast<long double>(x[std::clamp(i, 1L, n) - 1]); };
  long double s1 = 0, s2 = 0;
  for (long i = 1; i <= n; ++i) {
    long double c;
    if (i <= mm) {
      c = 1.0L + static_cast<long double>(i - 1) / mm;
    } else if (i <= n - mm) {
      c = 2.0L;
    } else {
      c = 1.0L + static_cast<long double>(n - i) / mm;
    }
    const long double t = c * mm / n / (X(i + mm) - X(i - mm));
    s1 += t;
    s2 += t * t;
  }
  return 0.25L * (s2 / n - (s1 / n) * (s1 / n));
}

const std::vector<std::vector<double>> kSmallFixtures = {
    {0.0, 0.2, 1.0},
    {0.1, 0.4, 0.45, 0.9},
    {3.0, -1.0, 2.5, 0.25, 7.0},
    {0.05, 0.11, 0.37, 0.52, 0.8, 0.99},
    {1.0, 2.0, 4.0, 8.0, 16.0, 32.0},
    {0.25, 0.5, 0.75},
};

const std::vector<double> kLizardU = {0.9804, 0.8326, 0.9408, 0.6620, 0.6056, 0.3715, 0.8562,
                                      0.5864, 0.5670, 0.3530, 0.5864, 0.1419, 0.3530, 0.5475,
                                      0.5081, 0.4884, 0.4289, 0.1205, 0.0091, 0.1205};

}  // namespace

TEST(Estimators, VjvHandExample) {
  // t = (1/4)/0.2, (1/4)/0.8 -> T' = 0.830078125, T'' = 0.78125
  const auto e = vjv(make_sample({0.0, 0.2, 1.0}), 1);
  EXPECT_NEAR(e.value, 0.25 * (0.830078125 - 0.78125 * 0.78125), 1e-15);
  EXPECT_NEAR(e.value, 0.0549316, 1e-7);
  EXPECT_EQ(vjv(make_sample({0.25, 0.5, 0.75}), 1).value, 0.0);
}

TEST(Estimators, SmallInstanceOracles) {
  for (const auto& x : kSmallFixtures) {
    const Sample s = make_sample(x);
    for (std::size_t m = 1; m < x.size(); ++m) {
      EXPECT_NEAR(vjv(s, m).value, static_cast<double>(oracle_vjv(x, m)), 1e-12);
    }
    for (std::size_t m = 1; 2 * m < x.size(); ++m) {
      EXPECT_NEAR(vjq(s, m).value, static_cast<double>(oracle_vjq(x, m)), 1e-12);
    }
  }
}

TEST(Estimators, WindowAndTieErrors) {
  const Sample s = make_sample({0.1, 0.2, 0.3, 0.4});
  EXPECT_THROW(vjv(s, 0), Error);
  EXPECT_THROW(vjv(s, 4), Error);
  EXPECT_THROW(vjq(s, 2), Error);
  try {
    vjv(make_sample({0.1, 0.3, 0.3, 0.9}), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TiedSpacings);
    EXPECT_EQ(e.index(), 2u);
    EXPECT_TRUE(is_numerical(e.kind()));
  }
  // a tie inside a wider window is harmless
  EXPECT_NO_THROW(vjv(make_sample({0.1, 0.3, 0.3, 0.9}), 2));
}

TEST(Estimators, GoldenLizardTransformed) {
  const Sample s = make_sample(kLizardU);
  const EstimatorOptions o = unit_interval_options();
  EXPECT_NEAR(estimate(EstimatorId::VJV, s, o).value, 0.1453019, 5e-8);
  EXPECT_NEAR(estimate(EstimatorId::VJD, s, o).value, 0.03378436, 1e-7);
  EXPECT_NEAR(estimate(EstimatorId::VJB, s, o).value, 0.02535139, 5e-9);
  EXPECT_NEAR(estimate(EstimatorId::VJS, s, o).value, 0.002548617, 1e-7);
  EXPECT_NEAR(estimate(EstimatorId::VJQ, s, o).value, 0.03390633, 5e-9);
}

TEST(Estimators, EquispacedGridIsFlat) {
  std::vector<double> x;
  for (int i = 1; i <= 30; ++i) x.push_back(i / 31.0);
  const Sample s = make_sample(x);
  EXPECT_NEAR(vjv(s, 5).value, 0.0, 1e-15);
  EXPECT_GT(vjq(s, 5).value, 0.0);  // boundary weights break the symmetry only slightly
  EXPECT_LT(vjq(s, 5).value, 1e-2);
}

TEST(Estimators, Equivariance) {
  std::mt19937_64 g(42);
  std::gamma_distribution<double> gam(2.0, 1.0);
  std::vector<double> x(40);
  for (auto& v : x) v = gam(g);
  const Sample s = make_sample(x);
  const double a = 2.5, c = -7.0;
  std::vector<double> shifted(x), scaled(x);
  for (auto& v : shifted) v += c;
  for (auto& v : scaled) v *= a;
  const Sample ss = make_sample(shifted), sc = make_sample(scaled);
  for (auto id : {EstimatorId::VJV, EstimatorId::VJD, EstimatorId::VJB, EstimatorId::VJS,
                  EstimatorId::VJQ}) {
    const double base = estimate(id, s).value;
    EXPECT_NEAR(estimate(id, ss).value, base, 1e-9 * base) << to_string(id);
    EXPECT_NEAR(estimate(id, sc).value, base / (a * a), 1e-6 * base) << to_string(id);
  }
}

TEST(Estimators, VjdNonnegativeAndGridCheck) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u;
  for (int r = 0; r < 200; ++r) {
    std::vector<double> x(3 + r % 20);
    for (auto& v : x) v = u(g);
    const Sample s = make_sample(x);
    EXPECT_GE(estimate(EstimatorId::VJD, s).value, 0.0);
    EXPECT_GE(estimate(EstimatorId::VJS, s).value, 0.0);
  }
  const Sample s = make_sample({0.0, 1.0, 2.0, 3.0});
  const double h = silverman_bandwidth(s);
  EXPECT_THROW(vjd(s, h, GridSpec{0.5, 2.5, 512}), Error);
}

TEST(Estimators, VjbFixedBandwidthMatchesDirectSum) {
  const std::vector<double> x = {0.1, 0.35, 0.4, 0.62, 0.9};
  const double h = 0.2;
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j != i) s += std::exp(-0.5 * std::pow((x[i] - x[j]) / h, 2)) / std::sqrt(2 * M_PI);
    }
    d.push_back(s / ((x.size() - 1) * h));
  }
  EXPECT_NEAR(vjb(make_sample(x), h).value, quarter_variance(d), 1e-15);
}

TEST(Estimators, Parsing) {
  EXPECT_EQ(parse_estimator_id("vjq"), EstimatorId::VJQ);
  EXPECT_THROW(parse_estimator_id("VJX"), Error);
  EXPECT_EQ(parse_conventions("nonnegative").name(), "nonnegative");
  EXPECT_EQ(Conventions::equivariant().name(), "equivariant");
  EXPECT_THROW(parse_conventions("legacy"), Error);
}
