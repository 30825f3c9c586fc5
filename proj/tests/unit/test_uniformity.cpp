#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "varext/dataset.hpp"
#include "varext/error.hpp"
#include "varext/estimators.hpp"
#include "varext/rng.hpp"
#include "varext/uniformity.hpp"

using namespace varext;

namespace {

std::vector<double> data_file(const char* name) {
  return load_dataset(std::string(VAREXT_DATA_DIR) + "/" + name);
}

double oracle_ks(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  // sup over a fine grid plus the jump points themselves
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, std::abs((i + 1) / n - u[i]));
    d = std::max(d, std::abs(u[i] - i / n));
  }
  return d;
}

double var(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= v.size();
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / v.size();
}

double at(const std::vector<double>& x, long i) {
  return x[std::clamp<long>(i, 1, static_cast<long>(x.size())) - 1];
}

double oracle_tc(std::vector<double> x, long m) {
  std::sort(x.begin(), x.end());
  const long n = static_cast<long>(x.size());
  std::vector<double> v;
  for (long i = 1; i <= n; ++i) {
    double mean = 0;
    for (long j = i - m; j <= i + m; ++j) mean += at(x, j);
    mean /= 2 * m + 1;
    double num = 0, den = 0;
    for (long j = i - m; j <= i + m; ++j) {
      num += (at(x, j) - mean) * (j - i);
      den += (at(x, j) - mean) * (at(x, j) - mean);
    }
    v.push_back(std::log(num / (n * den)));
  }
  return var(v);
}

double oracle_ta(std::vector<double> x, long m, double h) {
  std::sort(x.begin(), x.end());
  const long n = static_cast<long>(x.size());
  auto f = [&](double t) {
    double s = 0;
    for (double xi : x) s += std::exp(-0.5 * (t - xi) * (t - xi) / (h * h));
    return s / (n * h * std::sqrt(2 * std::numbers::pi));
  };
  std::vector<double> v;
  for (long i = 1; i <= n; ++i) v.push_back(std::log(f(at(x, i + m)) + f(at(x, i - m))));
  return var(v);
}

const std::vector<double> kU = {0.03, 0.12, 0.2, 0.41, 0.44, 0.58, 0.73, 0.9, 0.97};

}  // namespace

TEST(Statistics, KsAgainstOracle) {
  EXPECT_NEAR(ks_statistic(make_sample({0.25, 0.5, 0.75})), 0.25, 1e-15);
  EXPECT_NEAR(ks_statistic(make_sample({0.9, 0.95})), 0.9, 1e-15);
  EXPECT_NEAR(ks_statistic(make_sample(kU)), oracle_ks(kU), 1e-15);
  EXPECT_NEAR(ks_statistic(make_sample({0.1, 0.2, 0.3, 0.5, 0.7})), oracle_ks({0.1, 0.2, 0.3, 0.5, 0.7}), 1e-15);
}

TEST(Statistics, SpacingStatisticsOnEquispacedData) {
  std::vector<double> x;
  for (int i = 1; i <= 5; ++i) x.push_back(i / 6.0);
  EstimatorOptions o;
  o.window = 1;
  // every term of TE equals log(1.2 * 1/5 / (2/6)) ... after clamping the weights
  // make all terms equal, so the variance vanishes
  EXPECT_NEAR(competitor_statistic(StatKind::TE, make_sample(x), o), 0.0, 1e-24);
  EXPECT_GT(competitor_statistic(StatKind::TV, make_sample(x), o), 0.0);
}

TEST(Statistics, TcAndTaMatchDirectFormulas) {
  EstimatorOptions o;
  o.window = 2;
  EXPECT_NEAR(competitor_statistic(StatKind::TC, make_sample(kU), o), oracle_tc(kU, 2), 1e-12);
  o.bandwidth = 0.15;
  EXPECT_NEAR(competitor_statistic(StatKind::TA, make_sample(kU), o), oracle_ta(kU, 2, 0.15),
              1e-12);
}

TEST(Statistics, GStatisticsAreEstimators) {
  const Sample s = make_sample(kU);
  const auto o = unit_interval_options();
  for (StatKind k : kGStatistics) {
    EXPECT_EQ(g_statistic(k, s), estimate(estimator_for(k), s, o).value);
  }
}

TEST(Statistics, RejectsDataOutsideUnitInterval) {
  try {
    statistic(StatKind::GV, make_sample({0.2, 0.5, 1.3, 0.7}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfUnitInterval);
    EXPECT_EQ(e.index(), 4u);
  }
}

TEST(Statistics, KindParsing) {
  EXPECT_EQ(parse_stat_kind("gd"), StatKind::GD);
  EXPECT_THROW(parse_stat_kind("GX"), Error);
  EXPECT_EQ(parse_stat_kinds("G").size(), 5u);
  EXPECT_EQ(parse_stat_kinds("T").size(), 7u);
  EXPECT_EQ(parse_stat_kinds("all").size(), 12u);
  EXPECT_EQ(parse_stat_kinds("GV,KS,GV").size(), 2u);
}

TEST(CriticalValues, EmpiricalQuantileRanks) {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  EXPECT_EQ(empirical_upper_quantile(v, 0.05), 95.0);
  EXPECT_EQ(empirical_upper_quantile(v, 0.001), 100.0);
  EXPECT_EQ(empirical_upper_quantile(v, 0.99), 1.0);
  std::vector<double> big(100000);
  for (std::size_t i = 0; i < big.size(); ++i) big[i] = static_cast<double>(big.size() - i);
  EXPECT_EQ(empirical_upper_quantile(big, 0.05), 95000.0);
  EXPECT_THROW(empirical_upper_quantile({}, 0.05), Error);
  EXPECT_THROW(empirical_upper_quantile(v, 1.0), Error);
}

TEST(CriticalValues, TableRoundTrip) {
  CriticalValueTable a{StatKind::GD, 0.05, 1000, 9, {{10, 0.0671234567891}, {20, 0.1 + 0.2}}};
  CriticalValueTable b{StatKind::KS, 0.1, 5000, 3, {{30, 0.2}}};
  std::ostringstream out;
  write_critical_tables(out, std::vector{a, b});
  std::istringstream in(out.str());
  const auto back = read_critical_tables(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].kind, StatKind::GD);
  EXPECT_EQ(back[0].entries, a.entries);
  EXPECT_EQ(back[1].entries, b.entries);
  EXPECT_EQ(back[1].alpha, 0.1);
  const auto* t = find_critical_table(back, StatKind::GD, 0.05, 20);
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(*t->at(20), 0.1 + 0.2);
  EXPECT_EQ(find_critical_table(back, StatKind::GD, 0.05, 25), nullptr);
}

TEST(CriticalValues, TableParseErrorsNameTheLine) {
  std::istringstream bad("# varext-critical-table v1\nkind\tn\talpha\treps\tseed\tvalue\n"
                         "GV\t10\t0.05\t1000\t1\toops\n");
  try {
    read_critical_tables(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::istringstream nomagic("GV\t10\t0.05\t1000\t1\t0.5\n");
  EXPECT_THROW(read_critical_tables(nomagic), Error);
}

TEST(CriticalValues, DecisionBoundary) {
  const Sample s = make_sample(kU);
  const double stat = statistic(StatKind::GQ, s);
  CriticalValueTable t{StatKind::GQ, 0.05, 1000, 1, {{kU.size(), stat}}};
  EXPECT_TRUE(run_test(StatKind::GQ, s, t).reject);
  t.entries[kU.size()] = std::nextafter(stat, 1.0);
  EXPECT_FALSE(run_test(StatKind::GQ, s, t).reject);
  t.entries = {{kU.size() + 1, 0.1}};
  try {
    run_test(StatKind::GQ, s, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingCriticalValue);
  }
}

TEST(CriticalValues, CalibrationEqualsDirectEnumeration) {
  const std::size_t n = 12, reps = 1000;
  const std::uint64_t seed = 77;
  std::vector<double> gv, ks;
  for (std::size_t r = 0; r < reps; ++r) {
    Substream rng = rng_substream(seed, r);
    std::vector<double> u(n);
    for (;;) {
      for (double& v : u) v = rng.uniform();
      if (!make_sample(u).has_ties()) break;
    }
    gv.push_back(statistic(StatKind::GV, make_sample(u)));
    ks.push_back(ks_statistic(make_sample(u)));
  }
  std::sort(gv.begin(), gv.end());
  std::sort(ks.begin(), ks.end());
  CalibrationOptions o;
  o.reps = reps;
  o.seed = seed;
  o.workers = 1;
  const StatKind kinds[] = {StatKind::GV, StatKind::KS};
  const auto res = calibrate_critical_values(kinds, n, 0.05, o);
  EXPECT_EQ(res[0].critical_value, gv[949]);
  EXPECT_EQ(res[1].critical_value, ks[949]);
  o.reps = 999;
  EXPECT_THROW(calibrate_critical_values(kinds, n, 0.05, o), Error);
}

TEST(CriticalValues, WorkerCountDoesNotChangeResults) {
  CalibrationOptions o;
  o.reps = 300;
  o.seed = 5;
  const StatKind kinds[] = {StatKind::GD, StatKind::TB};
  o.workers = 1;
  const auto one = simulate_null_statistics(kinds, 15, o);
  o.workers = 4;
  const auto four = simulate_null_statistics(kinds, 15, o);
  EXPECT_EQ(one, four);
}

TEST(CompositeNull, LizardTransformMatchesReferenceValues) {
  const auto raw = data_file("lizard_raw.txt");
  auto reference = data_file("lizard_transformed.txt");
  std::sort(reference.begin(), reference.end());
  const auto model = fit_model(Family::Normal, raw);
  const Sample u = probability_integral_transform(raw, model);
  ASSERT_EQ(u.size(), reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    EXPECT_NEAR(u.values()[i], reference[i], 5e-4) << i;
  }
}

TEST(CompositeNull, AircraftFits) {
  const auto x = data_file("aircraft_glass.txt");
  const auto e = fit_model(Family::Exponential, x);
  EXPECT_NEAR(e.p1, 0.0326, 5e-4);
  const auto a = fit_model(Family::ADistribution, x);
  EXPECT_NEAR(a.p1, 125.662, 1e-3);
  // the fit maximises the likelihood locally
  for (double d : {-0.01, 0.01}) {
    EXPECT_GT(a_distribution_log_likelihood(a.p1, x), a_distribution_log_likelihood(a.p1 + d, x));
  }
}

TEST(CompositeNull, AircraftGoldenStatistics) {
  const auto x = data_file("aircraft_glass.txt");
  const Sample ua = probability_integral_transform(x, ReferenceDistribution::a_distribution(125.662));
  const double a_expected[] = {0.1404678, 0.02569515, 0.0144915, 0.01595046, 0.07580088};
  const Sample ue = probability_integral_transform(x, fit_model(Family::Exponential, x));
  const double e_expected[] = {0.7052102, 0.2151081, 0.1541674, 0.08482313, 0.07347814};
  for (std::size_t k = 0; k < kGStatistics.size(); ++k) {
    EXPECT_NEAR(statistic(kGStatistics[k], ua), a_expected[k], 5e-7)
        << to_string(kGStatistics[k]);
    EXPECT_NEAR(statistic(kGStatistics[k], ue), e_expected[k], 5e-7)
        << to_string(kGStatistics[k]);
  }
}

TEST(CompositeNull, DomainAndDegenerateErrors) {
  EXPECT_THROW(probability_integral_transform(std::vector{1.0, -2.0, 3.0},
                                              ReferenceDistribution::exponential(1.0)),
               Error);
  EXPECT_THROW(probability_integral_transform(std::vector{0.5, 1.5},
                                              ReferenceDistribution::uniform01()),
               Error);
  EXPECT_THROW(fit_model(Family::Normal, std::vector{2.0, 2.0, 2.0}), Error);
  EXPECT_THROW(fit_model(Family::Exponential, std::vector{1.0}), Error);
  const Sample u = probability_integral_transform(std::vector{0.0, 0.5, 1.0},
                                                  ReferenceDistribution::uniform01());
  EXPECT_EQ(u.min(), 1e-12);
  EXPECT_EQ(u.max(), 1.0 - 1e-12);
}
