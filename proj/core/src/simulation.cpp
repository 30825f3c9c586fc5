#include "varext/simulation.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "varext/error.hpp"

namespace varext {
namespace {

std::string fmt_k(double k) {
  std::ostringstream os;
  os << k;
  return os.str();
}

// Neumaier-compensated running sum.
class Sum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_and_se(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  Sum s;
  for (double x : v) s.add(x);
  const double mean = s.value() / n;
  Sum ss;
  for (double x : v) ss.add((x - mean) * (x - mean));
  const double var = v.size() > 1 ? ss.value() / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

std::uint64_t cell_key(const DataSource& source) { return stable_hash(source_name(source)); }

// Draws a tie-free sample, redrawing (and counting) on floating-point ties.
Sample draw_sample(const DataSource& source, std::size_t n, Substream& rng,
                   std::size_t& redraws) {
  for (;;) {
    Sample s = make_sample(draw(source, n, rng));
    if (!s.has_ties()) return s;
    ++redraws;
  }
}

// Spread of the (1 - alpha) order statistic from neighbouring order
// statistics: f^-1 estimated by a symmetric difference over +-sqrt(reps)
// ranks, times the binomial standard deviation of the rank.
double quantile_se(std::vector<double> v, double alpha) {
  std::sort(v.begin(), v.end());
  const std::size_t reps = v.size();
  const double p = 1.0 - alpha;
  const auto d = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(reps))));
  const auto r = static_cast<std::size_t>(
      std::clamp(std::ceil(p * static_cast<double>(reps) * (1.0 - 1e-9)), 1.0,
                 static_cast<double>(reps)));
  const std::size_t lo = r > d ? r - d : 1;
  const std::size_t hi = std::min(reps, r + d);
  if (hi <= lo) return 0.0;
  const double slope = (v[hi - 1] - v[lo - 1]) / (static_cast<double>(hi - lo) /
                                                   static_cast<double>(reps));
  return slope * std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string item(text.substr(pos, comma - pos));
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    pos = comma + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::ConfigError, "bad value for '" + key + "': '" + text + "'");
  }
  return value;
}

constexpr std::array<std::string_view, 6> kPresetNames = {"table1", "table2", "table3",
                                                          "table4", "table5", "table6"};

}  // namespace

// ---------------------------------------------------------------------------

void AlternativeFamily::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorKind::DomainError, "alternative shape k must be positive");
  }
}

bool AlternativeFamily::is_standard() const noexcept {
  if (k == 1.5 || k == 2.0) return true;
  return kind == AltKind::B && k == 3.0;
}

double AlternativeFamily::cdf(double x) const noexcept {
  x = std::clamp(x, 0.0, 1.0);
  const double c = std::pow(2.0, k - 1.0);
  switch (kind) {
    case AltKind::A: return 1.0 - std::pow(1.0 - x, k);
    case AltKind::B:
      return x <= 0.5 ? c * std::pow(x, k) : 1.0 - c * std::pow(1.0 - x, k);
    case AltKind::C:
      return x <= 0.5 ? 0.5 - c * std::pow(0.5 - x, k) : 0.5 + c * std::pow(x - 0.5, k);
  }
  return x;
}

std::string AlternativeFamily::name() const {
  const char letter = kind == AltKind::A ? 'A' : kind == AltKind::B ? 'B' : 'C';
  return letter + fmt_k(k);
}

AlternativeFamily parse_alternative(std::string_view text) {
  if (text.size() < 2 || (text[0] != 'A' && text[0] != 'B' && text[0] != 'C')) {
    throw Error(ErrorKind::ConfigError, "unknown alternative '" + std::string(text) + "'");
  }
  AlternativeFamily f;
  f.kind = text[0] == 'A' ? AltKind::A : text[0] == 'B' ? AltKind::B : AltKind::C;
  const std::string rest(text.substr(1));
  f.k = parse_number<double>("alternative", rest);
  try {
    f.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  return f;
}

double inverse_cdf_alternative(const AlternativeFamily& fam, double u) noexcept {
  const double inv_k = 1.0 / fam.k;
  const double c = std::pow(2.0, fam.k - 1.0);
  switch (fam.kind) {
    case AltKind::A: return 1.0 - std::pow(1.0 - u, inv_k);
    case AltKind::B:
      return u <= 0.5 ? std::pow(u / c, inv_k) : 1.0 - std::pow((1.0 - u) / c, inv_k);
    case AltKind::C:
      return u <= 0.5 ? 0.5 - std::pow((0.5 - u) / c, inv_k)
                      : 0.5 + std::pow((u - 0.5) / c, inv_k);
  }
  return u;
}

Sample sample_alternative(const AlternativeFamily& fam, std::size_t n, Substream& rng) {
  return make_sample(draw(fam, n, rng));
}

std::string source_name(const DataSource& source) {
  return std::visit([](const auto& s) { return s.name(); }, source);
}

DataSource parse_data_source(const std::string& text) {
  if (text.size() >= 2 && (text[0] == 'A' || text[0] == 'B' || text[0] == 'C') &&
      text[1] != '(') {
    return parse_alternative(text);
  }
  return parse_reference_distribution(text);
}

std::vector<double> draw(const DataSource& source, std::size_t n, Substream& rng) {
  std::vector<double> x(n);
  if (const auto* alt = std::get_if<AlternativeFamily>(&source)) {
    for (double& v : x) v = inverse_cdf_alternative(*alt, rng.uniform());
    return x;
  }
  const auto& d = std::get<ReferenceDistribution>(source);
  switch (d.family) {
    case Family::Uniform01:
      for (double& v : x) v = rng.uniform();
      break;
    case Family::ExponentialMean1:
      for (double& v : x) v = -std::log1p(-rng.uniform());
      break;
    case Family::Exponential:
      for (double& v : x) v = -std::log1p(-rng.uniform()) / d.p1;
      break;
    case Family::Gamma_2_1:
      for (double& v : x) {
        const double a = -std::log1p(-rng.uniform());
        v = a - std::log1p(-rng.uniform());
      }
      break;
    case Family::Uniform:
    case Family::Normal:
    case Family::ADistribution:
      for (double& v : x) v = d.quantile(rng.uniform_open());
      break;
  }
  return x;
}

// ---------------------------------------------------------------------------

std::string_view to_string(StudyKind kind) noexcept {
  switch (kind) {
    case StudyKind::Mse: return "mse";
    case StudyKind::Power: return "power";
    case StudyKind::Critical: return "critical";
  }
  return "?";
}

StudyKind parse_study_kind(std::string_view text) {
  if (text == "mse") return StudyKind::Mse;
  if (text == "power") return StudyKind::Power;
  if (text == "critical") return StudyKind::Critical;
  throw Error(ErrorKind::ConfigError,
              "unknown study '" + std::string(text) + "' (expected mse|power|critical)");
}

void StudyConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::ConfigError, what); };
  if (reps < 100) fail("reps must be >= 100");
  if (kind == StudyKind::Critical && reps < 1000) fail("critical studies need reps >= 1000");
  if (sample_sizes.empty()) fail("no sample sizes");
  for (std::size_t n : sample_sizes) {
    if (n < 2) fail("sample sizes must be >= 2");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0,1)");
  if (kind == StudyKind::Mse) {
    if (estimators.empty()) fail("no estimators");
    if (distributions.empty()) fail("no distributions");
    for (const auto& d : distributions) {
      const auto* ref = std::get_if<ReferenceDistribution>(&d);
      if (!ref) fail("mse studies need reference distributions, got " + source_name(d));
      try {
        analytic_varextropy(*ref);
      } catch (const Error&) {
        fail("no analytic varextropy for " + source_name(d));
      }
    }
  } else {
    if (statistics.empty()) fail("no statistics");
    if (kind == StudyKind::Power) {
      if (distributions.empty()) fail("no alternatives");
      if (calibration_reps < 1000) fail("calibration_reps must be >= 1000");
    }
  }
}

StudyReport mse_bias_study(const StudyConfig& cfg) {
  cfg.validate();
  StudyReport report{cfg, {}, 0};
  const std::size_t ne = cfg.estimators.size();
  for (const auto& source : cfg.distributions) {
    const double truth = analytic_varextropy(std::get<ReferenceDistribution>(source));
    const std::string dname = source_name(source);
    for (std::size_t n : cfg.sample_sizes) {
      std::vector<double> values(cfg.reps * ne);
      std::vector<std::size_t> redraws(cfg.reps, 0);
      parallel_for(cfg.reps, cfg.workers, [&](std::size_t r) {
        Substream rng{cfg.seed, cell_key(source), n, r};
        const Sample s = draw_sample(source, n, rng, redraws[r]);
        for (std::size_t e = 0; e < ne; ++e) {
          values[r * ne + e] = estimate(cfg.estimators[e], s, cfg.estimator).value;
        }
      });
      for (std::size_t c : redraws) report.redraws += c;
      std::vector<double> err(cfg.reps);
      std::vector<double> sq(cfg.reps);
      for (std::size_t e = 0; e < ne; ++e) {
        for (std::size_t r = 0; r < cfg.reps; ++r) {
          err[r] = values[r * ne + e] - truth;
          sq[r] = err[r] * err[r];
        }
        const MeanSe bias = mean_and_se(err);
        const MeanSe mse = mean_and_se(sq);
        const std::string kind(to_string(cfg.estimators[e]));
        report.cells.push_back({kind, n, dname, "mse", mse.mean, mse.se});
        report.cells.push_back({kind, n, dname, "bias", bias.mean, bias.se});
      }
    }
  }
  return report;
}

StudyReport power_study(const StudyConfig& cfg, std::span<const CriticalValueTable> tables) {
  cfg.validate();
  StudyReport report{cfg, {}, 0};
  const std::size_t nk = cfg.statistics.size();
  for (std::size_t n : cfg.sample_sizes) {
    std::vector<double> crit(nk);
    for (std::size_t k = 0; k < nk; ++k) {
      const auto* t = find_critical_table(tables, cfg.statistics[k], cfg.alpha, n);
      if (!t) {
        throw Error(ErrorKind::MissingCriticalValue,
                    "no " + std::string(to_string(cfg.statistics[k])) +
                        " critical value for n=" + std::to_string(n) +
                        " at alpha=" + fmt_k(cfg.alpha));
      }
      crit[k] = *t->at(n);
    }
    for (const auto& source : cfg.distributions) {
      std::vector<unsigned char> reject(cfg.reps * nk);
      std::vector<std::size_t> redraws(cfg.reps, 0);
      parallel_for(cfg.reps, cfg.workers, [&](std::size_t r) {
        Substream rng{cfg.seed, cell_key(source), n, r};
        const Sample s = draw_sample(source, n, rng, redraws[r]);
        for (std::size_t k = 0; k < nk; ++k) {
          reject[r * nk + k] = statistic(cfg.statistics[k], s, cfg.estimator) >= crit[k];
        }
      });
      for (std::size_t c : redraws) report.redraws += c;
      const std::string dname = source_name(source);
      for (std::size_t k = 0; k < nk; ++k) {
        std::size_t hits = 0;
        for (std::size_t r = 0; r < cfg.reps; ++r) hits += reject[r * nk + k];
        const double p = static_cast<double>(hits) / static_cast<double>(cfg.reps);
        report.cells.push_back({std::string(to_string(cfg.statistics[k])), n, dname, "power", p,
                                std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.reps))});
      }
    }
  }
  return report;
}

std::vector<CriticalValueTable> calibrate_for(const StudyConfig& cfg) {
  CalibrationOptions o;
  o.reps = cfg.calibration_reps;
  o.seed = cfg.calibration_seed.value_or(cfg.seed);
  o.workers = cfg.workers;
  o.estimator = cfg.estimator;
  std::vector<CriticalValueTable> tables;
  for (StatKind k : cfg.statistics) tables.push_back({k, cfg.alpha, o.reps, o.seed, {}});
  for (std::size_t n : cfg.sample_sizes) {
    const auto results = calibrate_critical_values(cfg.statistics, n, cfg.alpha, o);
    for (std::size_t k = 0; k < results.size(); ++k) {
      tables[k].entries[n] = results[k].critical_value;
    }
  }
  return tables;
}

StudyReport critical_value_study(const StudyConfig& cfg) {
  cfg.validate();
  StudyReport report{cfg, {}, 0};
  CalibrationOptions o;
  o.reps = cfg.reps;
  o.seed = cfg.seed;
  o.workers = cfg.workers;
  o.estimator = cfg.estimator;
  for (std::size_t n : cfg.sample_sizes) {
    std::size_t redraws = 0;
    const auto rows = simulate_null_statistics(cfg.statistics, n, o, &redraws);
    report.redraws += redraws;
    std::vector<double> column(rows.size());
    for (std::size_t k = 0; k < cfg.statistics.size(); ++k) {
      for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][k];
      report.cells.push_back({std::string(to_string(cfg.statistics[k])), n, "U01", "critical",
                              empirical_upper_quantile(column, cfg.alpha),
                              quantile_se(column, cfg.alpha)});
    }
  }
  return report;
}

StudyReport run_study(const StudyConfig& cfg) {
  switch (cfg.kind) {
    case StudyKind::Mse: return mse_bias_study(cfg);
    case StudyKind::Critical: return critical_value_study(cfg);
    case StudyKind::Power: {
      cfg.validate();
      const auto tables = calibrate_for(cfg);
      return power_study(cfg, tables);
    }
  }
  throw Error(ErrorKind::ConfigError, "unknown study kind");
}

std::vector<CriticalValueTable> critical_tables_from(const StudyReport& report) {
  std::vector<CriticalValueTable> tables;
  for (StatKind k : report.config.statistics) {
    CriticalValueTable t{k, report.config.alpha, report.config.reps, report.config.seed, {}};
    for (const auto& c : report.cells) {
      if (c.metric == "critical" && c.kind == to_string(k)) t.entries[c.n] = c.value;
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

// ---------------------------------------------------------------------------

std::span<const std::string_view> preset_names() noexcept { return kPresetNames; }

StudyConfig preset(std::string_view name) {
  StudyConfig cfg;
  const std::vector<EstimatorId> all_estimators = {EstimatorId::VJV, EstimatorId::VJD,
                                                   EstimatorId::VJB, EstimatorId::VJS,
                                                   EstimatorId::VJQ};
  std::vector<DataSource> alternatives;
  for (const char* a : {"A1.5", "A2", "B1.5", "B2", "B3", "C1.5", "C2"}) {
    alternatives.push_back(parse_alternative(a));
  }
  if (name == "table1" || name == "table2" || name == "table3") {
    cfg.kind = StudyKind::Mse;
    cfg.estimators = all_estimators;
    cfg.sample_sizes = {10, 20, 30, 40, 50, 100};
    cfg.reps = 10000;
    cfg.distributions = {name == "table1"   ? ReferenceDistribution::gamma_2_1()
                         : name == "table2" ? ReferenceDistribution::uniform01()
                                            : ReferenceDistribution::exponential_mean1()};
  } else if (name == "table4") {
    cfg.kind = StudyKind::Critical;
    cfg.statistics.assign(kGStatistics.begin(), kGStatistics.end());
    cfg.sample_sizes = {10, 20, 30, 40, 50, 75, 100};
    cfg.reps = 100000;
  } else if (name == "table5" || name == "table6") {
    cfg.kind = StudyKind::Power;
    if (name == "table5") {
      cfg.statistics.assign(kGStatistics.begin(), kGStatistics.end());
    } else {
      cfg.statistics.assign(kCompetitorStatistics.begin(), kCompetitorStatistics.end());
    }
    cfg.sample_sizes = {10, 20, 30};
    cfg.distributions = alternatives;
    cfg.reps = 10000;
    cfg.calibration_reps = 100000;
  } else {
    std::string known;
    for (auto p : kPresetNames) known += (known.empty() ? "" : ", ") + std::string(p);
    throw Error(ErrorKind::ConfigError,
                "unknown preset '" + std::string(name) + "' (known: " + known + ")");
  }
  cfg.echo.emplace_back("preset", std::string(name));
  return cfg;
}

StudyConfig apply_settings(StudyConfig cfg,
                           std::span<const std::pair<std::string, std::string>> settings) {
  for (const auto& [key, value] : settings) {
    try {
      if (key == "preset") {
        auto echo = std::move(cfg.echo);
        cfg = preset(value);
        echo.insert(echo.end(), cfg.echo.begin(), cfg.echo.end());
        cfg.echo = std::move(echo);
        continue;
      } else if (key == "study") {
        cfg.kind = parse_study_kind(value);
      } else if (key == "estimators") {
        cfg.estimators.clear();
        for (const auto& item : split_list(value)) {
          cfg.estimators.push_back(parse_estimator_id(item));
        }
      } else if (key == "statistics") {
        cfg.statistics = parse_stat_kinds(value);
      } else if (key == "sizes") {
        cfg.sample_sizes.clear();
        for (const auto& item : split_list(value)) {
          cfg.sample_sizes.push_back(parse_number<std::size_t>(key, item));
        }
      } else if (key == "distributions") {
        cfg.distributions.clear();
        for (const auto& item : split_list(value)) {
          cfg.distributions.push_back(parse_data_source(item));
        }
      } else if (key == "reps") {
        cfg.reps = parse_number<std::size_t>(key, value);
      } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(key, value);
      } else if (key == "alpha") {
        cfg.alpha = parse_number<double>(key, value);
      } else if (key == "workers") {
        cfg.workers = parse_number<std::size_t>(key, value);
      } else if (key == "conventions") {
        cfg.estimator.conventions = parse_conventions(value);
      } else if (key == "calibration_reps") {
        cfg.calibration_reps = parse_number<std::size_t>(key, value);
      } else if (key == "calibration_seed") {
        cfg.calibration_seed = parse_number<std::uint64_t>(key, value);
      } else if (key == "grid_points") {
        cfg.estimator.grid_points = parse_number<std::size_t>(key, value);
      } else {
        throw Error(ErrorKind::ConfigError, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConfigError) throw;
      throw Error(ErrorKind::ConfigError, key + ": " + e.what());
    }
    cfg.echo.emplace_back(key, value);
  }
  return cfg;
}

}  // namespace varext
