#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "varext/dataset.hpp"
#include "varext/error.hpp"
#include "varext/estimators.hpp"
#include "varext/manifest.hpp"
#include "varext/simulation.hpp"
#include "varext/study_io.hpp"
#include "varext/uniformity.hpp"

namespace varext::cli {
namespace {

using json = nlohmann::ordered_json;

std::string sig(double v) { return format_significant(v, 7); }

// Options shared by several verbs; each verb registers the subset it uses.
struct Common {
  std::uint64_t seed = 1;
  std::size_t reps = 100000;
  double alpha = 0.05;
  std::optional<std::size_t> m;
  std::optional<double> bandwidth;
  std::size_t grid_points = kDefaultGridPoints;
  std::string format = "text";
  std::string out;
  std::size_t workers = 0;
  std::string conventions;
  std::optional<std::size_t> column;
  bool header = false;
};

void add_format_out(CLI::App& app, Common& c) {
  app.add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  app.add_option("--out", c.out, "Write the result here instead of stdout");
}

void add_tuning(CLI::App& app, Common& c) {
  app.add_option("--m", c.m, "Window size m (default floor(sqrt(n)+0.5), clipped)");
  app.add_option("--bandwidth", c.bandwidth, "Data-space bandwidth (default Silverman)");
  app.add_option("--grid-points", c.grid_points, "Quadrature grid points (>= 64)")
      ->capture_default_str();
}

void add_dataset(CLI::App& app, Common& c) {
  app.add_option("--column", c.column, "1-based column of a delimited file");
  app.add_flag("--header", c.header, "Skip the first non-comment line");
}

EstimatorOptions tuning(const Common& c, Conventions conventions) {
  if (c.grid_points < 64) throw Error(ErrorKind::InvalidArgument, "--grid-points must be >= 64");
  EstimatorOptions o;
  o.window = c.m;
  o.bandwidth = c.bandwidth;
  o.grid_points = c.grid_points;
  o.conventions = conventions;
  return o;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "--alpha must lie in (0,1)");
  }
}

void record_tuning(RunManifest& m, const Common& c) {
  m.set("m", c.m ? std::to_string(*c.m) : "default");
  m.set("bandwidth", c.bandwidth ? format_roundtrip(*c.bandwidth) : "silverman");
  m.set("grid_points", std::to_string(c.grid_points));
}

void record_dataset(RunManifest& m, const std::string& path, const Common& c) {
  m.set("dataset", path);
  if (c.column) m.set("column", std::to_string(*c.column));
  if (c.header) m.set("header", "true");
  m.input_digest = file_digest(path);
}

json manifest_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["tool_version"] = m.tool_version;
  if (m.seed) j["seed"] = *m.seed;
  if (!m.input_digest.empty()) j["input_digest"] = m.input_digest;
  json p = json::object();
  for (const auto& [k, v] : m.parameters) p[k] = v;
  j["parameters"] = p;
  return j;
}

// Writes to --out when given, else to the console stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& console) : console_(console) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : console_; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream& console_;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& i : items) s += (s.empty() ? "" : ",") + i;
  return s;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string dataset;
  std::string estimators = "all";
  bool jitter = false;
};

int cmd_estimate(const EstimateArgs& a, const Common& c, const std::string& argv_line,
                 std::ostream& out) {
  RunManifest man;
  man.command = "estimate";
  man.set("argv", argv_line);
  record_dataset(man, a.dataset, c);
  const Conventions conv =
      c.conventions.empty() ? Conventions::equivariant() : parse_conventions(c.conventions);
  const EstimatorOptions opts = tuning(c, conv);
  std::vector<EstimatorId> ids;
  if (a.estimators == "all") {
    ids = {EstimatorId::VJV, EstimatorId::VJD, EstimatorId::VJB, EstimatorId::VJS,
           EstimatorId::VJQ};
  } else {
    for (const auto& s : split(a.estimators, ',')) ids.push_back(parse_estimator_id(s));
  }
  std::vector<std::string> names;
  for (auto id : ids) names.emplace_back(to_string(id));
  man.set("estimators", join(names));
  man.set("conventions", conv.name());
  record_tuning(man, c);

  std::vector<double> values = load_dataset(a.dataset, {c.column, c.header});
  if (a.jitter) {
    man.seed = c.seed;
    man.set("jitter", "uniform(+-1e-9*range)");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double width = values.empty() ? 0.0 : 1e-9 * (*hi - *lo);
    Substream rng{c.seed, stable_hash("jitter")};
    for (double& v : values) v += width * (2.0 * rng.uniform() - 1.0);
  }
  const Sample s = make_sample(std::move(values));
  std::vector<VarextropyEstimate> results;
  for (auto id : ids) results.push_back(estimate(id, s, opts));

  Sink sink(c.out, out);
  std::ostream& os = sink.stream();
  if (c.format == "structured") {
    json doc;
    doc["manifest"] = manifest_json(man);
    json recs = json::array();
    for (const auto& e : results) {
      json r;
      r["estimator"] = std::string(to_string(e.id));
      r["n"] = s.size();
      r["m"] = e.window ? json(*e.window) : json(nullptr);
      r["bandwidth"] = e.bandwidth ? json(*e.bandwidth) : json(nullptr);
      if (e.grid) r["grid"] = {{"lo", e.grid->lo}, {"hi", e.grid->hi}, {"points", e.grid->points}};
      r["value"] = e.value;
      recs.push_back(r);
    }
    doc["estimates"] = recs;
    os << doc.dump(2) << '\n';
  } else {
    write_manifest_lines(os, man);
    os << "estimator\tn\tm\tbandwidth\tvalue\n";
    for (const auto& e : results) {
      os << to_string(e.id) << '\t' << s.size() << '\t'
         << (e.window ? std::to_string(*e.window) : "-") << '\t'
         << (e.bandwidth ? sig(*e.bandwidth) : "-") << '\t' << sig(e.value) << '\n';
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TestArgs {
  std::string dataset;
  std::string kinds = "G";
  std::string table;
  bool calibrate = false;
  std::string save_table;
};

int cmd_test(const TestArgs& a, const Common& c, const std::string& argv_line,
             std::ostream& out) {
  check_alpha(c.alpha);
  RunManifest man;
  man.command = "test";
  man.set("argv", argv_line);
  record_dataset(man, a.dataset, c);
  const std::vector<StatKind> kinds = parse_stat_kinds(a.kinds);
  std::vector<std::string> names;
  for (auto k : kinds) names.emplace_back(to_string(k));
  man.set("kinds", join(names));
  man.set("alpha", format_roundtrip(c.alpha));
  const EstimatorOptions opts = tuning(c, c.conventions.empty() ? Conventions::nonnegative()
                                                                : parse_conventions(c.conventions));
  man.set("conventions", opts.conventions.name());
  record_tuning(man, c);

  const Sample s = make_sample(load_dataset(a.dataset, {c.column, c.header}));
  require_unit_interval(s);

  std::vector<CriticalValueTable> tables;
  if (!a.table.empty()) {
    tables = load_critical_tables(a.table);
    man.set("critical_table", a.table);
    man.set("critical_table_digest", file_digest(a.table));
  }
  std::vector<StatKind> missing;
  for (auto k : kinds) {
    if (!find_critical_table(tables, k, c.alpha, s.size())) missing.push_back(k);
  }
  if (!missing.empty()) {
    if (!a.calibrate) {
      throw Error(ErrorKind::MissingCriticalValue,
                  "no critical value for " + std::string(to_string(missing.front())) + " at n=" +
                      std::to_string(s.size()) + ", alpha=" + sig(c.alpha) +
                      "; pass --critical-table or --calibrate");
    }
    man.seed = c.seed;
    man.set("calibration_reps", std::to_string(c.reps));
    CalibrationOptions co;
    co.reps = c.reps;
    co.seed = c.seed;
    co.workers = c.workers;
    co.estimator = opts;
    const auto results = calibrate_critical_values(missing, s.size(), c.alpha, co);
    for (const auto& r : results) {
      CriticalValueTable t{r.kind, c.alpha, c.reps, c.seed, {}};
      t.entries[s.size()] = r.critical_value;
      tables.push_back(std::move(t));
    }
    if (!a.save_table.empty()) save_critical_tables(a.save_table, tables);
  }

  std::vector<TestOutcome> outcomes;
  bool any_reject = false;
  for (auto k : kinds) {
    outcomes.push_back(run_test(k, s, *find_critical_table(tables, k, c.alpha, s.size()), opts));
    any_reject = any_reject || outcomes.back().reject;
  }

  Sink sink(c.out, out);
  std::ostream& os = sink.stream();
  if (c.format == "structured") {
    json doc;
    doc["manifest"] = manifest_json(man);
    json recs = json::array();
    for (const auto& o : outcomes) {
      recs.push_back({{"kind", std::string(to_string(o.kind))},
                      {"n", s.size()},
                      {"statistic", o.statistic},
                      {"critical_value", o.critical_value},
                      {"alpha", o.alpha},
                      {"decision", o.reject ? "reject" : "accept"}});
    }
    doc["outcomes"] = recs;
    doc["decision"] = any_reject ? "reject" : "accept";
    os << doc.dump(2) << '\n';
  } else {
    write_manifest_lines(os, man);
    os << "kind\tn\tstatistic\tcritical\talpha\tdecision\n";
    for (const auto& o : outcomes) {
      os << to_string(o.kind) << '\t' << s.size() << '\t' << sig(o.statistic) << '\t'
         << sig(o.critical_value) << '\t' << sig(o.alpha) << '\t'
         << (o.reject ? "reject" : "accept") << '\n';
    }
    os << (any_reject ? "reject" : "accept") << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct PitArgs {
  std::string dataset;
  std::string family;
  std::string params;
};

Family parse_family(const std::string& name) {
  std::string f = name;
  std::transform(f.begin(), f.end(), f.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (f == "normal") return Family::Normal;
  if (f == "exponential" || f == "exp") return Family::Exponential;
  if (f == "a") return Family::ADistribution;
  if (f == "uniform") return Family::Uniform;
  if (f == "u01") return Family::Uniform01;
  if (f == "exp1") return Family::ExponentialMean1;
  if (f == "gamma21") return Family::Gamma_2_1;
  throw Error(ErrorKind::InvalidArgument,
              "unknown family '" + name +
                  "' (expected normal|exponential|A|uniform|U01|Exp1|Gamma21)");
}

ReferenceDistribution fixed_model(Family family, const std::string& params) {
  std::vector<double> p;
  for (const auto& item : split(params, ',')) {
    try {
      std::size_t used = 0;
      p.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad --params entry '" + item + "'");
    }
  }
  auto need = [&](std::size_t k) {
    if (p.size() != k) {
      throw Error(ErrorKind::InvalidArgument,
                  "--params needs " + std::to_string(k) + " value(s) for this family");
    }
  };
  ReferenceDistribution d;
  switch (family) {
    case Family::Normal: need(2); d = ReferenceDistribution::normal(p[0], p[1]); break;
    case Family::Exponential: need(1); d = ReferenceDistribution::exponential(p[0]); break;
    case Family::ADistribution: need(1); d = ReferenceDistribution::a_distribution(p[0]); break;
    case Family::Uniform: need(2); d = ReferenceDistribution::uniform(p[0], p[1]); break;
    default: need(0); d = ReferenceDistribution{family}; break;
  }
  d.validate();
  return d;
}

int cmd_pit(const PitArgs& a, const Common& c, const std::string& argv_line, std::ostream& out) {
  RunManifest man;
  man.command = "pit";
  man.set("argv", argv_line);
  record_dataset(man, a.dataset, c);
  const Family family = parse_family(a.family);
  const std::vector<double> values = load_dataset(a.dataset, {c.column, c.header});
  const ReferenceDistribution model =
      a.params.empty() ? fit_model(family, values) : fixed_model(family, a.params);
  man.set("family", a.family);
  man.set("fit", a.params.empty() ? "mle" : "fixed");
  man.set("model", model.name());
  man.set("p1", format_roundtrip(model.p1));
  man.set("p2", format_roundtrip(model.p2));
  probability_integral_transform(values, model);  // support check
  // keep input order so rows line up with the source file
  std::vector<double> u(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = model.cdf(values[i]);
    u[i] = v == 0.0 ? 1e-12 : v == 1.0 ? 1.0 - 1e-12 : v;
  }

  Sink sink(c.out, out);
  if (c.format == "structured") {
    json doc;
    doc["manifest"] = manifest_json(man);
    doc["model"] = {{"name", model.name()}, {"p1", model.p1}, {"p2", model.p2}};
    doc["values"] = u;
    sink.stream() << doc.dump(2) << '\n';
  } else {
    write_dataset(sink.stream(), u, &man);
  }
  if (sink.to_file()) {
    out << "model " << model.name() << " (" << (a.params.empty() ? "mle" : "fixed") << "), n="
        << values.size() << " -> " << c.out << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CalibrateArgs {
  std::string kinds = "G";
  std::string sizes;
};

int cmd_calibrate(const CalibrateArgs& a, const Common& c, const std::string& argv_line,
                  std::ostream& out) {
  check_alpha(c.alpha);
  const std::vector<StatKind> kinds = parse_stat_kinds(a.kinds);
  std::vector<std::size_t> sizes;
  for (const auto& s : split(a.sizes, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      sizes.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad --sizes entry '" + s + "'");
    }
  }
  if (sizes.empty()) throw Error(ErrorKind::InvalidArgument, "--sizes is required");
  const EstimatorOptions opts = tuning(c, c.conventions.empty() ? Conventions::nonnegative()
                                                                : parse_conventions(c.conventions));
  RunManifest man;
  man.command = "calibrate";
  man.seed = c.seed;
  man.set("argv", argv_line);
  std::vector<std::string> names;
  for (auto k : kinds) names.emplace_back(to_string(k));
  man.set("kinds", join(names));
  man.set("sizes", a.sizes);
  man.set("alpha", format_roundtrip(c.alpha));
  man.set("reps", std::to_string(c.reps));
  man.set("conventions", opts.conventions.name());
  record_tuning(man, c);

  CalibrationOptions co;
  co.reps = c.reps;
  co.seed = c.seed;
  co.workers = c.workers;
  co.estimator = opts;
  std::vector<CriticalValueTable> tables;
  for (auto k : kinds) tables.push_back({k, c.alpha, c.reps, c.seed, {}});
  std::size_t redraws = 0;
  for (std::size_t n : sizes) {
    const auto results = calibrate_critical_values(kinds, n, c.alpha, co);
    for (std::size_t i = 0; i < results.size(); ++i) {
      tables[i].entries[n] = results[i].critical_value;
    }
    redraws += results.front().redraws;
  }
  man.set("redraws", std::to_string(redraws));

  Sink sink(c.out, out);
  if (c.format == "structured") {
    json doc;
    doc["manifest"] = manifest_json(man);
    json recs = json::array();
    for (const auto& t : tables) {
      for (const auto& [n, v] : t.entries) {
        recs.push_back({{"kind", std::string(to_string(t.kind))},
                        {"n", n},
                        {"alpha", t.alpha},
                        {"reps", t.reps},
                        {"seed", t.seed},
                        {"value", v}});
      }
    }
    doc["critical_values"] = recs;
    sink.stream() << doc.dump(2) << '\n';
  } else {
    write_critical_tables(sink.stream(), tables);
    write_manifest_lines(sink.stream(), man);
  }
  if (sink.to_file()) {
    for (const auto& t : tables) {
      out << to_string(t.kind);
      for (const auto& [n, v] : t.entries) out << "  n=" << n << ": " << sig(v);
      out << '\n';
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct StudyArgs {
  std::string preset;
  std::string config;
  std::string table;
  std::string critical_table;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<std::size_t> calibration_reps;
  std::optional<std::size_t> grid_points;
};

int cmd_study(const StudyArgs& a, const Common& c, const std::string& argv_line,
              std::ostream& out) {
  if (a.preset.empty() && a.config.empty()) {
    std::string known;
    for (auto p : preset_names()) known += " " + std::string(p);
    throw Error(ErrorKind::ConfigError, "give --preset or --config (presets:" + known + ")");
  }
  RunManifest man;
  man.command = "study";
  man.set("argv", argv_line);
  std::vector<std::pair<std::string, std::string>> settings;
  if (!a.preset.empty()) settings.emplace_back("preset", a.preset);
  if (!a.config.empty()) {
    const auto file = load_settings(a.config);
    settings.insert(settings.end(), file.begin(), file.end());
    man.input_digest = file_digest(a.config);
    man.set("config", a.config);
  }
  if (a.reps) settings.emplace_back("reps", std::to_string(*a.reps));
  if (a.seed) settings.emplace_back("seed", std::to_string(*a.seed));
  if (a.alpha) settings.emplace_back("alpha", format_roundtrip(*a.alpha));
  if (a.calibration_reps) {
    settings.emplace_back("calibration_reps", std::to_string(*a.calibration_reps));
  }
  if (a.grid_points) settings.emplace_back("grid_points", std::to_string(*a.grid_points));
  if (c.workers) settings.emplace_back("workers", std::to_string(c.workers));
  StudyConfig cfg = apply_settings(StudyConfig{}, settings);
  if (!a.table.empty() && parse_study_kind(a.table) != cfg.kind) {
    throw Error(ErrorKind::ConfigError, "--table " + a.table + " does not match the " +
                                            std::string(to_string(cfg.kind)) + " study configured");
  }
  cfg.validate();
  man.seed = cfg.seed;

  StudyReport report;
  if (cfg.kind == StudyKind::Power && !a.critical_table.empty()) {
    man.set("critical_table", a.critical_table);
    man.set("critical_table_digest", file_digest(a.critical_table));
    const auto tables = load_critical_tables(a.critical_table);
    report = power_study(cfg, tables);
  } else {
    report = run_study(cfg);
  }

  Sink sink(c.out, out);
  write_report(sink.stream(), report, man,
               c.format == "structured" ? ReportFormat::Structured : ReportFormat::Text);
  if (sink.to_file()) write_report_grid(out, report);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Varextropy estimation and uniformity testing", "varext"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  Common c;
  std::function<int()> action;
  std::string argv_line;
  for (const auto& a : args) argv_line += (argv_line.empty() ? "" : " ") + a;

  EstimateArgs ea;
  auto* est = app.add_subcommand("estimate", "Estimate varextropy from a dataset");
  est->add_option("dataset", ea.dataset, "Delimited text file")->required();
  est->add_option("--estimator", ea.estimators, "VJV,VJD,VJB,VJS,VJQ or all")
      ->capture_default_str();
  est->add_option("--conventions", c.conventions, "equivariant (default) or nonnegative");
  est->add_flag("--jitter", ea.jitter, "Break ties with uniform noise of 1e-9 x range");
  est->add_option("--seed", c.seed, "Seed for --jitter")->capture_default_str();
  add_tuning(*est, c);
  add_dataset(*est, c);
  add_format_out(*est, c);
  est->callback([&] { action = [&] { return cmd_estimate(ea, c, argv_line, out); }; });

  TestArgs ta;
  auto* tst = app.add_subcommand("test", "Test uniformity of data on [0,1]");
  tst->add_option("dataset", ta.dataset, "Delimited text file")->required();
  tst->add_option("--kinds", ta.kinds, "Statistics, e.g. GV,GD or G, T, all")
      ->capture_default_str();
  tst->add_option("--alpha", c.alpha, "Significance level")->capture_default_str();
  tst->add_option("--critical-table", ta.table, "Critical value file from 'calibrate'");
  tst->add_flag("--calibrate", ta.calibrate, "Simulate missing critical values");
  tst->add_option("--save-table", ta.save_table, "Store calibrated values in this file");
  tst->add_option("--reps", c.reps, "Calibration replicates (>= 1000)")->capture_default_str();
  tst->add_option("--seed", c.seed, "Calibration seed")->capture_default_str();
  tst->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  tst->add_option("--conventions", c.conventions, "nonnegative (default) or equivariant");
  add_tuning(*tst, c);
  add_dataset(*tst, c);
  add_format_out(*tst, c);
  tst->callback([&] { action = [&] { return cmd_test(ta, c, argv_line, out); }; });

  PitArgs pa;
  auto* pit = app.add_subcommand("pit", "Probability integral transform to [0,1]");
  pit->add_option("dataset", pa.dataset, "Delimited text file")->required();
  pit->add_option("--family", pa.family, "normal|exponential|A|uniform|U01|Exp1|Gamma21")
      ->required();
  pit->add_option("--params", pa.params, "Fixed parameters instead of the MLE, comma separated");
  add_dataset(*pit, c);
  add_format_out(*pit, c);
  pit->callback([&] { action = [&] { return cmd_pit(pa, c, argv_line, out); }; });

  CalibrateArgs ca;
  auto* cal = app.add_subcommand("calibrate", "Monte Carlo critical values under U(0,1)");
  cal->add_option("--kinds", ca.kinds, "Statistics, e.g. GV,GD or G, T, all")
      ->capture_default_str();
  cal->add_option("--sizes", ca.sizes, "Sample sizes, comma separated")->required();
  cal->add_option("--alpha", c.alpha, "Significance level")->capture_default_str();
  cal->add_option("--reps", c.reps, "Replicates (>= 1000)")->capture_default_str();
  cal->add_option("--seed", c.seed, "Seed")->capture_default_str();
  cal->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  cal->add_option("--conventions", c.conventions, "nonnegative (default) or equivariant");
  add_tuning(*cal, c);
  add_format_out(*cal, c);
  cal->callback([&] { action = [&] { return cmd_calibrate(ca, c, argv_line, out); }; });

  StudyArgs sa;
  auto* stu = app.add_subcommand("study", "Run a Monte Carlo study");
  stu->add_option("--preset", sa.preset, "table1 .. table6");
  stu->add_option("--config", sa.config, "key = value config file");
  stu->add_option("--table", sa.table, "Expected study type")
      ->check(CLI::IsMember({"mse", "power", "critical"}));
  stu->add_option("--critical-table", sa.critical_table, "Critical values for power studies");
  stu->add_option("--reps", sa.reps, "Replicates");
  stu->add_option("--seed", sa.seed, "Seed");
  stu->add_option("--alpha", sa.alpha, "Significance level");
  stu->add_option("--calibration-reps", sa.calibration_reps,
                  "Replicates for critical values of power studies");
  stu->add_option("--grid-points", sa.grid_points, "Quadrature grid points");
  stu->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  add_format_out(*stu, c);
  stu->callback([&] { action = [&] { return cmd_study(sa, c, argv_line, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    return action();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.kind()) ? kExitNumerical : kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace varext::cli
