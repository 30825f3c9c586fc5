#include "varext/study_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include "json.hpp"
#include <ostream>

#include "varext/dataset.hpp"
#include "varext/error.hpp"

namespace varext {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "text") return ReportFormat::Text;
  if (text == "structured" || text == "json") return ReportFormat::Structured;
  throw Error(ErrorKind::ConfigError,
              "unknown format '" + std::string(text) + "' (expected text|structured)");
}

std::vector<std::pair<std::string, std::string>> read_settings(std::istream& in,
                                                               std::string_view source) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ConfigError,
                  std::string(source) + ": line " + std::to_string(number) +
                      ": expected 'key = value'",
                  number);
    }
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) {
      throw Error(ErrorKind::ConfigError,
                  std::string(source) + ": line " + std::to_string(number) + ": empty key",
                  number);
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> load_settings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config '" + path + "'");
  return read_settings(in, path);
}

void write_report(std::ostream& out, const StudyReport& report, const RunManifest& manifest,
                  ReportFormat format) {
  if (format == ReportFormat::Structured) {
    nlohmann::ordered_json doc;
    doc["format"] = "varext-study-report/1";
    nlohmann::ordered_json m;
    m["command"] = manifest.command;
    m["tool_version"] = manifest.tool_version;
    if (manifest.seed) m["seed"] = *manifest.seed;
    if (!manifest.input_digest.empty()) m["input_digest"] = manifest.input_digest;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : manifest.parameters) params[k] = v;
    m["parameters"] = params;
    doc["manifest"] = m;
    nlohmann::ordered_json config = nlohmann::ordered_json::array();
    for (const auto& [k, v] : report.config.echo) config.push_back({{"key", k}, {"value", v}});
    doc["config"] = config;
    doc["study"] = to_string(report.config.kind);
    doc["redraws"] = report.redraws;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto& c : report.cells) {
      cells.push_back({{"kind", c.kind},
                       {"n", c.n},
                       {"distribution", c.distribution},
                       {"metric", c.metric},
                       {"value", c.value},
                       {"mc_se", c.mc_se}});
    }
    doc["cells"] = cells;
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# varext-study-report v1\n";
  write_manifest_lines(out, manifest);
  out << "# study: " << to_string(report.config.kind) << '\n';
  for (const auto& [k, v] : report.config.echo) out << "# config: " << k << " = " << v << '\n';
  out << "# redraws: " << report.redraws << '\n';
  out << "kind\tn\tdistribution\tmetric\tvalue\tmc_se\n";
  for (const auto& c : report.cells) {
    out << c.kind << '\t' << c.n << '\t' << c.distribution << '\t' << c.metric << '\t'
        << format_significant(c.value, 10) << '\t' << format_significant(c.mc_se, 3) << '\n';
  }
}

void write_report_grid(std::ostream& out, const StudyReport& report) {
  std::vector<std::pair<std::string, std::string>> blocks;
  std::vector<std::string> kinds;
  std::vector<std::size_t> sizes;
  for (const auto& c : report.cells) {
    push_unique(blocks, {c.metric, c.distribution});
    push_unique(kinds, c.kind);
    push_unique(sizes, c.n);
  }
  constexpr int kWidth = 24;
  for (const auto& [metric, dist] : blocks) {
    out << metric << " (" << dist << ")\n" << std::left << std::setw(6) << "n";
    for (const auto& k : kinds) out << std::setw(kWidth) << k;
    out << '\n';
    for (std::size_t n : sizes) {
      out << std::setw(6) << n;
      for (const auto& k : kinds) {
        const auto it = std::find_if(report.cells.begin(), report.cells.end(), [&](const auto& c) {
          return c.metric == metric && c.distribution == dist && c.kind == k && c.n == n;
        });
        if (it == report.cells.end()) {
          out << std::setw(kWidth) << "-";
        } else {
          out << std::setw(kWidth)
              << format_significant(it->value, 7) + " (" + format_significant(it->mc_se, 2) + ")";
        }
      }
      out << '\n';
    }
    out << '\n';
  }
  out << std::right;
}

}  // namespace varext
