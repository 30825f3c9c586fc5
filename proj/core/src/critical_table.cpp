#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <istream>
#include <ostream>
#include <sstream>

#include "varext/dataset.hpp"
#include "varext/error.hpp"
#include "varext/uniformity.hpp"

namespace varext {
namespace {

constexpr std::string_view kMagic = "# varext-critical-table v1";
constexpr std::string_view kHeader = "kind\tn\talpha\treps\tseed\tvalue";

std::string line_error(std::size_t line, const std::string& what) {
  return "critical table line " + std::to_string(line) + ": " + what;
}

template <class T>
T parse_field(std::string_view field, std::size_t line, const char* name) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::ParseError,
                line_error(line, std::string("bad ") + name + " '" + std::string(field) + "'"),
                line);
  }
  return value;
}


}  // namespace

std::vector<CriticalValueTable> read_critical_tables(std::istream& in) {
  std::vector<CriticalValueTable> tables;
  std::string text;
  std::size_t line = 0;
  bool seen_magic = false;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (!seen_magic) {
      if (text != kMagic) {
        throw Error(ErrorKind::ParseError,
                    line_error(line, "missing '" + std::string(kMagic) + "' header"), line);
      }
      seen_magic = true;
      continue;
    }
    if (text.empty() || text[0] == '#' || text == kHeader) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(text);
    for (;;) {
      const auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 6) {
      throw Error(ErrorKind::ParseError,
                  line_error(line, "expected 6 tab-separated fields, got " +
                                       std::to_string(fields.size())),
                  line);
    }
    CriticalValueTable row;
    try {
      row.kind = parse_stat_kind(fields[0]);
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, line_error(line, e.what()), line);
    }
    const auto n = parse_field<std::size_t>(fields[1], line, "n");
    row.alpha = parse_field<double>(fields[2], line, "alpha");
    row.reps = parse_field<std::size_t>(fields[3], line, "reps");
    row.seed = parse_field<std::uint64_t>(fields[4], line, "seed");
    const auto value = parse_field<double>(fields[5], line, "value");
    if (n < 2 || !(row.alpha > 0.0 && row.alpha < 1.0) || !(value >= 0.0)) {
      throw Error(ErrorKind::ParseError, line_error(line, "value out of range"), line);
    }
    auto same = [&](const CriticalValueTable& t) {
      return t.kind == row.kind && t.alpha == row.alpha && t.reps == row.reps &&
             t.seed == row.seed;
    };
    auto it = std::find_if(tables.begin(), tables.end(), same);
    if (it == tables.end()) {
      tables.push_back(row);
      it = std::prev(tables.end());
    }
    it->entries[n] = value;
  }
  if (!seen_magic) throw Error(ErrorKind::ParseError, "critical table is empty");
  return tables;
}

std::vector<CriticalValueTable> load_critical_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open critical table '" + path + "'");
  return read_critical_tables(in);
}

void write_critical_tables(std::ostream& out, std::span<const CriticalValueTable> tables) {
  out << kMagic << '\n' << kHeader << '\n';
  for (const auto& t : tables) {
    for (const auto& [n, value] : t.entries) {
      out << to_string(t.kind) << '\t' << n << '\t' << format_roundtrip(t.alpha) << '\t' << t.reps
          << '\t' << t.seed << '\t' << format_roundtrip(value) << '\n';
    }
  }
}

void save_critical_tables(const std::string& path, std::span<const CriticalValueTable> tables) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
  write_critical_tables(out, tables);
}

}  // namespace varext
