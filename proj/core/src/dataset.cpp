#include "varext/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "varext/error.hpp"

namespace varext {
namespace {

bool is_separator(char c) { return c == ',' || c == ';' || c == '\t' || c == ' '; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  const bool has_hard = line.find_first_of(",;\t") != std::string_view::npos;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = pos;
    while (end < line.size() && !(has_hard ? (line[end] == ',' || line[end] == ';' ||
                                               line[end] == '\t')
                                           : is_separator(line[end]))) {
      ++end;
    }
    std::string_view f = line.substr(pos, end - pos);
    while (!f.empty() && f.front() == ' ') f.remove_prefix(1);
    while (!f.empty() && f.back() == ' ') f.remove_suffix(1);
    if (!f.empty() || has_hard) fields.push_back(f);
    pos = end + 1;
  }
  return fields;
}

}  // namespace

std::vector<double> read_dataset(std::istream& in, const DatasetOptions& options,
                                 std::string_view source) {
  std::vector<double> values;
  std::string line;
  std::size_t number = 0;
  bool header_pending = options.header;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto fields = split_fields(std::string_view(line).substr(first));
    auto where = [&](std::size_t col) {
      return std::string(source) + ": line " + std::to_string(number) + ", field " +
             std::to_string(col);
    };
    auto parse = [&](std::string_view f, std::size_t col) {
      if (!f.empty() && f.front() == '+') f.remove_prefix(1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
        throw Error(ErrorKind::ParseError,
                    where(col) + ": cannot parse '" + std::string(f) + "' as a number", number);
      }
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::NonFiniteValue, where(col) + ": non-finite value", number);
      }
      values.push_back(v);
    };
    if (options.column) {
      const std::size_t c = *options.column;
      if (c < 1 || c > fields.size()) {
        throw Error(ErrorKind::ParseError,
                    std::string(source) + ": line " + std::to_string(number) + " has " +
                        std::to_string(fields.size()) + " fields, column " + std::to_string(c) +
                        " requested",
                    number);
      }
      parse(fields[c - 1], c);
    } else {
      for (std::size_t c = 0; c < fields.size(); ++c) parse(fields[c], c + 1);
    }
  }
  return values;
}

std::vector<double> load_dataset(const std::string& path, const DatasetOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open dataset '" + path + "'");
  return read_dataset(in, options, path);
}

std::string format_significant(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string format_roundtrip(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_dataset(std::ostream& out, std::span<const double> values,
                   const RunManifest* manifest) {
  if (manifest) write_manifest_lines(out, *manifest);
  for (double v : values) out << format_roundtrip(v) << '\n';
}

}  // namespace varext
