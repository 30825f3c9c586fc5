#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "varext/manifest.hpp"

namespace varext {

struct DatasetOptions {
  /// 1-based column to read; when unset every field on every line is an
  /// observation.
  std::optional<std::size_t> column;
  /// Skip the first non-comment line.
  bool header = false;
};

/// Reads delimited numbers (comma, semicolon, tab or spaces). Blank lines and
/// lines starting with '#' are skipped. Parsing ignores the C locale.
/// Throws ParseError naming the line and field.
std::vector<double> read_dataset(std::istream& in, const DatasetOptions& options = {},
                                 std::string_view source = "<input>");
std::vector<double> load_dataset(const std::string& path, const DatasetOptions& options = {});

/// One value per line in round-trip form, preceded by the manifest
/// as '#' comments when given.
void write_dataset(std::ostream& out, std::span<const double> values,
                   const RunManifest* manifest = nullptr);

/// %.{digits}g rendering.
std::string format_significant(double v, int digits = 7);

/// Shortest text that parses back to exactly `v`.
std::string format_roundtrip(double v);

}  // namespace varext
