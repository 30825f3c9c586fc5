#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "varext/manifest.hpp"
#include "varext/simulation.hpp"

namespace varext {

enum class ReportFormat { Text, Structured };

/// "text" or "structured" (alias "json"). Throws ConfigError.
ReportFormat parse_report_format(std::string_view text);

/// Parses "key = value" lines; '#' starts a comment line. Keys keep their
/// order. Throws ConfigError naming the line.
std::vector<std::pair<std::string, std::string>> read_settings(std::istream& in,
                                                               std::string_view source);
std::vector<std::pair<std::string, std::string>> load_settings(const std::string& path);

/// Text: '#' header with manifest, config echo and redraw count, then one
/// tab-separated record per cell (kind n distribution metric value mc_se).
/// Structured: a JSON document with the same content.
void write_report(std::ostream& out, const StudyReport& report, const RunManifest& manifest,
                  ReportFormat format);

/// Human-oriented view: for each (metric, distribution) a grid with one row
/// per n and one column per kind, cells "value (se)".
void write_report_grid(std::ostream& out, const StudyReport& report);

}  // namespace varext
