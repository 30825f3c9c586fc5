#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace varext {

/// Library version, e.g. "0.1.0".
std::string_view version() noexcept;

/// Everything needed to rerun a command: the verb, its effective
/// parameters in order, the seed and a digest of the input bytes.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::optional<std::uint64_t> seed;
  std::string tool_version{version()};
  std::string input_digest;  // "sha256:<hex>" or empty

  void set(std::string key, std::string value);
};

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);
/// "sha256:<hex>" of a file's contents. Throws ParseError if unreadable.
std::string file_digest(const std::string& path);

/// One "<prefix>key: value" line per field, parameters as
/// "<prefix>param.<key>: <value>".
void write_manifest_lines(std::ostream& out, const RunManifest& m, std::string_view prefix = "# ");

}  // namespace varext
