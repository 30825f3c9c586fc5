#include "varext/manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <ostream>

#include "varext/error.hpp"

#ifndef VAREXT_VERSION
#define VAREXT_VERSION "0.0.0"
#endif

namespace varext {

std::string_view version() noexcept { return VAREXT_VERSION; }

void RunManifest::set(std::string key, std::string value) {
  for (auto& [k, v] : parameters) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  parameters.emplace_back(std::move(key), std::move(value));
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::InvalidArgument, "SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return "sha256:" + sha256_hex(bytes);
}

void write_manifest_lines(std::ostream& out, const RunManifest& m, std::string_view prefix) {
  out << prefix << "command: " << m.command << '\n';
  out << prefix << "tool_version: " << m.tool_version << '\n';
  if (m.seed) out << prefix << "seed: " << *m.seed << '\n';
  if (!m.input_digest.empty()) out << prefix << "input_digest: " << m.input_digest << '\n';
  for (const auto& [k, v] : m.parameters) out << prefix << "param." << k << ": " << v << '\n';
}

}  // namespace varext
