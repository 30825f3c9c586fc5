#include "varext/rng.hpp"

#include <algorithm>

namespace varext {
namespace {

std::mt19937_64 seeded(std::span<const std::uint64_t> key) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * key.size());
  for (std::uint64_t k : key) {
    words.push_back(static_cast<std::uint32_t>(k & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

Substream::Substream(std::initializer_list<std::uint64_t> key)
    : engine_(seeded(std::span<const std::uint64_t>(key.begin(), key.size()))) {}

Substream::Substream(std::span<const std::uint64_t> key) : engine_(seeded(key)) {}

std::uint64_t stable_hash(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::size_t resolve_workers(std::size_t requested) noexcept {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace varext
