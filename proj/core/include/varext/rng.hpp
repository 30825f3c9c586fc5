#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <initializer_list>
#include <mutex>
#include <random>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

namespace varext {

/// Independent, reproducible uniform stream keyed by a tuple of integers.
///
/// The key words are fed to std::seed_seq, which together with
/// std::mt19937_64 is fully specified by the standard, and raw bits are
/// mapped to doubles here rather than through std::uniform_real_distribution,
/// so draws are identical on every conforming platform.
class Substream {
 public:
  Substream(std::initializer_list<std::uint64_t> key);
  explicit Substream(std::span<const std::uint64_t> key);

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

/// Stream for replicate `replicate` of a run seeded with `seed`.
inline Substream rng_substream(std::uint64_t seed, std::uint64_t replicate) {
  return Substream{seed, replicate};
}

/// FNV-1a over a label; stable across runs and platforms, used to key
/// substreams by data-source name.
std::uint64_t stable_hash(std::string_view text) noexcept;

/// Number of workers to use when the caller asks for 0 ("auto").
std::size_t resolve_workers(std::size_t requested) noexcept;

/// Calls fn(i) for i in [0, count) on up to `workers` threads. Indices are
/// handed out in fixed-size chunks; callers write results by index, so the
/// outcome does not depend on the worker count. The first exception thrown
/// by any call is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = resolve_workers(workers);
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  constexpr std::size_t kChunk = 64;
  std::size_t next = 0;
  std::mutex mu;
  std::exception_ptr failure;
  auto work = [&] {
    for (;;) {
      std::size_t begin;
      {
        std::lock_guard lock(mu);
        if (next >= count || failure) return;
        begin = next;
        next += kChunk;
      }
      const std::size_t end = std::min(count, begin + kChunk);
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t spawn = std::min(workers, (count + kChunk - 1) / kChunk);
  pool.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace varext
