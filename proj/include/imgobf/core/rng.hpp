#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace imgobf {

enum class ObfuscationId : std::uint8_t;

/// xoshiro256** seeded through splitmix64. All draws are defined on the raw
/// 64-bit outputs so sequences are identical on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() noexcept;

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  /// Uniform in [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi) noexcept;
  /// Uniform in [0, n), unbiased by rejection. n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n);
  bool bernoulli(double p) noexcept { return uniform() < p; }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// FNV-1a over the bytes, finalized with splitmix64.
std::uint64_t stable_hash64(std::string_view bytes) noexcept;

/// Seed for a (global seed, image id, stream name) triple. The triple is
/// serialized as 8 little-endian seed bytes, the UTF-8 image id, a NUL
/// separator and the UTF-8 stream name.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view image_id,
                          std::string_view stream_name) noexcept;

RngStream derive_rng(std::uint64_t global_seed, std::string_view image_id,
                     std::string_view stream_name);
RngStream derive_rng(std::uint64_t global_seed, std::string_view image_id, ObfuscationId id);

}  // namespace imgobf
