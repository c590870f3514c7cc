#include "imgobf/core/rng.hpp"

#include "imgobf/core/error.hpp"
#include "imgobf/core/obfuscation_id.hpp"

namespace imgobf {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    word = z ^ (z >> 31);
  }
}

std::uint64_t RngStream::next_u64() noexcept {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) noexcept {
  if (lo == hi) return lo;
  const double v = lo + (hi - lo) * uniform();
  return v < hi ? v : lo;
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
  require(n > 0, "uniform_int: n must be positive");
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n) - 1;
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r > limit);
  return r % n;
}

std::uint64_t stable_hash64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h);
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view image_id,
                          std::string_view stream_name) noexcept {
  std::string buf;
  buf.reserve(8 + image_id.size() + 1 + stream_name.size());
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((global_seed >> (8 * i)) & 0xff));
  buf.append(image_id);
  buf.push_back('\0');
  buf.append(stream_name);
  return stable_hash64(buf);
}

RngStream derive_rng(std::uint64_t global_seed, std::string_view image_id,
                     std::string_view stream_name) {
  return RngStream(derive_seed(global_seed, image_id, stream_name));
}

RngStream derive_rng(std::uint64_t global_seed, std::string_view image_id, ObfuscationId id) {
  return derive_rng(global_seed, image_id, name_of(id));
}

}  // namespace imgobf
