#pragma once

#include <cstdint>
#include <string_view>

namespace spinmarket {

// Seed derivation and counter-based random streams.
//
// Every random quantity in a run is addressed by (stream key, counter), so a
// given site in a given sweep always sees the same draws no matter the visit
// order or the thread that evaluates it. Stream keys are derived from the
// single 64-bit root seed:
//
//   derive_seed(root, tag, replica) = mix(root ^ mix(fnv1a(tag) ^ mix(replica)))
//
// where mix is the splitmix64 finalizer and fnv1a the 64-bit FNV-1a hash.

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                                    std::uint64_t replica = 0) noexcept {
  return splitmix64(root ^ splitmix64(fnv1a(tag) ^ splitmix64(replica)));
}

// Small splitmix64-based generator. Cheap to construct, so one can be made per
// (sweep, site) pair.
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed) noexcept : state_(seed) {}

  // Stream for one site within one sweep.
  static constexpr Rng for_site(std::uint64_t stream, std::uint64_t sweep,
                                std::uint64_t site) noexcept {
    return Rng(splitmix64(stream ^ splitmix64((sweep << 32) ^ site ^ (sweep >> 32))));
  }

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n > 0. Lemire's multiply-shift with rejection.
  constexpr std::uint64_t below(std::uint64_t n) noexcept {
    u128 m = static_cast<u128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<u128>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  __extension__ using u128 = unsigned __int128;
  std::uint64_t state_;
};

}  // namespace spinmarket
