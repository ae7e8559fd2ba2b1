#pragma once

// Counter-based RNG (Philox-4x32-10) with per-stream splitting: draws are a
// pure function of (seed, stream, counter), so path substreams are
// reproducible independently of scheduling.

#include <array>
#include <cmath>
#include <cstdint>

namespace fsheat {

namespace detail {
inline void philox_round(std::array<std::uint32_t, 4>& c, std::array<std::uint32_t, 2>& k) {
  const std::uint64_t m0 = 0xD2511F53ULL, m1 = 0xCD9E8D57ULL;
  std::uint64_t p0 = m0 * c[0];
  std::uint64_t p1 = m1 * c[2];
  std::array<std::uint32_t, 4> out;
  out[0] = static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0];
  out[1] = static_cast<std::uint32_t>(p1);
  out[2] = static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1];
  out[3] = static_cast<std::uint32_t>(p0);
  c = out;
  k[0] += 0x9E3779B9U;
  k[1] += 0xBB67AE85U;
}
}  // namespace detail

/// One 128-bit Philox block for (seed, stream, counter).
inline std::array<std::uint32_t, 4> philox_block(std::uint64_t seed, std::uint64_t stream,
                                                 std::uint64_t counter) {
  std::array<std::uint32_t, 4> c = {
      static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(seed),
                                    static_cast<std::uint32_t>(seed >> 32)};
  for (int r = 0; r < 10; ++r) detail::philox_round(c, k);
  return c;
}

/// Stream of standard normals via Box-Muller over Philox blocks.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    auto b = philox_block(seed_, stream_, counter_++);
    double u1 = (static_cast<double>(b[0]) + 0.5) * 0x1p-32;
    double u2 = (static_cast<double>(b[1]) + 0.5) * 0x1p-32;
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  double next_uniform() {
    auto b = philox_block(seed_, stream_, counter_++);
    return (static_cast<double>(b[0]) + 0.5) * 0x1p-32;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace fsheat
