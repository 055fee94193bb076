#ifndef HEATQUAD_RNG_HPP
#define HEATQUAD_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace heatquad {

// Philox4x32-10 counter-based generator. Stateless: every block is addressed
// by a 128-bit counter and a 64-bit key, so independent substreams can be
// carved out per particle / per run and evaluated in any order without
// changing the draws.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed, std::uint32_t domain = 0)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32) ^ domain) {}

  Block block(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
              std::uint32_t c3) const {
    std::uint32_t k0 = key0_, k1 = key1_;
    Block c{c0, c1, c2, c3};
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = kMul0 * static_cast<std::uint64_t>(c[0]);
      const std::uint64_t p1 = kMul1 * static_cast<std::uint64_t>(c[2]);
      c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0,
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1,
           static_cast<std::uint32_t>(p0)};
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    return c;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2511F53ull;
  static constexpr std::uint64_t kMul1 = 0xCD9E8D57ull;
  std::uint32_t key0_, key1_;
};

namespace rng_detail {

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  // 53 bits -> [0, 1)
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

inline double to_normal(const Philox4x32::Block& b) {
  // Box-Muller, cosine branch; u1 in (0, 1] keeps the log finite.
  const double u1 =
      (static_cast<double>(
           (static_cast<std::uint64_t>(b[0]) << 32 | b[1]) >> 11) +
       1.0) *
      0x1.0p-53;
  const double u2 = to_unit(b[2], b[3]);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace rng_detail

// Stream domains; XORed into the key so distinct uses of one seed never
// overlap in counter space.
enum : std::uint32_t {
  kDomainAnnealNoise = 0,
  kDomainAnnealInit = 1,
  kDomainUniform = 2,
  kDomainLhsPerm = 3,
  kDomainLhsJitter = 4,
  kDomainSobolScramble = 5,
};

// Per-(step, particle, component) addressed normal deviates for the O-step.
// One substream per particle: evaluation order cannot reorder draws.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed,
                       std::uint32_t domain = kDomainAnnealNoise)
      : gen_(seed, domain) {}

  double normal(std::uint64_t step, std::uint32_t particle,
                std::uint32_t component) const {
    return rng_detail::to_normal(gen_.block(
        static_cast<std::uint32_t>(step),
        static_cast<std::uint32_t>(step >> 32), particle, component));
  }

 private:
  Philox4x32 gen_;
};

// Sequential adapter over the counter space for the seeded generators
// (LHS, i.i.d. sampling, scrambles). Deterministic per (seed, domain,
// substream).
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint32_t domain,
                std::uint32_t substream = 0)
      : gen_(seed, domain), substream_(substream) {}

  double uniform() {
    const auto b = next();
    return rng_detail::to_unit(b[0], b[1]);
  }

  double normal() { return rng_detail::to_normal(next()); }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t uniform_int(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      const auto b = next();
      const std::uint64_t w =
          static_cast<std::uint64_t>(b[0]) << 32 | b[1];
      if (w < limit) return w % bound;
    }
  }

 private:
  Philox4x32::Block next() {
    const std::uint64_t i = index_++;
    return gen_.block(static_cast<std::uint32_t>(i),
                      static_cast<std::uint32_t>(i >> 32), substream_, 0);
  }

  Philox4x32 gen_;
  std::uint64_t index_ = 0;
  std::uint32_t substream_;
};

}  // namespace heatquad

#endif  // HEATQUAD_RNG_HPP
