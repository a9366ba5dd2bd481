#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace scanlab {

/// SplitMix64 finalizer. Used to derive independent seeds from a master seed and indices.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for one unit of work (trial, truth cluster, grid point...) under a master seed.
/// Depends only on its arguments, so a parallel loop can seed trial `i` without
/// knowing how work is split across threads.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) noexcept {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ a);
  h = mix64(h ^ (b + 0x632BE59BD9B4E019ull));
  h = mix64(h ^ (c + 0x85157AF5D2A3B1C5ull));
  return h;
}

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based random stream: Philox4x32-10 keyed by a 64-bit seed, with a 64-bit
/// stream id in the upper counter words and a running block index in the lower ones.
///
/// Satisfies UniformRandomBitGenerator. The variate transforms below are implemented
/// here rather than taken from <random> so that draws are identical across standard
/// libraries:
///   - uniform():   53 high bits of one 64-bit output, mapped to the open interval (0,1);
///   - normal():    Box-Muller on two uniforms, the second deviate cached for the next call;
///   - poisson():   sequential inversion of the CDF (means below 30), normal-free;
///   - bernoulli(): uniform() < p.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  double uniform() noexcept;
  double normal() noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }
  std::uint64_t poisson(double mean);
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace scanlab
