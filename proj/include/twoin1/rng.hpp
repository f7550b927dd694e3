#pragma once

#include <array>
#include <cstdint>

namespace twoin1 {

// Philox4x32-10 block cipher (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Counter-based: each (counter, key) pair yields an
// independent 128-bit block, so replicate streams need no shared state.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Stream of variates for one replicate, keyed by (seed, replicate index).
// Identical (seed, replicate) gives the identical sequence regardless of
// which worker consumes it.
class ReplicateRng {
 public:
  ReplicateRng(std::uint64_t seed, std::uint64_t replicate)
      : seed_(seed), replicate_(replicate) {}

  std::uint64_t next_u64();
  // Uniform on (0, 1), endpoints excluded.
  double next_uniform();
  // Standard normal via the inverse cdf.
  double next_normal();

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t replicate_;
  std::uint32_t block_ = 0;
  int pos_ = 4;  // buffer exhausted
  std::array<std::uint32_t, 4> buf_{};
};

}  // namespace twoin1
