#include "twoin1/rng.hpp"

#include "twoin1/normal.hpp"

namespace twoin1 {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> x,
                                           std::array<std::uint32_t, 2> key) {
  std::uint32_t k0 = key[0], k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x[2];
    std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return x;
}

void ReplicateRng::refill() {
  std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(replicate_),
      static_cast<std::uint32_t>(replicate_ >> 32),
      block_,
      0u,
  };
  std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                      static_cast<std::uint32_t>(seed_ >> 32)};
  buf_ = philox4x32_10(counter, key);
  ++block_;
  pos_ = 0;
}

std::uint64_t ReplicateRng::next_u64() {
  if (pos_ > 2) refill();
  std::uint64_t lo = buf_[pos_];
  std::uint64_t hi = buf_[pos_ + 1];
  pos_ += 2;
  return lo | (hi << 32);
}

double ReplicateRng::next_uniform() {
  // ((u >> 11) + 0.5) / 2^53 lies strictly inside (0, 1) by construction.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double ReplicateRng::next_normal() { return std_normal_quantile(next_uniform()); }

}  // namespace twoin1
