#pragma once

#include <cstddef>
#include <cstdint>

namespace combandit {

// Counter-based random numbers. Every draw is a pure function of a 64-bit
// key and a 64-bit counter, so a loss sequence can be regenerated in any
// order and is identical across platforms (integer ops only, plus log/cos/
// sqrt in the Gaussian transform).
//
//   bits(key, c)     = mix(key ^ mix(c))             (SplitMix64 finalizer)
//   uniform(key, c)  = ((bits >> 11) + 0.5) / 2^53    in the open (0, 1)
//   gaussian(key, c) = sqrt(-2 ln u1) cos(2 pi u2)    u1 = uniform(key, 2c),
//                                                     u2 = uniform(key, 2c+1)

std::uint64_t mix64(std::uint64_t z);

std::uint64_t counter_bits(std::uint64_t key, std::uint64_t counter);
double counter_uniform(std::uint64_t key, std::uint64_t counter);
double counter_gaussian(std::uint64_t key, std::uint64_t counter);

// Derives an independent child key; distinct (tag, index) pairs give
// disjoint streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                          std::uint64_t index = 0);

// Sequential view over one counter stream.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return counter_bits(key_, counter_++); }
  double next_uniform() { return counter_uniform(key_, counter_++); }
  double next_gaussian() { return counter_gaussian(key_, counter_++); }

  // Unbiased integer in [0, bound); bound must be positive.
  std::size_t next_index(std::size_t bound);

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Stream tags, so that the same experiment seed never feeds two consumers.
namespace stream_tag {
inline constexpr std::uint64_t kOptimum = 0x6f7074;      // "opt"
inline constexpr std::uint64_t kNoise = 0x6e6f6973;      // "nois"
inline constexpr std::uint64_t kLearner = 0x6c726e;      // "lrn"
inline constexpr std::uint64_t kReplication = 0x726570;  // "rep"
inline constexpr std::uint64_t kAdversary = 0x616476;    // "adv"
}  // namespace stream_tag

}  // namespace combandit
