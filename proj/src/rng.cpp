#include "combandit/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace combandit {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t counter_bits(std::uint64_t key, std::uint64_t counter) {
  return mix64(key ^ mix64(counter));
}

double counter_uniform(std::uint64_t key, std::uint64_t counter) {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(counter_bits(key, counter) >> 11) + 0.5) *
         kScale;
}

double counter_gaussian(std::uint64_t key, std::uint64_t counter) {
  const double u1 = counter_uniform(key, 2 * counter);
  const double u2 = counter_uniform(key, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                          std::uint64_t index) {
  return mix64(mix64(base ^ mix64(tag)) + index);
}

std::size_t RandomStream::next_index(std::size_t bound) {
  if (bound == 0) throw std::invalid_argument("next_index: bound must be > 0");
  const std::uint64_t b = bound;
  // Reject the low residue class so that r % b is exactly uniform.
  const std::uint64_t threshold = (0 - b) % b;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return static_cast<std::size_t>(r % b);
  }
}

}  // namespace combandit
