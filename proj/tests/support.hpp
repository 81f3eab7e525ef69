#pragma once

#include <cstdint>
#include <random>

#include "coinswap/rational_oracle.hpp"
#include "coinswap/wide_uint.hpp"

namespace coinswap::testing {

using oracle::BigInt;
using oracle::Rational;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed2024ULL);
  return gen;
}

inline std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng());
}

// Uniform over [0, 2^bits).
template <std::size_t N>
UInt<N> random_bits(unsigned bits) {
  UInt<N> v;
  for (std::size_t i = 0; i < N; ++i) v.limb(i) = rng()();
  return bits >= UInt<N>::kBits ? v : v & low_mask<N>(bits);
}

// Random bit length first, so small and large magnitudes are equally common.
template <std::size_t N>
UInt<N> random_word() {
  return random_bits<N>(static_cast<unsigned>(uniform(1, UInt<N>::kBits)));
}

// Uniform over [lo, hi] for moderate ranges.
inline Word256 random_between(const Word256& lo, const Word256& hi) {
  const BigInt span = oracle::to_big(hi) - oracle::to_big(lo) + 1;
  const BigInt r = oracle::to_big(random_bits<4>(256)) % span;
  return oracle::to_word(oracle::to_big(lo) + r);
}

inline Word256 w(const char* decimal) { return Word256::from_decimal(decimal); }

inline BigInt big(const Word256& v) { return oracle::to_big(v); }
inline BigInt big(const Word512& v) { return oracle::to_big(v); }

}  // namespace coinswap::testing
