// Integer and fixed-point square roots by Babylonian (Newton) iteration.
#pragma once

#include <cstdint>
#include <vector>

#include "coinswap/wide_uint.hpp"

namespace coinswap {

// Records every iterate produced by a root computation, starting with the
// initial guess. Used by tests to check monotonicity and iteration bounds.
struct SqrtTrace {
  std::vector<Word512> iterates;

  // Number of Babylonian steps (iterates after the initial guess).
  int iterations() const noexcept {
    return iterates.empty() ? 0 : static_cast<int>(iterates.size()) - 1;
  }
};

// Upper bound on Babylonian steps for a radicand of the given bit length,
// starting from 2^ceil(bits/2). The guess is within a factor of two of the
// root, so the relative error is below 1/4 after one step and squares on
// every step after that; the final step only confirms the fixpoint.
constexpr int max_sqrt_iterations(unsigned radicand_bits) noexcept {
  int steps = 2;
  for (unsigned correct = 2; correct < radicand_bits / 2 + 1; correct *= 2) ++steps;
  return steps + 1;
}

// floor(sqrt(a))
Word256 isqrt256(const Word256& a, SqrtTrace* trace = nullptr);

// floor(sqrt(a)); the root of a 512-bit value always fits 256 bits.
Word256 isqrt512(const Word512& a, SqrtTrace* trace = nullptr);

// A square root truncated to frac_bits binary fractional digits:
// int_part + frac_part / 2^frac_bits.
struct FixedRoot {
  Word256 int_part;
  unsigned frac_bits = 0;
  std::uint64_t frac_part = 0;

  // The root scaled by 2^frac_bits: floor(sqrt(a) * 2^frac_bits).
  Word512 scaled() const;

  friend bool operator==(const FixedRoot&, const FixedRoot&) = default;
};

inline constexpr unsigned kMaxFracBits = 64;

// Correctly truncated fixed-point root. Throws std::invalid_argument when
// frac_bits > kMaxFracBits. One guard bit is carried internally.
FixedRoot sqrt_frac(const Word256& a, unsigned frac_bits, SqrtTrace* trace = nullptr);

}  // namespace coinswap
