#include "coinswap/root_math.hpp"

#include <stdexcept>

namespace coinswap {

namespace {

// (2^256 - 1)^2: beyond this the floor root is 2^256 - 1 and the
// Babylonian divisor would need 257 bits.
const Word512 kLargestSquare = mul_wide(Word256::max(), Word256::max());

Word512 initial_guess(const Word512& a) {
  const unsigned half = (a.bit_length() + 1) / 2;
  if (half >= 256) return widen<8>(Word256::max());
  return Word512::pow2(half);
}

// Babylonian iteration x <- (x + a/x) / 2 from a guess at or above the root.
// The iterates strictly decrease until they reach floor(sqrt(a)); the first
// non-decreasing step marks the fixpoint.
Word256 babylonian(const Word512& a, SqrtTrace* trace) {
  if (a.is_zero()) {
    if (trace) trace->iterates.push_back(Word512{});
    return Word256{};
  }
  if (a >= kLargestSquare) {
    if (trace) trace->iterates.push_back(widen<8>(Word256::max()));
    return Word256::max();
  }

  Word512 x = initial_guess(a);
  if (trace) trace->iterates.push_back(x);
  for (;;) {
    const Word512 q = divmod_wide(a, narrow<4>(x)).quotient;
    const Word512 next = (x + q) >> 1;
    if (trace) trace->iterates.push_back(next);
    if (next >= x) break;
    x = next;
  }

  // Floor correction; a no-op when the iteration behaved as proven.
  Word256 root = narrow<4>(x);
  while (mul_wide(root, root) > a) root = root - Word256{1};
  while (root != Word256::max() && mul_wide(root + Word256{1}, root + Word256{1}) <= a)
    root = root + Word256{1};
  return root;
}

}  // namespace

Word256 isqrt256(const Word256& a, SqrtTrace* trace) { return babylonian(widen<8>(a), trace); }

Word256 isqrt512(const Word512& a, SqrtTrace* trace) { return babylonian(a, trace); }

Word512 FixedRoot::scaled() const {
  return wrapping_shl(widen<8>(int_part), frac_bits) | Word512{frac_part};
}

FixedRoot sqrt_frac(const Word256& a, unsigned frac_bits, SqrtTrace* trace) {
  if (frac_bits > kMaxFracBits) throw std::invalid_argument("sqrt_frac supports at most 64 fractional bits");

  // floor(sqrt(a * 4^(f+1))) = floor(sqrt(a) * 2^(f+1)); dropping the guard
  // bit afterwards gives floor(sqrt(a) * 2^f).
  const unsigned guard = frac_bits + 1;
  const Word512 radicand = wrapping_shl(widen<8>(a), 2 * guard);
  const Word256 root = isqrt512(radicand, trace) >> 1;

  FixedRoot out;
  out.frac_bits = frac_bits;
  out.int_part = root >> frac_bits;
  out.frac_part = frac_bits == 0 ? 0 : (root & low_mask<4>(frac_bits)).limb(0);
  return out;
}

}  // namespace coinswap
