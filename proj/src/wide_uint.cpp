#include "coinswap/wide_uint.hpp"

#include <stdexcept>

namespace coinswap {

namespace detail {

namespace {

constexpr int kMaxNewtonSteps = 64;

}  // namespace

Reciprocal newton_reciprocal(const Word256& d, ReciprocalSeed seed) {
  if (!d.bit(255)) throw std::invalid_argument("reciprocal divisor must be normalized");

  Reciprocal out;
  UInt<5>& x = out.value;
  if (seed == ReciprocalSeed::kOneBit) {
    x = UInt<5>::pow2(256);
  } else {
    // t in [2^15, 2^16); d < (t+1)*2^240, so this seed never exceeds 2^512/d.
    const std::uint64_t top = d.limb(3) >> 48;
    const std::uint64_t s = (std::uint64_t{1} << 32) / (top + 1);
    x = wrapping_shl(UInt<5>{s}, 240);
  }

  // x stays below 2^512/d throughout: x(2 - d*x) <= 1/d, and truncation
  // only lowers it further.
  const UInt<9> one = UInt<9>::pow2(512);
  for (;;) {
    const UInt<9> err = one - mul_full(d, x);
    if (err.is_zero()) break;
    const UInt<5> inc = narrow<5>(drop_low_limbs<8>(mul_full(x, err)));
    if (inc.is_zero()) break;
    x = x + inc;
    if (++out.iterations > kMaxNewtonSteps) throw std::logic_error("reciprocal iteration diverged");
  }
  while (mul_full(d, x + UInt<5>{1}) <= one) {
    x = x + UInt<5>{1};
    ++out.corrections;
  }
  return out;
}

}  // namespace detail

DivMod256 divmod_512_by_256(const Word512& n, const Word256& d) {
  if (d.is_zero()) throw DivisionByZero();
  if (hi(n) >= d) throw OverflowError("quotient does not fit 256 bits");

  if (n < widen<8>(d)) return {Word256{}, lo(n)};

  // Fast path: both operands fit a 128-bit machine word.
  if (n.bit_length() <= 128) {
    const u128 nn = (static_cast<u128>(n.limb(1)) << 64) | n.limb(0);
    const u128 dd = (static_cast<u128>(d.limb(1)) << 64) | d.limb(0);
    const u128 q = nn / dd;
    const u128 r = nn % dd;
    return {Word256::from_limbs({static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(q >> 64), 0, 0}),
            Word256::from_limbs({static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(r >> 64), 0, 0})};
  }

  const unsigned shift = 256 - d.bit_length();
  const Word256 dn = wrapping_shl(d, shift);
  // n < d*2^256, so n*2^shift < dn*2^256 fits 512 bits.
  const Word512 nn = wrapping_shl(n, shift);

  const auto recip = detail::newton_reciprocal(dn, detail::ReciprocalSeed::kTopBits);
  // recip >= 2^512/dn - 1, so the estimate is at most one below the quotient.
  Word256 q = narrow<4>(drop_low_limbs<8>(mul_full(nn, recip.value)));
  Word512 r = nn - mul_full(q, dn);
  const Word512 dn_wide = widen<8>(dn);
  while (r >= dn_wide) {
    r = r - dn_wide;
    q = q + Word256{1};
  }
  return {q, narrow<4>(r) >> shift};
}

DivModWide divmod_wide(const Word512& n, const Word256& d) {
  if (d.is_zero()) throw DivisionByZero();
  const auto upper = divmod_512_by_256(widen<8>(hi(n)), d);
  const auto lower = divmod_512_by_256(make_word512(upper.remainder, lo(n)), d);
  return {make_word512(upper.quotient, lower.quotient), lower.remainder};
}

Word256 muldiv(const Word256& a, const Word256& b, const Word256& c) {
  return divmod_512_by_256(mul_wide(a, b), c).quotient;
}

Word256 muldiv_up(const Word256& a, const Word256& b, const Word256& c) {
  const auto [q, r] = divmod_512_by_256(mul_wide(a, b), c);
  return r.is_zero() ? q : q + Word256{1};
}

}  // namespace coinswap
