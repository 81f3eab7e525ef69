// Fixed-width unsigned integers for market math.
//
// UInt<N> is an N-limb (64 bits per limb, little-endian limb order) unsigned
// integer with value semantics. The arithmetic operators are checked: a
// result that does not fit raises OverflowError, a zero divisor raises
// DivisionByZero. The wrapping_* helpers exist for the few places that want
// modular arithmetic (the cumulative price accumulator, timestamps).
//
// Division is built around a single primitive, divmod_512_by_256, which uses
// a Newton iteration for the divisor reciprocal followed by one exact
// correction step.
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <stdexcept>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "coinswap/errors.hpp"

namespace coinswap {

__extension__ typedef unsigned __int128 u128;

template <std::size_t N>
class UInt {
  static_assert(N >= 1);

 public:
  static constexpr std::size_t kLimbs = N;
  static constexpr unsigned kBits = 64 * N;

  constexpr UInt() noexcept = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  constexpr UInt(std::uint64_t v) noexcept { limbs_[0] = v; }

  static constexpr UInt from_limbs(const std::array<std::uint64_t, N>& l) noexcept {
    UInt r;
    r.limbs_ = l;
    return r;
  }

  static constexpr UInt pow2(unsigned k) {
    if (k >= kBits) throw OverflowError("pow2 exponent out of range");
    UInt r;
    r.limbs_[k / 64] = std::uint64_t{1} << (k % 64);
    return r;
  }

  static UInt pow10(unsigned k);

  static constexpr UInt max() noexcept {
    UInt r;
    for (auto& l : r.limbs_) l = ~std::uint64_t{0};
    return r;
  }

  // Parses an unsigned decimal string (digits only, no sign, no separators).
  static UInt from_decimal(std::string_view text);

  constexpr std::uint64_t limb(std::size_t i) const noexcept { return limbs_[i]; }
  constexpr std::uint64_t& limb(std::size_t i) noexcept { return limbs_[i]; }
  constexpr const std::array<std::uint64_t, N>& limbs() const noexcept { return limbs_; }

  constexpr bool is_zero() const noexcept {
    for (auto l : limbs_)
      if (l != 0) return false;
    return true;
  }

  constexpr unsigned bit_length() const noexcept {
    for (std::size_t i = N; i-- > 0;)
      if (limbs_[i] != 0)
        return static_cast<unsigned>(64 * i + 64 - std::countl_zero(limbs_[i]));
    return 0;
  }

  constexpr bool bit(unsigned i) const noexcept {
    return i < kBits && ((limbs_[i / 64] >> (i % 64)) & 1U) != 0;
  }

  constexpr bool fits_u64() const noexcept { return bit_length() <= 64; }

  std::uint64_t to_u64() const {
    if (!fits_u64()) throw OverflowError("value does not fit 64 bits");
    return limbs_[0];
  }

  std::string to_decimal() const;
  std::string to_hex() const;

  friend constexpr bool operator==(const UInt&, const UInt&) noexcept = default;
  friend constexpr std::strong_ordering operator<=>(const UInt& a, const UInt& b) noexcept {
    for (std::size_t i = N; i-- > 0;) {
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
    }
    return std::strong_ordering::equal;
  }

 private:
  std::array<std::uint64_t, N> limbs_{};
};

using Word256 = UInt<4>;
using Word512 = UInt<8>;

// ---------------------------------------------------------------------------
// Width conversion

template <std::size_t M, std::size_t N>
constexpr UInt<M> widen(const UInt<N>& a) noexcept {
  static_assert(M >= N);
  UInt<M> r;
  for (std::size_t i = 0; i < N; ++i) r.limb(i) = a.limb(i);
  return r;
}

// Throws OverflowError if the value does not fit M limbs.
template <std::size_t M, std::size_t N>
constexpr UInt<M> narrow(const UInt<N>& a) {
  static_assert(M <= N);
  for (std::size_t i = M; i < N; ++i)
    if (a.limb(i) != 0) throw OverflowError("narrowing loses bits");
  UInt<M> r;
  for (std::size_t i = 0; i < M; ++i) r.limb(i) = a.limb(i);
  return r;
}

// Drops the low K limbs (exact division by 2^(64K)).
template <std::size_t K, std::size_t N>
constexpr UInt<N - K> drop_low_limbs(const UInt<N>& a) noexcept {
  static_assert(K < N);
  UInt<N - K> r;
  for (std::size_t i = K; i < N; ++i) r.limb(i - K) = a.limb(i);
  return r;
}

inline constexpr Word256 hi(const Word512& w) noexcept { return drop_low_limbs<4>(w); }
inline constexpr Word256 lo(const Word512& w) noexcept {
  Word256 r;
  for (std::size_t i = 0; i < 4; ++i) r.limb(i) = w.limb(i);
  return r;
}
inline constexpr Word512 make_word512(const Word256& high, const Word256& low) noexcept {
  Word512 r;
  for (std::size_t i = 0; i < 4; ++i) {
    r.limb(i) = low.limb(i);
    r.limb(i + 4) = high.limb(i);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Addition / subtraction

template <std::size_t N>
constexpr std::pair<UInt<N>, bool> overflowing_add(const UInt<N>& a, const UInt<N>& b) noexcept {
  UInt<N> r;
  u128 carry = 0;
  for (std::size_t i = 0; i < N; ++i) {
    u128 s = static_cast<u128>(a.limb(i)) + b.limb(i) + carry;
    r.limb(i) = static_cast<std::uint64_t>(s);
    carry = s >> 64;
  }
  return {r, carry != 0};
}

template <std::size_t N>
constexpr std::pair<UInt<N>, bool> overflowing_sub(const UInt<N>& a, const UInt<N>& b) noexcept {
  UInt<N> r;
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < N; ++i) {
    std::uint64_t ai = a.limb(i);
    std::uint64_t bi = b.limb(i);
    std::uint64_t d = ai - bi - borrow;
    borrow = (ai < bi || (ai == bi && borrow != 0)) ? 1 : 0;
    r.limb(i) = d;
  }
  return {r, borrow != 0};
}

template <std::size_t N>
constexpr UInt<N> wrapping_add(const UInt<N>& a, const UInt<N>& b) noexcept {
  return overflowing_add(a, b).first;
}

template <std::size_t N>
constexpr UInt<N> wrapping_sub(const UInt<N>& a, const UInt<N>& b) noexcept {
  return overflowing_sub(a, b).first;
}

template <std::size_t N>
constexpr UInt<N> operator+(const UInt<N>& a, const UInt<N>& b) {
  auto [r, over] = overflowing_add(a, b);
  if (over) throw OverflowError("addition overflow");
  return r;
}

template <std::size_t N>
constexpr UInt<N> operator-(const UInt<N>& a, const UInt<N>& b) {
  auto [r, under] = overflowing_sub(a, b);
  if (under) throw OverflowError("subtraction underflow");
  return r;
}

template <std::size_t N>
constexpr UInt<N>& operator+=(UInt<N>& a, const UInt<N>& b) {
  return a = a + b;
}

template <std::size_t N>
constexpr UInt<N>& operator-=(UInt<N>& a, const UInt<N>& b) {
  return a = a - b;
}

// |a - b|
template <std::size_t N>
constexpr UInt<N> abs_diff(const UInt<N>& a, const UInt<N>& b) noexcept {
  return a >= b ? wrapping_sub(a, b) : wrapping_sub(b, a);
}

// ---------------------------------------------------------------------------
// Multiplication

// Exact product; never overflows.
template <std::size_t A, std::size_t B>
constexpr UInt<A + B> mul_full(const UInt<A>& a, const UInt<B>& b) noexcept {
  UInt<A + B> r;
  for (std::size_t i = 0; i < A; ++i) {
    if (a.limb(i) == 0) continue;
    u128 carry = 0;
    for (std::size_t j = 0; j < B; ++j) {
      u128 t = static_cast<u128>(a.limb(i)) * b.limb(j) + r.limb(i + j) + carry;
      r.limb(i + j) = static_cast<std::uint64_t>(t);
      carry = t >> 64;
    }
    r.limb(i + B) = static_cast<std::uint64_t>(carry);
  }
  return r;
}

inline constexpr Word512 mul_wide(const Word256& a, const Word256& b) noexcept {
  return mul_full(a, b);
}

template <std::size_t N>
constexpr UInt<N> wrapping_mul(const UInt<N>& a, const UInt<N>& b) noexcept {
  auto full = mul_full(a, b);
  UInt<N> r;
  for (std::size_t i = 0; i < N; ++i) r.limb(i) = full.limb(i);
  return r;
}

template <std::size_t N>
constexpr UInt<N> operator*(const UInt<N>& a, const UInt<N>& b) {
  auto full = mul_full(a, b);
  for (std::size_t i = N; i < 2 * N; ++i)
    if (full.limb(i) != 0) throw OverflowError("multiplication overflow");
  return narrow<N>(full);
}

template <std::size_t N>
constexpr UInt<N>& operator*=(UInt<N>& a, const UInt<N>& b) {
  return a = a * b;
}

// ---------------------------------------------------------------------------
// Shifts and bitwise ops

template <std::size_t N>
constexpr UInt<N> wrapping_shl(const UInt<N>& a, unsigned k) noexcept {
  UInt<N> r;
  if (k >= UInt<N>::kBits) return r;
  const std::size_t limb_shift = k / 64;
  const unsigned bit_shift = k % 64;
  for (std::size_t i = N; i-- > limb_shift;) {
    std::uint64_t v = a.limb(i - limb_shift) << bit_shift;
    if (bit_shift != 0 && i - limb_shift >= 1)
      v |= a.limb(i - limb_shift - 1) >> (64 - bit_shift);
    r.limb(i) = v;
  }
  return r;
}

template <std::size_t N>
constexpr UInt<N> operator>>(const UInt<N>& a, unsigned k) noexcept {
  UInt<N> r;
  if (k >= UInt<N>::kBits) return r;
  const std::size_t limb_shift = k / 64;
  const unsigned bit_shift = k % 64;
  for (std::size_t i = 0; i + limb_shift < N; ++i) {
    std::uint64_t v = a.limb(i + limb_shift) >> bit_shift;
    if (bit_shift != 0 && i + limb_shift + 1 < N)
      v |= a.limb(i + limb_shift + 1) << (64 - bit_shift);
    r.limb(i) = v;
  }
  return r;
}

// Checked: throws if any set bit would be shifted out.
template <std::size_t N>
constexpr UInt<N> operator<<(const UInt<N>& a, unsigned k) {
  if (!a.is_zero() && a.bit_length() + k > UInt<N>::kBits)
    throw OverflowError("left shift overflow");
  return wrapping_shl(a, k);
}

template <std::size_t N>
constexpr UInt<N> operator&(const UInt<N>& a, const UInt<N>& b) noexcept {
  UInt<N> r;
  for (std::size_t i = 0; i < N; ++i) r.limb(i) = a.limb(i) & b.limb(i);
  return r;
}

template <std::size_t N>
constexpr UInt<N> operator|(const UInt<N>& a, const UInt<N>& b) noexcept {
  UInt<N> r;
  for (std::size_t i = 0; i < N; ++i) r.limb(i) = a.limb(i) | b.limb(i);
  return r;
}

// Low k bits set.
template <std::size_t N>
constexpr UInt<N> low_mask(unsigned k) noexcept {
  UInt<N> r;
  for (unsigned i = 0; i < k && i < UInt<N>::kBits; ++i) r.limb(i / 64) |= std::uint64_t{1} << (i % 64);
  return r;
}

// ---------------------------------------------------------------------------
// Division

// Single-limb divisor; used for decimal conversion.
template <std::size_t N>
constexpr std::pair<UInt<N>, std::uint64_t> divmod_small(const UInt<N>& a, std::uint64_t d) {
  if (d == 0) throw DivisionByZero();
  UInt<N> q;
  u128 rem = 0;
  for (std::size_t i = N; i-- > 0;) {
    u128 cur = (rem << 64) | a.limb(i);
    q.limb(i) = static_cast<std::uint64_t>(cur / d);
    rem = cur % d;
  }
  return {q, static_cast<std::uint64_t>(rem)};
}

struct DivMod256 {
  Word256 quotient;
  Word256 remainder;
};

// n = q*d + r with 0 <= r < d. Requires d != 0 and floor(n/d) < 2^256.
DivMod256 divmod_512_by_256(const Word512& n, const Word256& d);

// Full-width variant: the quotient may need up to 512 bits.
struct DivModWide {
  Word512 quotient;
  Word256 remainder;
};
DivModWide divmod_wide(const Word512& n, const Word256& d);

// floor(a*b/c) with a 512-bit intermediate.
Word256 muldiv(const Word256& a, const Word256& b, const Word256& c);

// ceil(a*b/c) with a 512-bit intermediate.
Word256 muldiv_up(const Word256& a, const Word256& b, const Word256& c);

inline Word256 operator/(const Word256& a, const Word256& b) {
  return divmod_512_by_256(widen<8>(a), b).quotient;
}

inline Word256 operator%(const Word256& a, const Word256& b) {
  return divmod_512_by_256(widen<8>(a), b).remainder;
}

inline Word256 div_ceil(const Word256& a, const Word256& b) {
  auto [q, r] = divmod_512_by_256(widen<8>(a), b);
  return r.is_zero() ? q : q + Word256{1};
}

namespace detail {

enum class ReciprocalSeed {
  kOneBit,   // 2^256: one correct bit for any normalized divisor
  kTopBits,  // from the top 16 bits of the divisor
};

struct Reciprocal {
  UInt<5> value;        // floor(2^512 / d)
  int iterations = 0;   // Newton steps taken
  int corrections = 0;  // unit increments after the iteration stalled
};

// d must be normalized (bit 255 set).
Reciprocal newton_reciprocal(const Word256& d, ReciprocalSeed seed);

}  // namespace detail

// ---------------------------------------------------------------------------
// Decimal / hex conversion (template definitions)

template <std::size_t N>
UInt<N> UInt<N>::pow10(unsigned k) {
  UInt r{1};
  const UInt ten{10};
  for (unsigned i = 0; i < k; ++i) r = r * ten;
  return r;
}

template <std::size_t N>
UInt<N> UInt<N>::from_decimal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty decimal string");
  UInt r;
  constexpr std::uint64_t kChunkScale = 10'000'000'000'000'000'000ULL;  // 10^19
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t len = std::min<std::size_t>(19, text.size() - pos);
    std::uint64_t chunk = 0;
    std::uint64_t scale = 1;
    for (std::size_t i = 0; i < len; ++i) {
      const char c = text[pos + i];
      if (c < '0' || c > '9')
        throw std::invalid_argument("invalid decimal digit in '" + std::string(text) + "'");
      chunk = chunk * 10 + static_cast<std::uint64_t>(c - '0');
      scale *= 10;
    }
    r = r * UInt(len == 19 ? kChunkScale : scale) + UInt(chunk);
    pos += len;
  }
  return r;
}

template <std::size_t N>
std::string UInt<N>::to_decimal() const {
  if (is_zero()) return "0";
  constexpr std::uint64_t kChunkScale = 10'000'000'000'000'000'000ULL;
  std::string out;
  UInt cur = *this;
  while (!cur.is_zero()) {
    auto [q, rem] = divmod_small(cur, kChunkScale);
    std::string part = std::to_string(rem);
    if (!q.is_zero()) part.insert(0, 19 - part.size(), '0');
    out.insert(0, part);
    cur = q;
  }
  return out;
}

template <std::size_t N>
std::string UInt<N>::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  if (is_zero()) return "0x0";
  std::string out;
  const unsigned nibbles = (bit_length() + 3) / 4;
  for (unsigned i = nibbles; i-- > 0;) {
    out.push_back(kDigits[(limbs_[i / 16] >> (4 * (i % 16))) & 0xF]);
  }
  return "0x" + out;
}

}  // namespace coinswap
