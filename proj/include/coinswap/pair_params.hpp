// Packed pair configuration, reserve words, weight derivation, token
// ordering and boundary-price analytics.
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "coinswap/wide_uint.hpp"

namespace coinswap {

enum class TokenIndex : std::uint8_t { k0 = 0, k1 = 1 };

constexpr TokenIndex other(TokenIndex t) noexcept {
  return t == TokenIndex::k0 ? TokenIndex::k1 : TokenIndex::k0;
}

inline constexpr std::uint32_t kRadiusBase = 10000;    // r = 10000 + r_square
inline constexpr std::uint32_t kMaxRSquare = 9999;
inline constexpr unsigned kReserveBits = 96;
inline constexpr unsigned kMuBits = 56;
inline constexpr unsigned kDecimalFactorBits = 56;
inline constexpr std::uint64_t kMuScale = 10'000'000;  // M = 10^7 * mu

// Circle configuration as stored on a pair, 224 bits when packed:
//   ico(8) | d0(56) | d1(56) | r_square(16) | lambda0(16) | lambda1(16) | mu(56)
struct CircleParams {
  std::uint8_t ico = 0;
  std::uint64_t d0 = 0;  // 10^(18 - decimals0)
  std::uint64_t d1 = 0;  // 10^(18 - decimals1)
  std::uint16_t r_square = 0;
  std::uint16_t lambda0 = 0;
  std::uint16_t lambda1 = 0;
  std::uint64_t mu = 0;  // M = 10^7 * mu

  std::uint32_t radius() const noexcept { return kRadiusBase + r_square; }

  friend bool operator==(const CircleParams&, const CircleParams&) = default;
};

// Throws AmmError(kFieldOverflow) if a 56-bit field is out of range.
Word256 pack_circle(const CircleParams& p);
// Throws AmmError(kFieldOverflow) if bits above 224 are set.
CircleParams unpack_circle(const Word256& w);

// Pair-level invariants: 1 <= r_square <= 9999, lambdas >= 1, D factors
// nonzero. Throws AmmError(kOutOfRange).
void validate_circle(const CircleParams& p);

// D = 10^(18 - decimals); decimals must be in [2, 18].
std::uint64_t decimals_factor(unsigned decimals);

struct PackedReserves {
  Word256 reserve0;
  Word256 reserve1;
  std::uint32_t block_timestamp_last = 0;

  friend bool operator==(const PackedReserves&, const PackedReserves&) = default;
};

// reserve0 * 2^128 + reserve1 * 2^32 + block_timestamp_last.
Word256 pack_reserves(const PackedReserves& r);
PackedReserves unpack_reserves(const Word256& w);

// True when v < 2^96.
inline bool fits_reserve(const Word256& v) noexcept { return v.bit_length() <= kReserveBits; }

// D_i * lambda_i * M for each token; each product is below 2^128.
struct WeightedReserves {
  Word256 w0;
  Word256 w1;
};
WeightedReserves weighted_reserves(const CircleParams& p);

// Weights with lambda_x * x ~ lambda_y * y, both within 16 bits.
struct LambdaPair {
  std::uint16_t lambda_x = 0;
  std::uint16_t lambda_y = 0;

  friend bool operator==(const LambdaPair&, const LambdaPair&) = default;
};
LambdaPair derive_lambdas(const Word256& x, const Word256& y);

// Router parameter: r_square * 2^32 + lambda0 * 2^16 + lambda1.
struct RouterCircle {
  std::uint16_t r_square = 0;
  std::uint16_t lambda0 = 0;
  std::uint16_t lambda1 = 0;

  friend bool operator==(const RouterCircle&, const RouterCircle&) = default;
};
Word256 router_circle_encoding(std::uint32_t r_square, std::uint32_t lambda0, std::uint32_t lambda1);
RouterCircle decode_router_circle(const Word256& w);

// 160-bit token address.
class TokenId {
 public:
  TokenId() = default;
  explicit TokenId(const Word256& v);

  static TokenId from_hex(std::string_view text);

  const Word256& value() const noexcept { return value_; }
  std::string to_hex() const { return value_.to_hex(); }

  friend bool operator==(const TokenId&, const TokenId&) = default;
  friend std::strong_ordering operator<=>(const TokenId& a, const TokenId& b) noexcept {
    return a.value_ <=> b.value_;
  }

 private:
  Word256 value_;
};

struct OrderedTokens {
  TokenId token0;
  TokenId token1;
  std::uint16_t lambda0 = 0;
  std::uint16_t lambda1 = 0;
  bool swapped = false;
};

// The smaller address becomes token0 and the weights follow their tokens.
OrderedTokens order_tokens(const TokenId& a, const TokenId& b, LambdaPair lambdas);

// A decimal with exactly kSignificantDigits significant digits:
// value = mantissa * 10^exponent.
struct SigDecimal {
  static constexpr unsigned kSignificantDigits = 10;

  std::uint64_t mantissa = 0;
  int exponent = 0;

  std::string to_string() const;
  double to_double() const;

  // Rounds floor(value * 10^scale_digits) half-up to kSignificantDigits.
  static SigDecimal round_scaled(const Word256& scaled, unsigned scale_digits);

  friend bool operator==(const SigDecimal&, const SigDecimal&) = default;
};

struct PriceBounds {
  static constexpr unsigned kScaleDigits = 30;

  SigDecimal min_price;
  SigDecimal max_price;
  Word256 min_scaled;  // floor(min * 10^30)
  Word256 max_scaled;  // floor(max * 10^30)
};

// Weighted price band of the circle with radius^2 = r * 10^14:
// max = 100 / sqrt(r - 10000), min = 1 / max. r must be in [10001, 19999].
PriceBounds price_bounds(std::uint32_t r);

}  // namespace coinswap
