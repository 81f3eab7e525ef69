#include "coinswap/pair_params.hpp"

#include <algorithm>
#include <cmath>

#include "coinswap/root_math.hpp"

namespace coinswap {

namespace {

constexpr unsigned kMuShift = 0;
constexpr unsigned kLambda1Shift = 56;
constexpr unsigned kLambda0Shift = 72;
constexpr unsigned kRSquareShift = 88;
constexpr unsigned kD1Shift = 104;
constexpr unsigned kD0Shift = 160;
constexpr unsigned kIcoShift = 216;

constexpr std::uint64_t kMask56 = (std::uint64_t{1} << 56) - 1;

std::uint64_t field(const Word256& w, unsigned shift, unsigned bits) {
  return (w >> shift).limb(0) & (bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1);
}

void require_56(std::uint64_t v, const char* name) {
  if (v > kMask56) throw AmmError(AmmErrc::kFieldOverflow, std::string(name) + " exceeds 56 bits");
}

Word256 gcd(Word256 a, Word256 b) {
  while (!b.is_zero()) {
    Word256 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Word256 pack_circle(const CircleParams& p) {
  require_56(p.d0, "d0");
  require_56(p.d1, "d1");
  require_56(p.mu, "mu");
  return wrapping_shl(Word256{p.ico}, kIcoShift) | wrapping_shl(Word256{p.d0}, kD0Shift) |
         wrapping_shl(Word256{p.d1}, kD1Shift) | wrapping_shl(Word256{p.r_square}, kRSquareShift) |
         wrapping_shl(Word256{p.lambda0}, kLambda0Shift) | wrapping_shl(Word256{p.lambda1}, kLambda1Shift) |
         wrapping_shl(Word256{p.mu}, kMuShift);
}

CircleParams unpack_circle(const Word256& w) {
  if (w.bit_length() > 224) throw AmmError(AmmErrc::kFieldOverflow, "circle word exceeds 224 bits");
  CircleParams p;
  p.ico = static_cast<std::uint8_t>(field(w, kIcoShift, 8));
  p.d0 = field(w, kD0Shift, 56);
  p.d1 = field(w, kD1Shift, 56);
  p.r_square = static_cast<std::uint16_t>(field(w, kRSquareShift, 16));
  p.lambda0 = static_cast<std::uint16_t>(field(w, kLambda0Shift, 16));
  p.lambda1 = static_cast<std::uint16_t>(field(w, kLambda1Shift, 16));
  p.mu = field(w, kMuShift, 56);
  return p;
}

void validate_circle(const CircleParams& p) {
  if (p.r_square < 1 || p.r_square > kMaxRSquare)
    throw AmmError(AmmErrc::kOutOfRange, "r_square must be in [1, 9999]");
  if (p.lambda0 == 0 || p.lambda1 == 0) throw AmmError(AmmErrc::kOutOfRange, "lambda weights must be positive");
  if (p.d0 == 0 || p.d1 == 0) throw AmmError(AmmErrc::kOutOfRange, "decimal factors must be positive");
  require_56(p.d0, "d0");
  require_56(p.d1, "d1");
  require_56(p.mu, "mu");
}

std::uint64_t decimals_factor(unsigned decimals) {
  if (decimals < 2 || decimals > 18) throw AmmError(AmmErrc::kOutOfRange, "token decimals must be in [2, 18]");
  std::uint64_t d = 1;
  for (unsigned i = decimals; i < 18; ++i) d *= 10;
  return d;
}

Word256 pack_reserves(const PackedReserves& r) {
  if (!fits_reserve(r.reserve0) || !fits_reserve(r.reserve1))
    throw AmmError(AmmErrc::kReserveOverflow, "reserve exceeds 96 bits");
  return wrapping_shl(r.reserve0, 128) | wrapping_shl(r.reserve1, 32) | Word256{r.block_timestamp_last};
}

PackedReserves unpack_reserves(const Word256& w) {
  if (w.bit_length() > 224) throw AmmError(AmmErrc::kFieldOverflow, "reserve word exceeds 224 bits");
  const Word256 mask96 = low_mask<4>(96);
  PackedReserves r;
  r.reserve0 = (w >> 128) & mask96;
  r.reserve1 = (w >> 32) & mask96;
  r.block_timestamp_last = static_cast<std::uint32_t>(w.limb(0) & 0xFFFF'FFFFULL);
  return r;
}

WeightedReserves weighted_reserves(const CircleParams& p) {
  const Word256 mu{p.mu};
  return {Word256{p.d0} * Word256{p.lambda0} * mu, Word256{p.d1} * Word256{p.lambda1} * mu};
}

LambdaPair derive_lambdas(const Word256& x, const Word256& y) {
  if (x.is_zero() || y.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "lambda derivation needs positive amounts");

  const Word256 g = gcd(x, y);
  const Word256 xr = x / g;
  const Word256 yr = y / g;

  // Keep the top 16 significant bits of both values at a shared exponent.
  const unsigned bits = std::max(xr.bit_length(), yr.bit_length());
  const unsigned shift = bits > 16 ? bits - 16 : 0;
  Word256 lx = std::max(yr >> shift, Word256{1});
  Word256 ly = std::max(xr >> shift, Word256{1});

  const Word256 g2 = gcd(lx, ly);
  lx = lx / g2;
  ly = ly / g2;
  return {static_cast<std::uint16_t>(lx.to_u64()), static_cast<std::uint16_t>(ly.to_u64())};
}

Word256 router_circle_encoding(std::uint32_t r_square, std::uint32_t lambda0, std::uint32_t lambda1) {
  if (r_square > 0xFFFF || lambda0 > 0xFFFF || lambda1 > 0xFFFF)
    throw AmmError(AmmErrc::kFieldOverflow, "router circle fields are 16 bits");
  return Word256{(std::uint64_t{r_square} << 32) | (std::uint64_t{lambda0} << 16) | lambda1};
}

RouterCircle decode_router_circle(const Word256& w) {
  if (w.bit_length() > 48) throw AmmError(AmmErrc::kFieldOverflow, "router circle exceeds 48 bits");
  const std::uint64_t v = w.limb(0);
  return {static_cast<std::uint16_t>(v >> 32), static_cast<std::uint16_t>(v >> 16),
          static_cast<std::uint16_t>(v)};
}

TokenId::TokenId(const Word256& v) : value_(v) {
  if (v.bit_length() > 160) throw AmmError(AmmErrc::kOutOfRange, "token id exceeds 160 bits");
}

TokenId TokenId::from_hex(std::string_view text) {
  if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
  if (text.empty() || text.size() > 40) throw AmmError(AmmErrc::kOutOfRange, "token id must be 1..40 hex digits");
  Word256 v;
  for (char c : text) {
    unsigned digit = 0;
    if (c >= '0' && c <= '9') digit = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') digit = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') digit = static_cast<unsigned>(c - 'A' + 10);
    else throw AmmError(AmmErrc::kOutOfRange, "invalid hex digit in token id");
    v = wrapping_shl(v, 4) | Word256{digit};
  }
  return TokenId(v);
}

OrderedTokens order_tokens(const TokenId& a, const TokenId& b, LambdaPair lambdas) {
  if (a == b) throw AmmError(AmmErrc::kIdenticalTokens, "pair tokens must differ");
  if (a < b) return {a, b, lambdas.lambda_x, lambdas.lambda_y, false};
  return {b, a, lambdas.lambda_y, lambdas.lambda_x, true};
}

SigDecimal SigDecimal::round_scaled(const Word256& scaled, unsigned scale_digits) {
  const std::string digits = scaled.to_decimal();
  SigDecimal out;
  if (scaled.is_zero()) return out;
  const int n = static_cast<int>(digits.size());
  constexpr int kSig = static_cast<int>(kSignificantDigits);
  if (n <= kSig) {
    out.mantissa = scaled.to_u64();
    for (int i = n; i < kSig; ++i) out.mantissa *= 10;
    out.exponent = -static_cast<int>(scale_digits) - (kSig - n);
    return out;
  }
  out.mantissa = std::stoull(digits.substr(0, kSig));
  out.exponent = n - kSig - static_cast<int>(scale_digits);
  if (digits[kSig] >= '5') {
    ++out.mantissa;
    if (out.mantissa == 10'000'000'000ULL) {
      out.mantissa /= 10;
      ++out.exponent;
    }
  }
  return out;
}

std::string SigDecimal::to_string() const {
  if (mantissa == 0) return "0";
  const std::string m = std::to_string(mantissa);
  const int len = static_cast<int>(m.size());
  if (exponent >= 0) return m + std::string(static_cast<std::size_t>(exponent), '0');
  const int int_digits = len + exponent;
  if (int_digits > 0)
    return m.substr(0, static_cast<std::size_t>(int_digits)) + "." + m.substr(static_cast<std::size_t>(int_digits));
  return "0." + std::string(static_cast<std::size_t>(-int_digits), '0') + m;
}

double SigDecimal::to_double() const {
  return static_cast<double>(mantissa) * std::pow(10.0, exponent);
}

PriceBounds price_bounds(std::uint32_t r) {
  if (r <= kRadiusBase || r > kRadiusBase + kMaxRSquare)
    throw AmmError(AmmErrc::kOutOfRange, "r must be in [10001, 19999]");
  const Word256 k{r - kRadiusBase};

  PriceBounds out;
  // min * 10^30 = sqrt(k) * 10^28 = sqrt(k * 10^56)
  out.min_scaled = isqrt256(k * Word256::pow10(56));
  // max * 10^30 = 10^32 / sqrt(k) = sqrt(10^64 / k); flooring the radicand
  // first does not change the floor of the root.
  out.max_scaled = isqrt256(Word256::pow10(64) / k);
  out.min_price = SigDecimal::round_scaled(out.min_scaled, PriceBounds::kScaleDigits);
  out.max_price = SigDecimal::round_scaled(out.max_scaled, PriceBounds::kScaleDigits);
  return out;
}

}  // namespace coinswap
