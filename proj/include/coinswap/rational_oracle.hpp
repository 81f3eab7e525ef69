// Exact reference model in unbounded rationals. Quantities that involve a
// square root are carried as p + q*sqrt(s) and compared by squaring, so no
// approximation is ever stored.
//
// Units follow the market description: reserves in coins, circle center
// c = 10^9, radius^2 = r * 10^14, mu unscaled (M = 10^7 * mu).
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "coinswap/pair_params.hpp"
#include "coinswap/wide_uint.hpp"

namespace coinswap {
class CirclePair;
class FlatPair;
}  // namespace coinswap

namespace coinswap::oracle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt to_big(const Word256& w);
BigInt to_big(const Word512& w);
// Throws std::out_of_range for negative values or values of 2^256 and above.
Word256 to_word(const BigInt& v);

Rational pow10(unsigned k);

// p + q * sqrt(s), s >= 0.
struct Surd {
  Rational p;
  Rational q;
  Rational s;

  static Surd exact(const Rational& v) { return Surd{v, 0, 0}; }

  // Sign of (this - t).
  int compare(const Rational& t) const;

  BigInt floor() const;
  BigInt ceil() const;

  Surd operator-() const { return Surd{-p, -q, s}; }
  Surd operator+(const Rational& t) const { return Surd{p + t, q, s}; }
  Surd operator*(const Rational& t) const { return Surd{p * t, q * t, s}; }
  Surd reciprocal() const;

  // Sign of (a - b) for surds over the same radicand.
  friend int compare(const Surd& a, const Surd& b);

  double approx() const;
};

// Positive value rounded half-up to SigDecimal::kSignificantDigits digits.
SigDecimal round_sig(const Surd& value);

struct RationalState {
  Rational x;  // coins of token0
  Rational y;  // coins of token1
  Rational lambda0 = 1;
  Rational lambda1 = 1;
  Rational mu = 1;
  Rational center = 1'000'000'000;
  Rational radius_sq;  // r * 10^14; zero when not on a reference circle

  // (lambda0*mu*x - c)^2 + (lambda1*mu*y - c)^2
  Rational cost() const;
  Rational cost_at(const Rational& x1, const Rational& y1) const;
  bool on_circle() const { return cost() == radius_sq; }
};

// Output bought by amount_in on the level set through the current point;
// the input counts as (1 - fee) * amount_in. Throws std::domain_error when
// the input side crosses the center or the output would exceed the reserve.
Surd exact_swap(const RationalState& s, TokenIndex in, const Rational& amount_in, const Rational& fee);

// Input needed to buy amount_out; inverse of exact_swap.
Surd exact_amount_in(const RationalState& s, TokenIndex in, const Rational& amount_out, const Rational& fee);

// Smaller root of (lambda0*mu*x - c)^2 + (lambda1*mu*y - c)^2 = r * 10^14.
// Throws std::domain_error if that point is not below the center.
Surd exact_mu(const Rational& x, const Rational& y, const Rational& lambda0, const Rational& lambda1,
              std::uint32_t r);

// P_{y/x} = lambda0 * (c - lambda0*mu*x) / (lambda1 * (c - lambda1*mu*y))
Rational spot_price(const RationalState& s);

// Slope dy/dx of the level set through (x, y): -(lambda0*mu*x - c)*lambda0 / ((lambda1*mu*y - c)*lambda1)
Surd level_slope(const RationalState& s, const Surd& x, const Surd& y);

struct ExactBounds {
  Surd min_price;  // sqrt(r - 10000) / 100
  Surd max_price;  // 100 / sqrt(r - 10000)
};
ExactBounds exact_price_bounds(std::uint32_t r);

// Liquidity arithmetic without rounding.
struct ExactAdd {
  Rational amount1;
  Rational minted;
};
ExactAdd exact_add(const Rational& x0, const Rational& y0, const Rational& supply, const Rational& amount0);

struct ExactRemove {
  Rational amount0;
  Rational amount1;
};
ExactRemove exact_remove(const Rational& x0, const Rational& y0, const Rational& supply, const Rational& liquidity);

// supply * (mu0 - mu) / (5*mu0 + mu)
Rational exact_fee_mint(const Rational& supply, const Rational& mu0, const Rational& mu);

// 0.003 * supply * lambda_in * amount_in / value
Rational exact_flat_fee(const Rational& supply, const Rational& lambda_in, const Rational& amount_in,
                        const Rational& value);

// (lambda0*x0 + lambda1*y0) / 2
Rational exact_initial_supply(const Rational& lambda0, const Rational& x0, const Rational& lambda1,
                              const Rational& y0);

// Views of fixed-point pairs in oracle units. The circle pair's mu is taken
// from its stored M, so the level set is the one the pair actually trades on.
RationalState state_of(const CirclePair& p);
RationalState state_of(const FlatPair& p);

// The 0.3% trading fee.
Rational swap_fee();

// Exact swap results in raw units of the respective token.
Surd exact_out_raw(const CirclePair& p, TokenIndex in, const Word256& amount_in);
Surd exact_out_raw(const FlatPair& p, TokenIndex in, const Word256& amount_in);
Surd exact_in_raw(const CirclePair& p, TokenIndex in, const Word256& amount_out);
Surd exact_in_raw(const FlatPair& p, TokenIndex in, const Word256& amount_out);

// ceil(10^7 * mu) for the given raw reserves of a circle pair.
BigInt exact_scaled_mu(const CircleParams& circle, const Word256& reserve0, const Word256& reserve1);

}  // namespace coinswap::oracle
