// Trade verification and quoting on a weighted circle, shared by both pair
// variants.
//
// A pair maps raw reserves (x0, x1) to weighted coordinates
//   U_i = weight_i * s_i,   s_i = 1000 * x_i
// and trades on the arc of (U0 - c)^2 + (U1 - c)^2 below the center c on
// both axes. The factor 1000 lets the 0.3% fee enter exactly: an input of
// dx contributes 997 * dx to s, not 1000 * dx.
//
// Circle pairs use weight_i = D_i * lambda_i * M with c = 10^37; flat pairs
// use weight_i = lambda_i with c = 10^30. Every check is an exact integer
// comparison; square roots are floor roots followed by the inequality that
// makes the floor exact.
#pragma once

#include <cstdint>

#include "coinswap/pair_params.hpp"
#include "coinswap/wide_uint.hpp"

namespace coinswap::geometry {

inline constexpr std::uint64_t kFeeScale = 1000;
inline constexpr std::uint64_t kFeeKeep = 997;

struct Circle {
  Word256 weight0;
  Word256 weight1;
  Word256 center;

  const Word256& weight(TokenIndex t) const noexcept { return t == TokenIndex::k0 ? weight0 : weight1; }
};

// weight * s, saturating at 2^256 - 1 (always above any center).
Word256 coordinate(const Word256& weight, const Word256& scaled);

// (u0 - c)^2 + (u1 - c)^2
Word512 residual(const Circle& circle, const Word256& u0, const Word256& u1);

// Residual at raw reserves.
Word512 reserve_residual(const Circle& circle, const Word256& x0, const Word256& x1);

// Largest output for an exact input; the output reserve never drops below
// one unit. Throws AmmError(kQuadrantViolation) if the input side would
// reach the center.
Word256 quote_out(const Circle& circle, TokenIndex in, const Word256& reserve_in, const Word256& reserve_out,
                  const Word256& amount_in);

// Smallest input that buys an exact output. Throws
// AmmError(kInsufficientOutputReserve) when the output cannot be bought
// inside the quadrant, kQuadrantViolation when the required input crosses
// the center.
Word256 quote_in(const Circle& circle, TokenIndex in, const Word256& reserve_in, const Word256& reserve_out,
                 const Word256& amount_out);

struct SwapAmounts {
  Word256 in0;
  Word256 in1;
  Word256 out0;
  Word256 out1;
};

// Post-trade acceptance test: the fee-adjusted balances must not lie
// farther from the center than the current reserves, and the actual
// balances must stay below the center. Throws AmmError on rejection.
void verify_swap(const Circle& circle, const Word256& reserve0, const Word256& reserve1, const SwapAmounts& amounts);

}  // namespace coinswap::geometry
