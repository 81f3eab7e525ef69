// Constant-circle pair with a multiplicative scaling variable.
//
// Reserves are raw token units (at most 96 bits). Internally each token is
// normalized to 18 decimals by its factor D_i, weighted by lambda_i and
// scaled by M = 10^7 * mu, so the pair trades on
//
//   (M*lambda0*X*10^3 - 10^37)^2 + (M*lambda1*Y*10^3 - 10^37)^2 <= r * 10^70
//
// with X = D0 * reserve0, Y = D1 * reserve1 and r = 10000 + r_square. The
// point stays below the center on both axes. M is refreshed only on
// liquidity events, fee collection and skim; swaps leave it alone, so the
// point drifts inside the circle as fees accrue.
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "coinswap/liquidity_ledger.hpp"
#include "coinswap/pair_params.hpp"
#include "coinswap/swap_geometry.hpp"
#include "coinswap/wide_uint.hpp"

namespace coinswap {

// Center of the circle in M * (lambda * X) units: 10^9 coins * 10^25.
const Word256& mu_center();

// Circle center in swap coordinates (M * lambda * X * 10^3).
const Word256& circle_center();

// Minimum deposit per side at establishment, in 18-decimal base units.
inline constexpr std::uint64_t kOneCoin = 1'000'000'000'000'000'000ULL;

// Fixed-point scale of the cumulative price accumulator.
inline constexpr unsigned kPriceFracBits = 112;

// Smallest M with (M*a - 10^34)^2 + (M*b - 10^34)^2 <= r * 10^64, where
// a = lambda0 * X and b = lambda1 * Y in 18-decimal base units. That M is
// the ceiling of the lower root and places the point on the lower-left arc.
// Throws AmmError(kMuUnsatisfiable) when no such M keeps both weighted
// coordinates below the center, kZeroAmount when a = b = 0.
Word256 solve_mu(const Word256& a, const Word256& b, std::uint32_t r);

// Verification side: M is on or inside the circle, below the center on
// both axes, and M - 1 lies outside.
bool mu_is_minimal(const Word256& a, const Word256& b, std::uint32_t r, const Word256& m);

// solve_mu for 18-decimal tokens.
Word256 revise_mu(const Word256& x, const Word256& y, std::uint16_t lambda0, std::uint16_t lambda1,
                  std::uint32_t r);

// P_{y/x} = num / den, in raw token1 units per raw token0 unit.
struct Price {
  Word256 num;
  Word256 den;

  // floor(num * 2^frac_bits / den)
  Word256 to_fixed(unsigned frac_bits = kPriceFracBits) const;
};

Price spot_price(const CircleParams& circle, const Word256& reserve0, const Word256& reserve1);

struct PairConfig {
  std::uint8_t ico = 0;
  unsigned decimals0 = 18;
  unsigned decimals1 = 18;
  std::uint16_t r_square = 6000;
  std::uint16_t lambda0 = 1;
  std::uint16_t lambda1 = 1;
};

struct SwapQuote {
  TokenIndex token_in = TokenIndex::k0;
  Word256 amount_in;
  Word256 fee_amount;  // amount_in - floor(997 * amount_in / 1000)
  Word256 amount_out;
  Word256 post_reserve0;
  Word256 post_reserve1;
};

struct AddResult {
  Word256 amount1;  // token1 deposit required alongside the token0 amount
  Word256 minted;
  Word256 protocol_fee;
};

struct RemoveResult {
  Word256 amount0;
  Word256 amount1;
  Word256 protocol_fee;
};

struct SkimResult {
  Word256 excess0;
  Word256 excess1;
  Word256 protocol_fee;
};

class CirclePair {
 public:
  explicit CirclePair(bool fee_on = false, std::string fee_to = "protocol");

  bool established() const noexcept { return !ledger_.total_supply().is_zero(); }

  // Returns the liquidity minted to `to`: (lambda0*X0 + lambda1*Y0) / 2.
  Word256 establish(const Word256& amount0, const Word256& amount1, const PairConfig& config, const std::string& to,
                    std::uint32_t now);

  // Deposits amount0 of token0 and the proportional floor of token1.
  AddResult add_liquidity(const Word256& amount0, const std::string& to, std::uint32_t now);

  RemoveResult remove_liquidity(const Word256& liquidity, const std::string& from, std::uint32_t now);

  SwapQuote get_amount_out(TokenIndex token_in, const Word256& amount_in) const;
  SwapQuote get_amount_in(TokenIndex token_in, const Word256& amount_out) const;

  // Low-level swap: inputs already received, outputs requested. Verifies the
  // circle inequality on fee-adjusted balances. Throws AmmError on rejection.
  void swap(const geometry::SwapAmounts& amounts, std::uint32_t now);

  // get_amount_out followed by swap.
  SwapQuote swap_exact_in(TokenIndex token_in, const Word256& amount_in, std::uint32_t now);

  // Settles the protocol fee and refreshes M from the current reserves.
  Word256 mint_fee(std::uint32_t now);

  void update_cumulative(std::uint32_t now);

  // Balances are the pair's actual token holdings; the excess over the
  // reserves is returned to the caller and M is refreshed.
  SkimResult skim(const Word256& balance0, const Word256& balance1, std::uint32_t now);

  Price spot_price() const;
  geometry::Circle trading_circle() const;
  Word512 residual() const;

  const CircleParams& circle() const noexcept { return circle_; }
  const PackedReserves& reserves() const noexcept { return reserves_; }
  const Word256& total_supply() const noexcept { return ledger_.total_supply(); }
  const Word256& price_cumulative() const noexcept { return price_cumulative_; }
  const LiquidityLedger& ledger() const noexcept { return ledger_; }
  bool fee_on() const noexcept { return fee_on_; }
  void set_fee_on(bool on) noexcept { fee_on_ = on; }
  const std::string& fee_to() const noexcept { return fee_to_; }

  // lambda_i * D_i * reserve_i: the reserve in 18-decimal weighted units.
  Word256 weighted_amount(TokenIndex t) const;

  // Hex digest of the complete pair state.
  std::string digest() const;

 private:
  void require_established() const;
  Word256 settle_fee();
  Word256 fresh_mu(const Word256& reserve0, const Word256& reserve1) const;

  CircleParams circle_;
  PackedReserves reserves_;
  Word256 price_cumulative_;
  LiquidityLedger ledger_;
  bool fee_on_ = false;
  std::string fee_to_;
};

}  // namespace coinswap
