// Pair without the scaling variable: the weighted reserves themselves sit on
// the circle centered at 10^9 coins,
//
//   (lambda0*X*10^3 - 10^30)^2 + (lambda1*Y*10^3 - 10^30)^2
//
// in base units, non-increasing across swaps. The protocol fee is minted on
// every swap instead of being inferred from a drifting scale.
#pragma once

#include <cstdint>
#include <string>

#include "coinswap/circle_pair.hpp"
#include "coinswap/liquidity_ledger.hpp"
#include "coinswap/swap_geometry.hpp"
#include "coinswap/wide_uint.hpp"

namespace coinswap {

const Word256& flat_center();

// Per-swap protocol fee: kFlatFeeNum / kFlatFeeDen of the input's share of
// pool value, minted as liquidity.
inline constexpr std::uint64_t kFlatFeeNum = 3;
inline constexpr std::uint64_t kFlatFeeDen = 1000;

// floor(0.003 * supply * lambda_in * amount_in / value), where value is
// lambda0*x0 + lambda1*y0 before the swap.
Word256 flat_protocol_fee(const Word256& supply, std::uint16_t lambda_in, const Word256& amount_in,
                          const Word256& value);

struct FlatSwapResult {
  SwapQuote quote;
  Word256 protocol_fee;
};

class FlatPair {
 public:
  explicit FlatPair(bool fee_on = false, std::string fee_to = "protocol");

  bool established() const noexcept { return !ledger_.total_supply().is_zero(); }

  Word256 establish(const Word256& amount0, const Word256& amount1, std::uint16_t lambda0, std::uint16_t lambda1,
                    const std::string& to);

  AddResult add_liquidity(const Word256& amount0, const std::string& to);
  RemoveResult remove_liquidity(const Word256& liquidity, const std::string& from);

  SwapQuote get_amount_out(TokenIndex token_in, const Word256& amount_in) const;
  SwapQuote get_amount_in(TokenIndex token_in, const Word256& amount_out) const;

  // Verifies on fee-adjusted balances; mints the protocol fee for each input
  // side when enabled.
  Word256 swap(const geometry::SwapAmounts& amounts);
  FlatSwapResult swap_exact_in(TokenIndex token_in, const Word256& amount_in);

  SkimResult skim(const Word256& balance0, const Word256& balance1);

  Price spot_price() const;
  geometry::Circle trading_circle() const;
  Word512 residual() const;

  // lambda0*x + lambda1*y at the current reserves.
  Word256 value() const;

  std::uint16_t lambda0() const noexcept { return lambda0_; }
  std::uint16_t lambda1() const noexcept { return lambda1_; }
  const Word256& reserve0() const noexcept { return reserve0_; }
  const Word256& reserve1() const noexcept { return reserve1_; }
  const Word256& total_supply() const noexcept { return ledger_.total_supply(); }
  const LiquidityLedger& ledger() const noexcept { return ledger_; }
  bool fee_on() const noexcept { return fee_on_; }
  void set_fee_on(bool on) noexcept { fee_on_ = on; }
  const std::string& fee_to() const noexcept { return fee_to_; }

  std::string digest() const;

 private:
  void require_established() const;
  void check_quadrant(const Word256& r0, const Word256& r1) const;

  Word256 reserve0_;
  Word256 reserve1_;
  std::uint16_t lambda0_ = 0;
  std::uint16_t lambda1_ = 0;
  LiquidityLedger ledger_;
  bool fee_on_ = false;
  std::string fee_to_;
};

}  // namespace coinswap
