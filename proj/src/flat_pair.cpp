#include "coinswap/flat_pair.hpp"

#include <utility>

#include "coinswap/digest.hpp"
#include "coinswap/errors.hpp"

namespace coinswap {

const Word256& flat_center() {
  static const Word256 v = Word256::pow10(30);
  return v;
}

Word256 flat_protocol_fee(const Word256& supply, std::uint16_t lambda_in, const Word256& amount_in,
                          const Word256& value) {
  if (amount_in.is_zero()) return Word256{};
  const Word256 weighted = Word256{kFlatFeeNum} * Word256{lambda_in} * amount_in;
  return muldiv(supply, weighted, Word256{kFlatFeeDen} * value);
}

FlatPair::FlatPair(bool fee_on, std::string fee_to) : fee_on_(fee_on), fee_to_(std::move(fee_to)) {}

void FlatPair::require_established() const {
  if (!established()) throw AmmError(AmmErrc::kUnestablished, "pair has no liquidity");
}

geometry::Circle FlatPair::trading_circle() const {
  return geometry::Circle{Word256{lambda0_}, Word256{lambda1_}, flat_center()};
}

void FlatPair::check_quadrant(const Word256& r0, const Word256& r1) const {
  if (!fits_reserve(r0) || !fits_reserve(r1)) throw AmmError(AmmErrc::kReserveOverflow, "reserves must stay below 2^96");
  const auto c = trading_circle();
  const Word256 scale{geometry::kFeeScale};
  if (geometry::coordinate(c.weight0, scale * r0) >= c.center || geometry::coordinate(c.weight1, scale * r1) >= c.center)
    throw AmmError(AmmErrc::kQuadrantViolation, "weighted reserve reaches the circle center");
}

Word256 FlatPair::value() const {
  return Word256{lambda0_} * reserve0_ + Word256{lambda1_} * reserve1_;
}

Word512 FlatPair::residual() const { return geometry::reserve_residual(trading_circle(), reserve0_, reserve1_); }

Word256 FlatPair::establish(const Word256& amount0, const Word256& amount1, std::uint16_t lambda0,
                            std::uint16_t lambda1, const std::string& to) {
  if (established()) throw AmmError(AmmErrc::kAlreadyEstablished, "pair already holds liquidity");
  if (lambda0 == 0 || lambda1 == 0) throw AmmError(AmmErrc::kOutOfRange, "weights must be positive");
  if (amount0 < Word256{kOneCoin} || amount1 < Word256{kOneCoin})
    throw AmmError(AmmErrc::kDepositBelowMinimum, "each side needs at least one coin");
  FlatPair next(fee_on_, fee_to_);
  next.lambda0_ = lambda0;
  next.lambda1_ = lambda1;
  next.check_quadrant(amount0, amount1);
  next.reserve0_ = amount0;
  next.reserve1_ = amount1;
  const Word256 minted = next.value() >> 1;
  next.ledger_.mint(to, minted);
  *this = std::move(next);
  return minted;
}

AddResult FlatPair::add_liquidity(const Word256& amount0, const std::string& to) {
  require_established();
  if (amount0.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "deposit must be positive");
  AddResult out;
  out.amount1 = muldiv(amount0, reserve1_, reserve0_);
  if (out.amount1.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "token1 deposit rounds to zero");
  const Word256 x1 = reserve0_ + amount0;
  const Word256 y1 = reserve1_ + out.amount1;
  check_quadrant(x1, y1);
  const Word256 supply = ledger_.total_supply();
  out.minted = muldiv(supply, x1, reserve0_) - supply;
  if (out.minted.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "deposit mints no liquidity");
  reserve0_ = x1;
  reserve1_ = y1;
  ledger_.mint(to, out.minted);
  return out;
}

RemoveResult FlatPair::remove_liquidity(const Word256& liquidity, const std::string& from) {
  require_established();
  if (liquidity.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "nothing to remove");
  FlatPair next = *this;
  const Word256 supply = next.ledger_.total_supply();
  next.ledger_.burn(from, liquidity);
  RemoveResult out;
  out.amount0 = muldiv(liquidity, reserve0_, supply);
  out.amount1 = muldiv(liquidity, reserve1_, supply);
  if (next.ledger_.total_supply().is_zero()) {
    next.reserve0_ = Word256{};
    next.reserve1_ = Word256{};
  } else {
    if (out.amount0.is_zero() || out.amount1.is_zero())
      throw AmmError(AmmErrc::kZeroAmount, "withdrawal rounds to zero");
    next.reserve0_ -= out.amount0;
    next.reserve1_ -= out.amount1;
    if (next.reserve0_.is_zero() || next.reserve1_.is_zero())
      throw AmmError(AmmErrc::kInsufficientLiquidity, "withdrawal would drain a reserve");
  }
  *this = std::move(next);
  return out;
}

namespace {

SwapQuote flat_quote(const Word256& r0, const Word256& r1, TokenIndex in, const Word256& amount_in,
                     const Word256& amount_out) {
  SwapQuote q;
  q.token_in = in;
  q.amount_in = amount_in;
  q.fee_amount = amount_in - muldiv(amount_in, Word256{geometry::kFeeKeep}, Word256{geometry::kFeeScale});
  q.amount_out = amount_out;
  q.post_reserve0 = in == TokenIndex::k0 ? r0 + amount_in : r0 - amount_out;
  q.post_reserve1 = in == TokenIndex::k0 ? r1 - amount_out : r1 + amount_in;
  return q;
}

}  // namespace

SwapQuote FlatPair::get_amount_out(TokenIndex token_in, const Word256& amount_in) const {
  require_established();
  const Word256& rin = token_in == TokenIndex::k0 ? reserve0_ : reserve1_;
  const Word256& rout = token_in == TokenIndex::k0 ? reserve1_ : reserve0_;
  if (!fits_reserve(rin + amount_in)) throw AmmError(AmmErrc::kReserveOverflow, "reserves must stay below 2^96");
  const Word256 out = geometry::quote_out(trading_circle(), token_in, rin, rout, amount_in);
  return flat_quote(reserve0_, reserve1_, token_in, amount_in, out);
}

SwapQuote FlatPair::get_amount_in(TokenIndex token_in, const Word256& amount_out) const {
  require_established();
  const Word256& rin = token_in == TokenIndex::k0 ? reserve0_ : reserve1_;
  const Word256& rout = token_in == TokenIndex::k0 ? reserve1_ : reserve0_;
  const Word256 in = geometry::quote_in(trading_circle(), token_in, rin, rout, amount_out);
  if (!fits_reserve(rin + in)) throw AmmError(AmmErrc::kReserveOverflow, "reserves must stay below 2^96");
  return flat_quote(reserve0_, reserve1_, token_in, in, amount_out);
}

Word256 FlatPair::swap(const geometry::SwapAmounts& amounts) {
  require_established();
  geometry::verify_swap(trading_circle(), reserve0_, reserve1_, amounts);
  const Word256 r0 = reserve0_ + amounts.in0 - amounts.out0;
  const Word256 r1 = reserve1_ + amounts.in1 - amounts.out1;
  check_quadrant(r0, r1);
  Word256 fee;
  if (fee_on_) {
    const Word256 v = value();
    const Word256 supply = ledger_.total_supply();
    fee = flat_protocol_fee(supply, lambda0_, amounts.in0, v) + flat_protocol_fee(supply, lambda1_, amounts.in1, v);
  }
  reserve0_ = r0;
  reserve1_ = r1;
  ledger_.mint(fee_to_, fee);
  return fee;
}

FlatSwapResult FlatPair::swap_exact_in(TokenIndex token_in, const Word256& amount_in) {
  if (amount_in.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "swap input must be positive");
  FlatSwapResult r;
  r.quote = get_amount_out(token_in, amount_in);
  geometry::SwapAmounts a;
  (token_in == TokenIndex::k0 ? a.in0 : a.in1) = amount_in;
  (token_in == TokenIndex::k0 ? a.out1 : a.out0) = r.quote.amount_out;
  r.protocol_fee = swap(a);
  return r;
}

SkimResult FlatPair::skim(const Word256& balance0, const Word256& balance1) {
  require_established();
  if (balance0 < reserve0_ || balance1 < reserve1_)
    throw AmmError(AmmErrc::kBalanceDeficit, "balance below recorded reserve");
  return SkimResult{balance0 - reserve0_, balance1 - reserve1_, Word256{}};
}

Price FlatPair::spot_price() const {
  require_established();
  const auto c = trading_circle();
  const Word256 scale{geometry::kFeeScale};
  const Word256 u0 = geometry::coordinate(c.weight0, scale * reserve0_);
  const Word256 u1 = geometry::coordinate(c.weight1, scale * reserve1_);
  if (u0 >= c.center || u1 >= c.center)
    throw AmmError(AmmErrc::kDegenerateDenominator, "pool sits at or past the center");
  return Price{Word256{lambda0_} * (c.center - u0), Word256{lambda1_} * (c.center - u1)};
}

std::string FlatPair::digest() const {
  StateDigest d;
  d.add(std::string_view{"flat"});
  d.add(reserve0_);
  d.add(reserve1_);
  d.add(static_cast<std::uint64_t>(lambda0_));
  d.add(static_cast<std::uint64_t>(lambda1_));
  d.add(ledger_.total_supply());
  d.add(static_cast<std::uint64_t>(ledger_.balances().size()));
  for (const auto& [holder, amount] : ledger_.balances()) {
    d.add(std::string_view{holder});
    d.add(amount);
  }
  d.add(static_cast<std::uint64_t>(fee_on_));
  d.add(std::string_view{fee_to_});
  return d.hex();
}

}  // namespace coinswap
