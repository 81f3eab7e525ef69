#include "coinswap/circle_pair.hpp"

#include <optional>
#include <utility>

#include "coinswap/digest.hpp"
#include "coinswap/errors.hpp"
#include "coinswap/root_math.hpp"

namespace coinswap {

const Word256& mu_center() {
  static const Word256 v = Word256::pow10(34);
  return v;
}

const Word256& circle_center() {
  static const Word256 v = Word256::pow10(37);
  return v;
}

namespace {

// (m*a - 10^34)^2, or nothing when the offset alone exceeds 2^256 (far
// outside any admissible circle).
std::optional<Word512> offset_square(const Word256& m, const Word256& a) {
  const Word512 p = mul_wide(m, a);
  const Word512 c = widen<8>(mu_center());
  const Word512 d = abs_diff(p, c);
  if (!hi(d).is_zero()) return std::nullopt;
  return mul_wide(lo(d), lo(d));
}

// True when (m*a - 10^34)^2 + (m*b - 10^34)^2 <= r * 10^64.
bool inside(const Word256& a, const Word256& b, const Word512& radius_sq, const Word256& m) {
  const auto da = offset_square(m, a);
  const auto db = offset_square(m, b);
  if (!da || !db) return false;
  auto [sum, carry] = overflowing_add(*da, *db);
  return !carry && sum <= radius_sq;
}

Word512 mu_radius_sq(std::uint32_t r) { return mul_wide(Word256{r}, Word256::pow10(64)); }

void check_radius(std::uint32_t r) {
  if (r <= kRadiusBase || r > kRadiusBase + kMaxRSquare)
    throw AmmError(AmmErrc::kOutOfRange, "radius parameter must be in [10001, 19999]");
}

}  // namespace

Word256 solve_mu(const Word256& a, const Word256& b, std::uint32_t r) {
  check_radius(r);
  if (a.is_zero() && b.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "cannot scale an empty pool");
  const Word256& c = mu_center();
  if (a >= c || b >= c) throw AmmError(AmmErrc::kMuUnsatisfiable, "weighted reserve exceeds the circle center");

  // Q m^2 - 2*10^34*S m + (2*10^68 - r*10^64) = 0, lower root:
  //   m = (10^34*S - sqrt(10^64*K)) / Q,  K = 10^4*S^2 - (20000 - r)*Q
  const Word256 s = a + b;
  const Word256 q = a * a + b * b;
  const Word256 k = Word256{kRadiusBase} * s * s - Word256{2 * kRadiusBase - r} * q;
  const Word256 root = isqrt512(mul_wide(Word256::pow10(64), k));
  const Word256 p = c * s;

  // root <= sqrt(disc) so the estimate is never below the true ceiling.
  Word256 m = p <= root ? Word256{1} : div_ceil(p - root, q);
  if (m.is_zero()) m = Word256{1};
  const Word512 radius_sq = mu_radius_sq(r);
  while (!inside(a, b, radius_sq, m)) m += Word256{1};
  while (m > Word256{1} && inside(a, b, radius_sq, m - Word256{1})) m -= Word256{1};

  const Word512 wide_c = widen<8>(c);
  if (mul_wide(m, a) >= wide_c || mul_wide(m, b) >= wide_c)
    throw AmmError(AmmErrc::kMuUnsatisfiable, "no scaling keeps the pool below the circle center");
  return m;
}

bool mu_is_minimal(const Word256& a, const Word256& b, std::uint32_t r, const Word256& m) {
  if (m.is_zero()) return false;
  const Word512 radius_sq = mu_radius_sq(r);
  const Word512 c = widen<8>(mu_center());
  if (mul_wide(m, a) >= c || mul_wide(m, b) >= c) return false;
  if (!inside(a, b, radius_sq, m)) return false;
  return !inside(a, b, radius_sq, m - Word256{1});
}

Word256 revise_mu(const Word256& x, const Word256& y, std::uint16_t lambda0, std::uint16_t lambda1,
                  std::uint32_t r) {
  return solve_mu(Word256{lambda0} * x, Word256{lambda1} * y, r);
}

Word256 Price::to_fixed(unsigned frac_bits) const {
  if (den.is_zero()) throw AmmError(AmmErrc::kDegenerateDenominator, "price denominator is zero");
  return lo(divmod_wide(widen<8>(num) << frac_bits, den).quotient);
}

Price spot_price(const CircleParams& circle, const Word256& reserve0, const Word256& reserve1) {
  const auto w = weighted_reserves(circle);
  const Word256& c = circle_center();
  const Word256 u0 = geometry::coordinate(w.w0, Word256{geometry::kFeeScale} * reserve0);
  const Word256 u1 = geometry::coordinate(w.w1, Word256{geometry::kFeeScale} * reserve1);
  if (u0 >= c || u1 >= c) throw AmmError(AmmErrc::kDegenerateDenominator, "pool sits at or past the center");
  return Price{Word256{circle.d0} * Word256{circle.lambda0} * (c - u0),
               Word256{circle.d1} * Word256{circle.lambda1} * (c - u1)};
}

CirclePair::CirclePair(bool fee_on, std::string fee_to) : fee_on_(fee_on), fee_to_(std::move(fee_to)) {}

void CirclePair::require_established() const {
  if (!established()) throw AmmError(AmmErrc::kUnestablished, "pair has no liquidity");
}

Word256 CirclePair::weighted_amount(TokenIndex t) const {
  return t == TokenIndex::k0 ? Word256{circle_.d0} * Word256{circle_.lambda0} * reserves_.reserve0
                             : Word256{circle_.d1} * Word256{circle_.lambda1} * reserves_.reserve1;
}

Word256 CirclePair::fresh_mu(const Word256& reserve0, const Word256& reserve1) const {
  const Word256 m = revise_mu(Word256{circle_.d0} * reserve0, Word256{circle_.d1} * reserve1, circle_.lambda0,
                              circle_.lambda1, circle_.radius());
  if (m.bit_length() > kMuBits) throw AmmError(AmmErrc::kFieldOverflow, "scaling variable exceeds 56 bits");
  return m;
}

Word256 CirclePair::establish(const Word256& amount0, const Word256& amount1, const PairConfig& config,
                              const std::string& to, std::uint32_t now) {
  if (established()) throw AmmError(AmmErrc::kAlreadyEstablished, "pair already holds liquidity");
  CirclePair next(fee_on_, fee_to_);
  next.circle_ = CircleParams{config.ico,
                              decimals_factor(config.decimals0),
                              decimals_factor(config.decimals1),
                              config.r_square,
                              config.lambda0,
                              config.lambda1,
                              0};
  validate_circle(next.circle_);
  if (!fits_reserve(amount0) || !fits_reserve(amount1))
    throw AmmError(AmmErrc::kReserveOverflow, "reserves must stay below 2^96");
  const Word256 x = Word256{next.circle_.d0} * amount0;
  const Word256 y = Word256{next.circle_.d1} * amount1;
  if (x < Word256{kOneCoin} || y < Word256{kOneCoin})
    throw AmmError(AmmErrc::kDepositBelowMinimum, "each side needs at least one coin");

  next.circle_.mu = next.fresh_mu(amount0, amount1).to_u64();
  next.reserves_ = PackedReserves{amount0, amount1, now};
  const Word256 minted = (Word256{config.lambda0} * x + Word256{config.lambda1} * y) >> 1;
  next.ledger_.mint(to, minted);
  *this = std::move(next);
  return minted;
}

Word256 CirclePair::settle_fee() {
  const Word256 mu = fresh_mu(reserves_.reserve0, reserves_.reserve1);
  const Word256 mu0{circle_.mu};
  Word256 fee;
  if (fee_on_ && mu < mu0) {
    fee = muldiv(ledger_.total_supply(), mu0 - mu, Word256{5} * mu0 + mu);
    ledger_.mint(fee_to_, fee);
  }
  circle_.mu = mu.to_u64();
  return fee;
}

AddResult CirclePair::add_liquidity(const Word256& amount0, const std::string& to, std::uint32_t now) {
  require_established();
  if (amount0.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "deposit must be positive");
  CirclePair next = *this;
  next.update_cumulative(now);
  AddResult out;
  out.protocol_fee = next.settle_fee();

  const Word256 x0 = next.reserves_.reserve0;
  const Word256 y0 = next.reserves_.reserve1;
  out.amount1 = muldiv(amount0, y0, x0);
  if (out.amount1.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "token1 deposit rounds to zero");
  const Word256 x1 = x0 + amount0;
  const Word256 y1 = y0 + out.amount1;
  if (!fits_reserve(x1) || !fits_reserve(y1)) throw AmmError(AmmErrc::kReserveOverflow, "reserves must stay below 2^96");

  // Omega grows with the token0 reserve; token1 follows by the floored ratio.
  const Word256 supply = next.ledger_.total_supply();
  out.minted = muldiv(supply, x1, x0) - supply;
  if (out.minted.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "deposit mints no liquidity");

  next.circle_.mu = next.fresh_mu(x1, y1).to_u64();
  next.reserves_.reserve0 = x1;
  next.reserves_.reserve1 = y1;
  next.ledger_.mint(to, out.minted);
  *this = std::move(next);
  return out;
}

RemoveResult CirclePair::remove_liquidity(const Word256& liquidity, const std::string& from, std::uint32_t now) {
  require_established();
  if (liquidity.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "nothing to remove");
  CirclePair next = *this;
  next.update_cumulative(now);
  RemoveResult out;
  out.protocol_fee = next.settle_fee();

  const Word256 supply = next.ledger_.total_supply();
  const Word256 x0 = next.reserves_.reserve0;
  const Word256 y0 = next.reserves_.reserve1;
  next.ledger_.burn(from, liquidity);
  out.amount0 = muldiv(liquidity, x0, supply);
  out.amount1 = muldiv(liquidity, y0, supply);

  if (next.ledger_.total_supply().is_zero()) {
    next.reserves_.reserve0 = Word256{};
    next.reserves_.reserve1 = Word256{};
    next.circle_.mu = 0;
  } else {
    if (out.amount0.is_zero() || out.amount1.is_zero())
      throw AmmError(AmmErrc::kZeroAmount, "withdrawal rounds to zero");
    const Word256 x1 = x0 - out.amount0;
    const Word256 y1 = y0 - out.amount1;
    if (x1.is_zero() || y1.is_zero())
      throw AmmError(AmmErrc::kInsufficientLiquidity, "withdrawal would drain a reserve");
    next.circle_.mu = next.fresh_mu(x1, y1).to_u64();
    next.reserves_.reserve0 = x1;
    next.reserves_.reserve1 = y1;
  }
  *this = std::move(next);
  return out;
}

geometry::Circle CirclePair::trading_circle() const {
  const auto w = weighted_reserves(circle_);
  return geometry::Circle{w.w0, w.w1, circle_center()};
}

Word512 CirclePair::residual() const {
  return geometry::reserve_residual(trading_circle(), reserves_.reserve0, reserves_.reserve1);
}

namespace {

const Word256& reserve_of(const PackedReserves& r, TokenIndex t) {
  return t == TokenIndex::k0 ? r.reserve0 : r.reserve1;
}

SwapQuote make_quote(const PackedReserves& r, TokenIndex in, const Word256& amount_in, const Word256& amount_out) {
  SwapQuote q;
  q.token_in = in;
  q.amount_in = amount_in;
  q.fee_amount = amount_in - muldiv(amount_in, Word256{geometry::kFeeKeep}, Word256{geometry::kFeeScale});
  q.amount_out = amount_out;
  if (in == TokenIndex::k0) {
    q.post_reserve0 = r.reserve0 + amount_in;
    q.post_reserve1 = r.reserve1 - amount_out;
  } else {
    q.post_reserve0 = r.reserve0 - amount_out;
    q.post_reserve1 = r.reserve1 + amount_in;
  }
  return q;
}

geometry::SwapAmounts amounts_of(const SwapQuote& q) {
  geometry::SwapAmounts a;
  if (q.token_in == TokenIndex::k0) {
    a.in0 = q.amount_in;
    a.out1 = q.amount_out;
  } else {
    a.in1 = q.amount_in;
    a.out0 = q.amount_out;
  }
  return a;
}

}  // namespace

SwapQuote CirclePair::get_amount_out(TokenIndex token_in, const Word256& amount_in) const {
  require_established();
  const Word256& rin = reserve_of(reserves_, token_in);
  if (!fits_reserve(rin + amount_in)) throw AmmError(AmmErrc::kReserveOverflow, "reserves must stay below 2^96");
  const Word256 out = geometry::quote_out(trading_circle(), token_in, rin, reserve_of(reserves_, other(token_in)),
                                          amount_in);
  return make_quote(reserves_, token_in, amount_in, out);
}

SwapQuote CirclePair::get_amount_in(TokenIndex token_in, const Word256& amount_out) const {
  require_established();
  const Word256& rin = reserve_of(reserves_, token_in);
  const Word256 in = geometry::quote_in(trading_circle(), token_in, rin, reserve_of(reserves_, other(token_in)),
                                        amount_out);
  if (!fits_reserve(rin + in)) throw AmmError(AmmErrc::kReserveOverflow, "reserves must stay below 2^96");
  return make_quote(reserves_, token_in, in, amount_out);
}

void CirclePair::swap(const geometry::SwapAmounts& amounts, std::uint32_t now) {
  require_established();
  geometry::verify_swap(trading_circle(), reserves_.reserve0, reserves_.reserve1, amounts);
  const Word256 r0 = reserves_.reserve0 + amounts.in0 - amounts.out0;
  const Word256 r1 = reserves_.reserve1 + amounts.in1 - amounts.out1;
  if (!fits_reserve(r0) || !fits_reserve(r1)) throw AmmError(AmmErrc::kReserveOverflow, "reserves must stay below 2^96");
  update_cumulative(now);
  reserves_.reserve0 = r0;
  reserves_.reserve1 = r1;
}

SwapQuote CirclePair::swap_exact_in(TokenIndex token_in, const Word256& amount_in, std::uint32_t now) {
  if (amount_in.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "swap input must be positive");
  const SwapQuote q = get_amount_out(token_in, amount_in);
  swap(amounts_of(q), now);
  return q;
}

Word256 CirclePair::mint_fee(std::uint32_t now) {
  require_established();
  CirclePair next = *this;
  next.update_cumulative(now);
  const Word256 fee = next.settle_fee();
  *this = std::move(next);
  return fee;
}

void CirclePair::update_cumulative(std::uint32_t now) {
  const std::uint32_t elapsed = now - reserves_.block_timestamp_last;
  if (elapsed != 0 && established()) {
    const Word256 price = spot_price().to_fixed(kPriceFracBits);
    price_cumulative_ = wrapping_add(price_cumulative_, wrapping_mul(price, Word256{elapsed}));
  }
  reserves_.block_timestamp_last = now;
}

SkimResult CirclePair::skim(const Word256& balance0, const Word256& balance1, std::uint32_t now) {
  require_established();
  if (balance0 < reserves_.reserve0 || balance1 < reserves_.reserve1)
    throw AmmError(AmmErrc::kBalanceDeficit, "balance below recorded reserve");
  CirclePair next = *this;
  next.update_cumulative(now);
  SkimResult out;
  out.excess0 = balance0 - reserves_.reserve0;
  out.excess1 = balance1 - reserves_.reserve1;
  out.protocol_fee = next.settle_fee();
  *this = std::move(next);
  return out;
}

Price CirclePair::spot_price() const {
  require_established();
  return coinswap::spot_price(circle_, reserves_.reserve0, reserves_.reserve1);
}

std::string CirclePair::digest() const {
  StateDigest d;
  d.add(std::string_view{"circle"});
  d.add(pack_circle(circle_));
  d.add(pack_reserves(reserves_));
  d.add(price_cumulative_);
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
