#include "coinswap/swap_geometry.hpp"

#include <algorithm>

#include "coinswap/root_math.hpp"

namespace coinswap::geometry {

namespace {

const Word256 kScale{kFeeScale};
const Word256 kKeep{kFeeKeep};

Word512 square(const Word256& v) { return mul_wide(v, v); }

}  // namespace

Word256 coordinate(const Word256& weight, const Word256& scaled) {
  const Word512 u = mul_wide(weight, scaled);
  return hi(u).is_zero() ? lo(u) : Word256::max();
}

Word512 residual(const Circle& circle, const Word256& u0, const Word256& u1) {
  return square(abs_diff(u0, circle.center)) + square(abs_diff(u1, circle.center));
}

Word512 reserve_residual(const Circle& circle, const Word256& x0, const Word256& x1) {
  return residual(circle, coordinate(circle.weight0, kScale * x0), coordinate(circle.weight1, kScale * x1));
}

Word256 quote_out(const Circle& circle, TokenIndex in, const Word256& reserve_in, const Word256& reserve_out,
                  const Word256& amount_in) {
  if (amount_in.is_zero()) return Word256{};
  const Word256& w_in = circle.weight(in);
  const Word256& w_out = circle.weight(other(in));
  const Word256& c = circle.center;

  if (coordinate(w_in, kScale * (reserve_in + amount_in)) >= c)
    throw AmmError(AmmErrc::kQuadrantViolation, "input side would cross the circle center");

  const Word256 u_in = coordinate(w_in, kScale * reserve_in);
  const Word256 u_out = coordinate(w_out, kScale * reserve_out);
  const Word512 before = residual(circle, u_in, u_out);

  // Remaining budget for the output axis once the fee-adjusted input moves.
  const Word256 u_in_after = coordinate(w_in, kScale * reserve_in + kKeep * amount_in);
  const Word512 budget = before - square(c - u_in_after);
  const Word256 root = isqrt512(budget);

  // Smallest y with c - w_out*1000*y <= floor(sqrt(budget)).
  Word256 min_reserve = root >= c ? Word256{} : div_ceil(c - root, w_out * kScale);
  min_reserve = std::max(min_reserve, Word256{1});
  if (min_reserve > reserve_out) throw AmmError(AmmErrc::kInvariantViolation, "current state lies outside its own circle");
  return reserve_out - min_reserve;
}

Word256 quote_in(const Circle& circle, TokenIndex in, const Word256& reserve_in, const Word256& reserve_out,
                 const Word256& amount_out) {
  if (amount_out.is_zero()) return Word256{};
  if (amount_out >= reserve_out)
    throw AmmError(AmmErrc::kInsufficientOutputReserve, "output must leave a positive reserve");
  const Word256& w_in = circle.weight(in);
  const Word256& w_out = circle.weight(other(in));
  const Word256& c = circle.center;

  const Word256 u_in = coordinate(w_in, kScale * reserve_in);
  const Word256 u_out = coordinate(w_out, kScale * reserve_out);
  const Word512 before = residual(circle, u_in, u_out);

  const Word256 u_out_after = coordinate(w_out, kScale * (reserve_out - amount_out));
  const Word512 spent = square(c - u_out_after);
  if (spent > before)
    throw AmmError(AmmErrc::kInsufficientOutputReserve, "output unreachable on the current circle");
  const Word256 root = isqrt512(before - spent);

  // Smallest scaled input s with w_in * s >= c - floor(sqrt(budget)).
  const Word256 need = root >= c ? Word256{} : div_ceil(c - root, w_in);
  const Word256 have = kScale * reserve_in;
  const Word256 amount_in = need <= have ? Word256{} : div_ceil(need - have, kKeep);

  if (coordinate(w_in, kScale * (reserve_in + amount_in)) >= c)
    throw AmmError(AmmErrc::kQuadrantViolation, "required input crosses the circle center");
  return amount_in;
}

void verify_swap(const Circle& circle, const Word256& reserve0, const Word256& reserve1, const SwapAmounts& a) {
  if (a.out0.is_zero() && a.out1.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "swap needs a positive output");
  if (a.out0 >= reserve0 || a.out1 >= reserve1)
    throw AmmError(AmmErrc::kInsufficientOutputReserve, "output must leave a positive reserve");
  if (a.in0.is_zero() && a.in1.is_zero()) throw AmmError(AmmErrc::kZeroAmount, "swap received no input");

  const Word256 balance0 = reserve0 + a.in0 - a.out0;
  const Word256 balance1 = reserve1 + a.in1 - a.out1;
  const Word256& c = circle.center;

  if (coordinate(circle.weight0, kScale * balance0) >= c || coordinate(circle.weight1, kScale * balance1) >= c)
    throw AmmError(AmmErrc::kQuadrantViolation, "post-trade balance crosses the circle center");

  const Word256 adjusted0 = kScale * balance0 - Word256{kFeeScale - kFeeKeep} * a.in0;
  const Word256 adjusted1 = kScale * balance1 - Word256{kFeeScale - kFeeKeep} * a.in1;
  const Word512 after =
      residual(circle, coordinate(circle.weight0, adjusted0), coordinate(circle.weight1, adjusted1));
  if (after > reserve_residual(circle, reserve0, reserve1))
    throw AmmError(AmmErrc::kInvariantViolation, "trade moves the pool off its circle");
}

}  // namespace coinswap::geometry
