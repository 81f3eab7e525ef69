#pragma once

#include "coinswap/circle_pair.hpp"
#include "coinswap/flat_pair.hpp"
#include "coinswap/rational_oracle.hpp"
#include "support.hpp"

namespace coinswap::testing {

inline const Rational& coin() {
  static const Rational v = oracle::pow10(18);
  return v;
}

inline Word256 coins(std::uint64_t n) { return Word256{n} * Word256::pow10(18); }

inline oracle::RationalState oracle_state(const CirclePair& p) { return oracle::state_of(p); }
inline oracle::RationalState oracle_state(const FlatPair& p) { return oracle::state_of(p); }

inline std::uint64_t factor(const CirclePair& p, TokenIndex t) {
  return t == TokenIndex::k0 ? p.circle().d0 : p.circle().d1;
}

// Exact output in raw units of the output token.
inline oracle::Surd exact_out(const CirclePair& p, TokenIndex in, const Word256& amount_in) {
  return oracle::exact_out_raw(p, in, amount_in);
}

inline oracle::Surd exact_out(const FlatPair& p, TokenIndex in, const Word256& amount_in) {
  return oracle::exact_out_raw(p, in, amount_in);
}

inline geometry::SwapAmounts amounts(TokenIndex in, const Word256& amount_in, const Word256& amount_out) {
  geometry::SwapAmounts a;
  (in == TokenIndex::k0 ? a.in0 : a.in1) = amount_in;
  (in == TokenIndex::k0 ? a.out1 : a.out0) = amount_out;
  return a;
}

// A random established pair whose weighted deposits are within 25% of each
// other, as derive_lambdas would arrange for equal-value deposits.
struct RandomPool {
  PairConfig config;
  Word256 amount0;
  Word256 amount1;
};

inline RandomPool random_pool() {
  RandomPool p;
  p.config.r_square = static_cast<std::uint16_t>(uniform(1, 9999));
  p.config.decimals0 = static_cast<unsigned>(uniform(0, 3) == 0 ? uniform(2, 18) : 18);
  p.config.decimals1 = static_cast<unsigned>(uniform(0, 3) == 0 ? uniform(2, 18) : 18);
  p.config.lambda0 = static_cast<std::uint16_t>(uniform(1, 12));
  p.config.lambda1 = static_cast<std::uint16_t>(uniform(1, 12));
  const std::uint64_t d0 = decimals_factor(p.config.decimals0);
  const std::uint64_t d1 = decimals_factor(p.config.decimals1);
  // Weighted value in 18-decimal base units: between 10 and 10^8 coins.
  const Word256 value = random_between(Word256::pow10(19) * Word256{std::uint64_t{p.config.lambda0} * p.config.lambda1},
                                       Word256::pow10(26));
  p.amount0 = value / Word256{p.config.lambda0 * d0};
  const Word256 skewed = value * Word256{uniform(80, 125)} / Word256{100};
  p.amount1 = skewed / Word256{p.config.lambda1 * d1};
  p.amount0 = std::max(p.amount0, Word256::pow10(18) / Word256{d0});
  p.amount1 = std::max(p.amount1, Word256::pow10(18) / Word256{d1});
  return p;
}

inline CirclePair establish(const RandomPool& p, bool fee_on = false) {
  CirclePair pair(fee_on);
  pair.establish(p.amount0, p.amount1, p.config, "lp", 0);
  return pair;
}

}  // namespace coinswap::testing
