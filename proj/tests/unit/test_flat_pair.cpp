#include <doctest.h>

#include "coinswap/errors.hpp"
#include "pair_support.hpp"

using namespace coinswap;
using namespace coinswap::testing;

namespace {

AmmErrc error_code(auto&& f) {
  try {
    f();
  } catch (const AmmError& e) {
    return e.code();
  }
  FAIL("expected AmmError");
  return AmmErrc::kOutOfRange;
}

FlatPair random_flat(bool fee_on = false) {
  const auto l0 = static_cast<std::uint16_t>(uniform(1, 8));
  const auto l1 = static_cast<std::uint16_t>(uniform(1, 8));
  // Weighted reserves between 1 and 5*10^8 coins keep both sides below the center.
  const Word256 value = random_between(Word256::pow10(18) * Word256{std::uint64_t{l0} * l1}, Word256{5} * Word256::pow10(26));
  const Word256 x = value / Word256{l0};
  const Word256 y = value * Word256{uniform(80, 125)} / Word256{100} / Word256{l1};
  FlatPair p(fee_on);
  p.establish(x, y, l0, l1, "lp");
  return p;
}

}  // namespace

TEST_SUITE("flatpair") {

TEST_CASE("establish") {
  FlatPair p;
  CHECK(p.establish(coins(1), coins(1), 1, 1, "lp") == Word256::pow10(18));
  FlatPair q;
  CHECK(q.establish(coins(40'000'000), coins(10'000'000), 1, 4, "lp") == Word256{4} * Word256::pow10(25));
  const Rational exact = oracle::exact_initial_supply(3, Rational(big(coins(123))) + 1, 2, Rational(big(coins(77))));
  FlatPair r;
  CHECK(big(r.establish(coins(123) + Word256{1}, coins(77), 3, 2, "lp")) == oracle::Surd::exact(exact).floor());

  CHECK(error_code([] { FlatPair().establish(coins(1'000'000'000), coins(1), 1, 1, "lp"); }) ==
        AmmErrc::kQuadrantViolation);
  CHECK(error_code([] { FlatPair().establish(coins(400'000'000), coins(1), 3, 1, "lp"); }) ==
        AmmErrc::kQuadrantViolation);
  CHECK(error_code([] { FlatPair().establish(coins(1) - Word256{1}, coins(1), 1, 1, "lp"); }) ==
        AmmErrc::kDepositBelowMinimum);
}

TEST_CASE("liquidity") {
  FlatPair p;
  p.establish(coins(1000), coins(3000), 3, 1, "lp");
  const Word256 omega = p.total_supply();
  SUBCASE("double deposit") {
    const AddResult a = p.add_liquidity(coins(1000), "lp2");
    CHECK(a.amount1 == coins(3000));
    CHECK(p.total_supply() == omega * Word256{2});
  }
  SUBCASE("full burn") {
    const RemoveResult r = p.remove_liquidity(omega, "lp");
    CHECK(r.amount0 == coins(1000));
    CHECK(r.amount1 == coins(3000));
    CHECK_FALSE(p.established());
  }
  SUBCASE("random deposits against exact shares") {
    for (int i = 0; i < 300; ++i) {
      FlatPair f = random_flat();
      const Rational x0(big(f.reserve0()));
      const Rational y0(big(f.reserve1()));
      const Rational s0(big(f.total_supply()));
      const Word256 dx = random_between(Word256{1}, f.reserve0());
      AddResult a;
      try {
        a = f.add_liquidity(dx, "user");
      } catch (const AmmError& e) {
        CHECK((e.code() == AmmErrc::kZeroAmount || e.code() == AmmErrc::kQuadrantViolation));
        continue;
      }
      const auto exact = oracle::exact_add(x0, y0, s0, Rational(big(dx)));
      CHECK(Rational(big(a.amount1)) <= exact.amount1);
      CHECK(exact.amount1 - Rational(big(a.amount1)) < 1);
      CHECK(Rational(big(a.minted)) <= exact.minted);
      CHECK(exact.minted - Rational(big(a.minted)) < 1);

      const Rational s1(big(f.total_supply()));
      const Rational x1(big(f.reserve0()));
      const Rational y1(big(f.reserve1()));
      const RemoveResult r = f.remove_liquidity(a.minted, "user");
      const auto back = oracle::exact_remove(x1, y1, s1, Rational(big(a.minted)));
      CHECK(Rational(big(r.amount0)) <= back.amount0);
      CHECK(back.amount0 - Rational(big(r.amount0)) < 1);
      CHECK(Rational(big(r.amount1)) <= back.amount1);
      CHECK(r.amount0 <= dx);
      CHECK(r.amount1 <= a.amount1);
    }
  }
}

TEST_CASE("swap quotes") {
  FlatPair p;
  p.establish(coins(1'000'000), coins(1'000'000), 1, 1, "lp");
  CHECK(p.get_amount_out(TokenIndex::k0, Word256{}).amount_out.is_zero());

  for (int i = 0; i < 300; ++i) {
    FlatPair f = random_flat();
    const TokenIndex in = uniform(0, 1) ? TokenIndex::k0 : TokenIndex::k1;
    const Word256& rin = in == TokenIndex::k0 ? f.reserve0() : f.reserve1();
    const Word256 dx = random_between(Word256{1}, rin / Word256{uniform(1, 50)} | Word256{1});
    SwapQuote q;
    try {
      q = f.get_amount_out(in, dx);
    } catch (const AmmError& e) {
      CHECK(e.code() == AmmErrc::kQuadrantViolation);
      continue;
    }
    const BigInt exact = exact_out(f, in, dx).floor();
    CHECK(big(q.amount_out) <= exact);
    CHECK(exact - big(q.amount_out) <= 1);
    if (q.amount_out.is_zero()) continue;
    CHECK_THROWS_AS(geometry::verify_swap(f.trading_circle(), f.reserve0(), f.reserve1(),
                                          amounts(in, dx, q.amount_out + Word256{1})),
                    AmmError);
    const Word512 before = f.residual();
    f.swap(amounts(in, dx, q.amount_out));
    CHECK(f.residual() <= before);
  }
}

TEST_CASE("protocol fee per swap") {
  CHECK(flat_protocol_fee(Word256{1000}, 1, Word256{}, Word256{10}).is_zero());
  // lambda0 * dx equal to the pool value: 0.003 * supply
  CHECK(flat_protocol_fee(Word256{1'000'000}, 2, Word256{500}, Word256{1000}) == Word256{3000});
  CHECK(flat_protocol_fee(Word256{999}, 1, Word256{10}, Word256{10}) == Word256{2});

  for (int i = 0; i < 1000; ++i) {
    const Word256 supply = random_between(Word256{1}, Word256::pow10(27));
    const auto lambda = static_cast<std::uint16_t>(uniform(1, 0xFFFF));
    const Word256 dx = random_between(Word256{1}, Word256::pow10(26));
    const Word256 value = random_between(Word256{1}, Word256::pow10(31));
    const BigInt fee = big(flat_protocol_fee(supply, lambda, dx, value));
    // fee * value * 1000 <= 3 * supply * lambda * dx < (fee + 1) * value * 1000
    const BigInt rhs = 3 * big(supply) * lambda * big(dx);
    CHECK(fee * big(value) * 1000 <= rhs);
    CHECK(rhs < (fee + 1) * big(value) * 1000);
  }

  FlatPair p(true);
  p.establish(coins(1'000'000), coins(1'000'000), 1, 1, "lp");
  const Word256 supply = p.total_supply();
  const FlatSwapResult r = p.swap_exact_in(TokenIndex::k0, coins(10'000));
  // 0.003 * 10^24 * 10^22 / (2 * 10^24) = 1.5 * 10^19
  CHECK(r.protocol_fee == Word256{15} * Word256::pow10(18));
  CHECK(p.ledger().balance_of("protocol") == r.protocol_fee);
  CHECK(p.total_supply() == supply + r.protocol_fee);
}

TEST_CASE("skim") {
  FlatPair p;
  p.establish(coins(10), coins(10), 1, 1, "lp");
  const SkimResult s = p.skim(coins(10) + Word256{5}, coins(10));
  CHECK(s.excess0 == Word256{5});
  CHECK(error_code([&] { p.skim(coins(9), coins(10)); }) == AmmErrc::kBalanceDeficit);
}

TEST_CASE("approaches agree when mu is one") {
  // (3.4e8 - 1e9)^2 + (1.2e8 - 1e9)^2 = 12100 * 10^14: on the circle at mu = 1.
  CirclePair circle;
  PairConfig cfg;
  cfg.r_square = 2100;
  circle.establish(coins(340'000'000), coins(120'000'000), cfg, "lp", 0);
  REQUIRE(circle.circle().mu == 10'000'000);
  FlatPair flat;
  flat.establish(coins(340'000'000), coins(120'000'000), 1, 1, "lp");

  for (int i = 0; i < 300; ++i) {
    const TokenIndex in = uniform(0, 1) ? TokenIndex::k0 : TokenIndex::k1;
    const Word256 dx = random_between(Word256{1}, coins(50'000'000));
    const SwapQuote a = circle.get_amount_out(in, dx);
    const SwapQuote b = flat.get_amount_out(in, dx);
    CHECK(abs(big(a.amount_out) - big(b.amount_out)) <= 1);
  }
}

}  // TEST_SUITE
