// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "coinswap/circle_pair.hpp"
#include "coinswap/errors.hpp"
#include "coinswap/flat_pair.hpp"
#include "coinswap/rational_oracle.hpp"
#include "coinswap/root_math.hpp"
#include "coinswap/scenario.hpp"
#include "pair_support.hpp"

using namespace coinswap;
using namespace coinswap::testing;
using oracle::Surd;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failures of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ < 3) notes_ << (notes_.tellp() > 0 ? "; " : "") << what;
  }
  bool ok() const { return failures_ == 0; }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    s << summary;
    if (failures_ > 0) s << " [" << failures_ << " failures: " << notes_.str() << "]";
    return {ok(), s.str()};
  }

 private:
  std::size_t failures_ = 0;
  std::ostringstream notes_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// value = mantissa * 10^-k read from a decimal string, as an exact rational.
Rational parse_decimal(const std::string& text) {
  const auto dot = text.find('.');
  std::string digits = text;
  unsigned frac = 0;
  if (dot != std::string::npos) {
    frac = static_cast<unsigned>(text.size() - dot - 1);
    digits.erase(dot, 1);
  }
  // A leading zero would make the parser read octal.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  return Rational(BigInt(digits)) / oracle::pow10(frac);
}

Rational to_rational(const SigDecimal& d) {
  Rational v(d.mantissa);
  return d.exponent >= 0 ? v * oracle::pow10(static_cast<unsigned>(d.exponent))
                         : v / oracle::pow10(static_cast<unsigned>(-d.exponent));
}

Rational rel_err(const Rational& got, const Rational& want) {
  const Rational d = got - want;
  return (d < 0 ? -d : d) / want;
}

// Agreement to 10 significant digits: relative error at most 5 * 10^-10.
const Rational& ten_digit_tolerance() {
  static const Rational v = Rational(5) / oracle::pow10(10);
  return v;
}

BigInt ten_to(unsigned k) { return boost::multiprecision::pow(BigInt(10), k); }

// ---------------------------------------------------------------------------

Outcome price_table() {
  struct Row {
    std::uint32_t r;
    const char* min;
    const char* max;
  };
  static const Row reference[] = {
      {10001, "0.01000000000", "100.0000000"}, {10010, "0.03162277660", "31.62277660"},
      {10100, "0.1000000000", "10.00000000"},  {10500, "0.2236067977", "4.472135956"},
      {11000, "0.3162277660", "3.162277660"},  {15000, "0.7071067814", "1.414213562"},
      {17000, "0.8366600265", "1.195228609"},  {19000, "0.9486832980", "1.054092553"},
      {19900, "0.9949874374", "1.005037815"},  {19990, "0.9994998752", "1.000500375"},
      {19999, "0.9999499985", "1.000050004"},
  };
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const auto rows = sim::price_table(sim::reference_radii());
  const std::string text = sim::format_price_table(rows);
  const double elapsed = seconds_since(start);

  c.expect(rows.size() == std::size(reference), "row count");
  Rational worst = 0;
  int last_digit_diffs = 0;
  for (std::size_t i = 0; i < std::min(rows.size(), std::size(reference)); ++i) {
    const Row& want = reference[i];
    const sim::PriceRow& got = rows[i];
    c.expect(got.r == want.r, "r mismatch");
    // Correct rounding against the exact band.
    const oracle::ExactBounds exact = oracle::exact_price_bounds(got.r);
    c.expect(got.min_price == oracle::round_sig(exact.min_price), "min not correctly rounded at r=" + std::to_string(got.r));
    c.expect(got.max_price == oracle::round_sig(exact.max_price), "max not correctly rounded at r=" + std::to_string(got.r));
    for (const auto& [g, w] : {std::pair{got.min_price, want.min}, std::pair{got.max_price, want.max}}) {
      const Rational e = rel_err(to_rational(g), parse_decimal(w));
      worst = std::max(worst, e);
      if (g.to_string() != w) ++last_digit_diffs;
      c.expect(e <= ten_digit_tolerance(), "r=" + std::to_string(got.r) + " " + g.to_string() + " vs " + w);
    }
  }
  c.expect(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
  return c.outcome("11 rows, max rel err " + fmt(static_cast<double>(worst)) + ", " + std::to_string(last_digit_diffs) +
                   " entries differ from the reference table in the last digit, " + fmt(elapsed) + " s");
}

Outcome worked_trade() {
  Check c;
  oracle::RationalState s;
  s.x = 1'000'000;
  s.y = 1'000'000;
  const Rational c0 = s.cost();
  c.expect(c0 == 2 * Rational(999 * 999) * oracle::pow10(12), "initial cost");

  // Buy every token0 coin with token1, fee free.
  const Surd paid = oracle::exact_amount_in(s, TokenIndex::k1, 1'000'000, 0);
  const Surd y1 = paid + s.y;
  // The stated input and end state are the irrational exact values floored to whole coins.
  c.expect(paid.floor() == 1'001'002, "input " + paid.floor().str());
  c.expect(y1.floor() == 2'001'002, "end state y " + y1.floor().str());
  // x1 = 0 exactly; y1 - c = -sqrt(budget), so C(0, y1) squares back to C(q0).
  const Surd offset = y1 + (-s.center);
  c.expect(offset.p == 0, "end state is not a pure root");
  c.expect(offset.q * offset.q * offset.s + s.center * s.center == c0, "cost not conserved");

  const Surd steep = oracle::level_slope(s, Surd::exact(0), y1);
  const Surd x_end = oracle::exact_amount_in(s, TokenIndex::k0, 1'000'000, 0) + s.x;
  const Surd flat = oracle::level_slope(s, x_end, Surd::exact(0));
  const std::string lo = "-" + oracle::round_sig(-steep).to_string();
  const std::string hi = "-" + oracle::round_sig(-flat).to_string();
  c.expect(lo == "-1.002005014", "steep end " + lo);
  c.expect(hi == "-0.9979989980", "flat end " + hi);
  return c.outcome("q1 = (0, " + y1.floor().str() + "), C(q1) = C(q0) = " + c0.str() + ", slope band [" + lo + ", " +
                   hi + "]");
}

Outcome boundary_prices() {
  Check c;
  const PriceBounds b = price_bounds(16000);
  c.expect(b.min_price.to_string() == "0.7745966692", "min " + b.min_price.to_string());
  c.expect(b.max_price.to_string() == "1.290994449", "max " + b.max_price.to_string());
  return c.outcome("r=16000 band [" + b.min_price.to_string() + ", " + b.max_price.to_string() + "]");
}

// (M*a - 10^34)^2 + (M*b - 10^34)^2 <= r * 10^64, in unbounded integers.
bool on_or_inside(const BigInt& a, const BigInt& b, std::uint32_t r, const BigInt& m) {
  const BigInt c = ten_to(34);
  const BigInt u = m * a - c;
  const BigInt v = m * b - c;
  return u * u + v * v <= BigInt(r) * ten_to(64);
}

Outcome mu_correctness() {
  constexpr int kStates = 2000;
  Check c;
  const BigInt center = ten_to(34);
  const auto start = std::chrono::steady_clock::now();
  int tested = 0;
  for (int i = 0; i < kStates; ++i) {
    const RandomPool pool = random_pool();
    const std::uint32_t r = kRadiusBase + pool.config.r_square;
    const Word256 x = Word256{decimals_factor(pool.config.decimals0)} * pool.amount0;
    const Word256 y = Word256{decimals_factor(pool.config.decimals1)} * pool.amount1;
    Word256 m;
    try {
      m = revise_mu(x, y, pool.config.lambda0, pool.config.lambda1, r);
    } catch (const AmmError& e) {
      c.expect(false, std::string("revise_mu rejected an admissible state: ") + e.what());
      continue;
    }
    ++tested;
    CircleParams params{0, 1, 1, pool.config.r_square, pool.config.lambda0, pool.config.lambda1, 0};
    const BigInt want = oracle::exact_scaled_mu(params, x, y);
    c.expect(big(m) == want, "M " + m.to_decimal() + " vs " + want.str());

    const BigInt a = BigInt(pool.config.lambda0) * big(x);
    const BigInt b = BigInt(pool.config.lambda1) * big(y);
    const BigInt mm = big(m);
    c.expect(on_or_inside(a, b, r, mm), "M outside the circle");
    c.expect(!on_or_inside(a, b, r, mm - 1), "M - 1 still admissible");
    c.expect(mm * a < center && mm * b < center, "weighted coordinate at or past 10^9 coins");
  }
  const double elapsed = seconds_since(start);
  c.expect(tested >= 1000, "too few states");
  c.expect(elapsed < 30.0, "runtime " + fmt(elapsed) + " s");
  return c.outcome(std::to_string(tested) + " states, M = ceil(10^7 mu) and minimal in all, " + fmt(elapsed) + " s");
}

FlatPair random_flat() {
  const auto l0 = static_cast<std::uint16_t>(uniform(1, 8));
  const auto l1 = static_cast<std::uint16_t>(uniform(1, 8));
  const Word256 value =
      random_between(Word256::pow10(18) * Word256{std::uint64_t{l0} * l1}, Word256{5} * Word256::pow10(26));
  FlatPair p;
  p.establish(value / Word256{l0}, value * Word256{uniform(80, 125)} / Word256{100} / Word256{l1}, l0, l1, "lp");
  return p;
}

struct SwapTally {
  int trades = 0;
  int clamped = 0;
  int maximal = 0;
  BigInt worst = 0;
};

// amount_out against the exact output, clamped so one unit stays in the
// output reserve, then the next unit up must be rejected.
template <typename Pair, typename Verify>
void differential(const Pair& p, TokenIndex in, const Word256& rin, const Word256& rout, Verify verify, SwapTally& t,
                  Check& c) {
  const Word256 dx = random_between(Word256{1}, rin / Word256{uniform(1, 40)} | Word256{1});
  SwapQuote q;
  try {
    q = p.get_amount_out(in, dx);
  } catch (const AmmError& e) {
    c.expect(e.code() == AmmErrc::kQuadrantViolation || e.code() == AmmErrc::kReserveOverflow,
             std::string("unexpected rejection ") + e.what());
    return;
  }
  BigInt exact;
  try {
    exact = std::min(oracle::exact_out_raw(p, in, dx).floor(), big(rout) - 1);
  } catch (const std::domain_error&) {
    exact = big(rout) - 1;
  }
  if (exact == big(rout) - 1) ++t.clamped;
  const BigInt dev = exact - big(q.amount_out);
  t.worst = std::max(t.worst, BigInt(dev < 0 ? -dev : dev));
  c.expect(dev >= 0 && dev <= 1, "out " + q.amount_out.to_decimal() + " vs exact floor " + exact.str());
  ++t.trades;
  try {
    verify(amounts(in, dx, q.amount_out + Word256{1}));
    c.expect(false, "out + 1 accepted");
  } catch (const AmmError&) {
    ++t.maximal;
  }
}

Outcome swap_differential() {
  constexpr int kPerApproach = 1500;
  Check c;
  SwapTally circle;
  SwapTally flat;
  for (int i = 0; i < kPerApproach; ++i) {
    const CirclePair p = establish(random_pool());
    const TokenIndex in = uniform(0, 1) ? TokenIndex::k0 : TokenIndex::k1;
    const bool first = in == TokenIndex::k0;
    const auto& r = p.reserves();
    differential(
        p, in, first ? r.reserve0 : r.reserve1, first ? r.reserve1 : r.reserve0,
        [&](const geometry::SwapAmounts& a) { geometry::verify_swap(p.trading_circle(), r.reserve0, r.reserve1, a); },
        circle, c);
  }
  for (int i = 0; i < kPerApproach; ++i) {
    const FlatPair p = random_flat();
    const TokenIndex in = uniform(0, 1) ? TokenIndex::k0 : TokenIndex::k1;
    const bool first = in == TokenIndex::k0;
    differential(
        p, in, first ? p.reserve0() : p.reserve1(), first ? p.reserve1() : p.reserve0(),
        [&](const geometry::SwapAmounts& a) { geometry::verify_swap(p.trading_circle(), p.reserve0(), p.reserve1(), a); },
        flat, c);
  }
  const int trades = circle.trades + flat.trades;
  c.expect(trades >= 1000, "too few trades");
  c.expect(circle.maximal == circle.trades && flat.maximal == flat.trades, "maximality below 100%");
  std::ostringstream s;
  s << trades << " trades (circle " << circle.trades << ", flat " << flat.trades << "), max |dev| "
    << std::max(circle.worst, flat.worst) << " unit, maximal " << circle.maximal + flat.maximal << "/" << trades
    << ", reserve clamp hit " << circle.clamped + flat.clamped;
  return c.outcome(s.str());
}

Outcome square_roots() {
  constexpr int kCases = 10'000;
  Check c;
  for (int i = 0; i < kCases; ++i) {
    const Word256 a = random_word<4>();
    const BigInt want = boost::multiprecision::sqrt(big(a));
    c.expect(big(isqrt256(a)) == want, "isqrt256(" + a.to_decimal() + ")");
  }
  for (int i = 0; i < kCases; ++i) {
    const Word512 a = random_word<8>();
    const BigInt want = boost::multiprecision::sqrt(big(a));
    c.expect(big(isqrt512(a)) == want, "isqrt512(" + a.to_decimal() + ")");
  }
  // Fractional roots: |root - sqrt(a)| < 2^-50, and the truncation is exact.
  Rational worst = 0;
  const Rational bound = Rational(1, BigInt(1) << 50);
  for (int i = 0; i < kCases; ++i) {
    const Word256 a = random_word<4>();
    const unsigned bits = static_cast<unsigned>(uniform(51, kMaxFracBits));
    const FixedRoot root = sqrt_frac(a, bits);
    const BigInt scaled = big(root.scaled());
    c.expect(scaled == boost::multiprecision::sqrt(big(a) << (2 * bits)), "sqrt_frac truncation");
    // sqrt(a) lies in [scaled, scaled + 1) / 2^bits.
    const Surd exact{0, 1, Rational(big(a))};
    const Rational approx = Rational(scaled, BigInt(1) << bits);
    c.expect(exact.compare(approx) >= 0 && exact.compare(approx + bound) < 0, "sqrt_frac outside 2^-50");
    worst = std::max(worst, Rational(1, BigInt(1) << bits));
  }
  return c.outcome(std::to_string(kCases) + " radicands each at 256 and 512 bits exact, " + std::to_string(kCases) +
                   " fractional roots within 2^-50 (worst bound " + fmt(static_cast<double>(worst)) + ")");
}

Outcome division() {
  constexpr int kCases = 100'000;
  Check c;
  int near_overflow = 0;
  for (int i = 0; i < kCases; ++i) {
    Word256 d = random_word<4>();
    if (d.is_zero()) d = Word256{1};
    Word512 n;
    if (i % 4 == 0) {
      // Quotient within 2^64 of the 2^256 - 1 limit.
      const Word256 q = Word256::max() - Word256{uniform(0, ~std::uint64_t{0})};
      const Word256 r = random_between(Word256{}, d - Word256{1});
      const BigInt nb = big(q) * big(d) + big(r);
      n = make_word512(oracle::to_word(nb >> 256), oracle::to_word(nb & ((BigInt(1) << 256) - 1)));
      ++near_overflow;
    } else {
      // Any numerator whose high half is below d keeps the quotient in 256 bits.
      n = make_word512(random_between(Word256{}, d - Word256{1}), random_bits<4>(256));
    }
    const DivMod256 got = divmod_512_by_256(n, d);
    const BigInt nb = big(n);
    const BigInt db = big(d);
    c.expect(big(got.quotient) == nb / db && big(got.remainder) == nb % db,
             n.to_decimal() + " / " + d.to_decimal());
  }
  return c.outcome(std::to_string(kCases) + " cases exact, " + std::to_string(near_overflow) +
                   " with quotients near 2^256");
}

Outcome fee_identity() {
  constexpr int kStates = 1000;
  Check c;
  int tested = 0;
  for (int i = 0; i < kStates; ++i) {
    CirclePair p = establish(random_pool(), true);
    // Swaps move the point inside the circle; M stays at mu0 until collection.
    for (int k = 0; k < 3; ++k) {
      const TokenIndex in = uniform(0, 1) ? TokenIndex::k0 : TokenIndex::k1;
      const Word256& rin = in == TokenIndex::k0 ? p.reserves().reserve0 : p.reserves().reserve1;
      try {
        p.swap_exact_in(in, random_between(Word256{1}, rin / Word256{uniform(2, 20)} | Word256{1}), 0);
      } catch (const AmmError&) {
      }
    }
    const BigInt supply = big(p.total_supply());
    const BigInt mu0 = p.circle().mu;
    const BigInt mu = oracle::exact_scaled_mu(p.circle(), p.reserves().reserve0, p.reserves().reserve1);
    if (mu >= mu0) continue;
    const BigInt fee = big(p.mint_fee(0));
    ++tested;
    c.expect(BigInt(p.circle().mu) == mu, "M not refreshed");
    // Exact mint solves the identity with no rounding.
    const Rational exact = oracle::exact_fee_mint(supply, mu0, mu);
    const Rational target = Rational(mu0 - mu, 6 * mu0);
    c.expect(exact / (supply + exact) == target, "oracle mint misses the identity");
    // The floored mint is the largest integer not overshooting it.
    c.expect(Rational(fee, supply + fee) <= target, "mint overshoots");
    c.expect(Rational(fee + 1, supply + fee + 1) > target, "mint short by more than one unit");
    c.expect(Rational(fee) <= exact && exact - fee < 1, "mint is not floor of exact");
  }
  c.expect(tested >= 500, "too few drifted states: " + std::to_string(tested));
  return c.outcome(std::to_string(tested) + " drifted states, minted share within 1 unit, exact in oracle");
}

Outcome homogeneity() {
  constexpr int kPools = 500;
  Check c;
  const std::pair<int, int> factors[] = {{2, 1}, {3, 1}, {7, 2}};
  int tested = 0;
  for (int i = 0; i < kPools; ++i) {
    RandomPool pool = random_pool();
    // Even reserves so 7/2 stays integral.
    pool.amount0 = pool.amount0 + (pool.amount0 & Word256{1});
    pool.amount1 = pool.amount1 + (pool.amount1 & Word256{1});
    const CirclePair base = establish(pool);
    const Rational omega = Rational(big(base.total_supply()));
    const Rational m(BigInt(base.circle().mu));
    const Rational exact_omega = oracle::exact_initial_supply(
        pool.config.lambda0, Rational(big(pool.amount0)) * decimals_factor(pool.config.decimals0), pool.config.lambda1,
        Rational(big(pool.amount1)) * decimals_factor(pool.config.decimals1));
    for (const auto& [num, den] : factors) {
      RandomPool scaled = pool;
      scaled.amount0 = pool.amount0 * Word256{std::uint64_t(num)} / Word256{std::uint64_t(den)};
      scaled.amount1 = pool.amount1 * Word256{std::uint64_t(num)} / Word256{std::uint64_t(den)};
      const CirclePair p = establish(scaled);
      const Rational e(num, den);
      const Rational omega_e = Rational(big(p.total_supply()));
      const Rational m_e(BigInt(p.circle().mu));
      const std::string tag = " e=" + e.str();
      c.expect(abs(omega_e - e * exact_omega) < 1, "Omega vs exact" + tag);
      c.expect(abs(omega_e - e * omega) <= 1, "Omega" + tag);
      c.expect(abs(m_e - m / e) <= 1, "M" + tag);
    }
    ++tested;
  }
  return c.outcome(std::to_string(tested) + " pools x e in {2, 3, 7/2}: Omega scales by e, M by 1/e, within 1 unit");
}

Outcome conservation() {
  constexpr int kTrips = 1000;
  Check c;
  BigInt worst0 = 0;
  BigInt worst1 = 0;
  int trips = 0;
  for (int i = 0; i < kTrips; ++i) {
    CirclePair p = establish(random_pool(), uniform(0, 1) == 1);
    // Move the ratio off the initial one first.
    const TokenIndex in = uniform(0, 1) ? TokenIndex::k0 : TokenIndex::k1;
    const Word256& rin = in == TokenIndex::k0 ? p.reserves().reserve0 : p.reserves().reserve1;
    try {
      p.swap_exact_in(in, random_between(Word256{1}, rin / Word256{uniform(2, 20)} | Word256{1}), 1);
    } catch (const AmmError&) {
    }
    const Word256 dx = random_between(Word256{1}, p.reserves().reserve0);
    AddResult a;
    try {
      a = p.add_liquidity(dx, "user", 2);
    } catch (const AmmError&) {
      continue;
    }
    // Per operation: the fixed-point add and remove each sit within one
    // unit of the exact share arithmetic.
    const Rational x1(big(p.reserves().reserve0));
    const Rational y1(big(p.reserves().reserve1));
    const Rational s1(big(p.total_supply()));
    const RemoveResult r = p.remove_liquidity(a.minted, "user", 3);
    const auto exact = oracle::exact_remove(x1, y1, s1, Rational(big(a.minted)));
    c.expect(Rational(big(r.amount0)) <= exact.amount0 && exact.amount0 - big(r.amount0) < 1, "remove token0");
    c.expect(Rational(big(r.amount1)) <= exact.amount1 && exact.amount1 - big(r.amount1) < 1, "remove token1");

    c.expect(r.amount0 <= dx, "paid out more token0 than deposited");
    c.expect(r.amount1 <= a.amount1, "paid out more token1 than deposited");
    const BigInt d0 = big(dx) - big(r.amount0);
    const BigInt d1 = big(a.amount1) - big(r.amount1);
    worst0 = std::max(worst0, d0);
    worst1 = std::max(worst1, d1);
    // Two operations, at most one unit each.
    c.expect(d0 <= 2 && d1 <= 2, "round-trip deficit " + d0.str() + ", " + d1.str());
    ++trips;
  }
  c.expect(trips >= 900, "too few round trips: " + std::to_string(trips));
  return c.outcome(std::to_string(trips) + " round trips, never overpaid, worst deficit " + worst0.str() + " / " +
                   worst1.str() + " units over two operations");
}

// floor(2^112 * P_{y/x}) from the circle formula, independent of the pair.
BigInt hand_price(const CirclePair& p) {
  const CircleParams& k = p.circle();
  const BigInt c = ten_to(37);
  const BigInt u0 = BigInt(k.d0) * k.lambda0 * k.mu * big(p.reserves().reserve0) * 1000;
  const BigInt u1 = BigInt(k.d1) * k.lambda1 * k.mu * big(p.reserves().reserve1) * 1000;
  const BigInt num = BigInt(k.d0) * k.lambda0 * (c - u0);
  const BigInt den = BigInt(k.d1) * k.lambda1 * (c - u1);
  return (num << kPriceFracBits) / den;
}

Outcome twap() {
  Check c;
  CirclePair p;
  PairConfig cfg;
  cfg.lambda1 = 3;
  p.establish(coins(3'000'000), coins(1'000'000), cfg, "lp", 1000);
  struct Leg {
    std::uint32_t seconds;
    int trade;  // 0 none, 1 sell token0, 2 sell token1
  };
  const Leg legs[] = {{60, 1}, {45, 2}, {300, 1}, {7, 0}, {1200, 2}};
  BigInt expected = 0;
  BigInt window = 0;  // hand sum over every leg after the first
  BigInt checkpoint = 0;
  std::uint32_t now = 1000;
  std::uint32_t span = 0;
  for (const Leg& leg : legs) {
    const BigInt price = hand_price(p);
    now += leg.seconds;
    span += leg.seconds;
    expected += price * leg.seconds;
    if (&leg != &legs[0]) window += price * leg.seconds;
    if (leg.trade == 1) p.swap_exact_in(TokenIndex::k0, coins(150'000), now);
    if (leg.trade == 2) p.swap_exact_in(TokenIndex::k1, coins(90'000), now);
    if (leg.trade == 0) p.update_cumulative(now);
    c.expect(big(p.price_cumulative()) == expected, "cumulative after " + std::to_string(span) + " s");
    if (&leg == &legs[0]) checkpoint = big(p.price_cumulative());
  }
  // Two observations bracket the window; their difference over its length is the mean.
  const std::uint32_t length = span - legs[0].seconds;
  const Rational twap_fixed(big(p.price_cumulative()) - checkpoint, length);
  c.expect(twap_fixed == Rational(window, length), "TWAP over the window");
  const double mean = static_cast<double>(twap_fixed / Rational(BigInt(1) << kPriceFracBits));
  return c.outcome(std::to_string(std::size(legs)) + " constant-price legs over " + std::to_string(span) +
                   " s match the hand sum exactly, window TWAP " + fmt(mean));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"price table", price_table},
      {"worked fee-free trade", worked_trade},
      {"boundary prices r=16000", boundary_prices},
      {"scaling variable", mu_correctness},
      {"swap differential", swap_differential},
      {"square roots", square_roots},
      {"division", division},
      {"fee identity", fee_identity},
      {"homogeneity", homogeneity},
      {"conservation", conservation},
      {"TWAP", twap},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
