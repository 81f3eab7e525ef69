#include "coinswap/rational_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "coinswap/circle_pair.hpp"
#include "coinswap/flat_pair.hpp"

namespace coinswap::oracle {

namespace mp = boost::multiprecision;

namespace {

template <std::size_t N>
BigInt limbs_to_big(const UInt<N>& w) {
  BigInt v = 0;
  for (std::size_t i = N; i-- > 0;) {
    v <<= 64;
    v += w.limb(i);
  }
  return v;
}

int sign(const Rational& v) { return v.sign(); }

BigInt floor_rational(const Rational& v) {
  BigInt q = mp::numerator(v) / mp::denominator(v);  // truncates toward zero
  if (v.sign() < 0 && Rational(q) != v) q -= 1;
  return q;
}

// floor(sqrt(v)) scaled: floor(k * sqrt(v)) for rational v >= 0, integer k > 0.
BigInt scaled_sqrt_floor(const Rational& v, const BigInt& k) {
  const BigInt a = mp::numerator(v);
  const BigInt b = mp::denominator(v);
  // k*sqrt(a/b) = sqrt(a*b*k^2) / b
  return mp::sqrt(BigInt(a * b * k * k)) / b;
}

}  // namespace

BigInt to_big(const Word256& w) { return limbs_to_big(w); }
BigInt to_big(const Word512& w) { return limbs_to_big(w); }

Word256 to_word(const BigInt& v) {
  if (v < 0 || (v != 0 && mp::msb(v) >= 256))
    throw std::out_of_range("value does not fit 256 bits");
  std::array<std::uint64_t, 4> l{};
  BigInt t = v;
  const BigInt mask = (BigInt(1) << 64) - 1;
  for (auto& limb : l) {
    limb = static_cast<std::uint64_t>(t & mask);
    t >>= 64;
  }
  return Word256::from_limbs(l);
}

Rational pow10(unsigned k) { return Rational(mp::pow(BigInt(10), k)); }

int Surd::compare(const Rational& t) const {
  const Rational u = p - t;
  if (q.is_zero() || s.is_zero()) return sign(u);
  const int sq = sign(q);
  const int su = sign(u);
  if (su == 0 || su == sq) return sq;
  const Rational uu = u * u;
  const Rational qq = q * q * s;
  if (uu == qq) return 0;
  return uu > qq ? su : sq;
}

BigInt Surd::floor() const {
  BigInt est;
  if (q.is_zero() || s.is_zero()) return floor_rational(p);
  // |q| / k < 1 keeps the estimate within a couple of units.
  const BigInt k = 4 * (mp::abs(mp::numerator(q)) / mp::denominator(q) + 1);
  const BigInt root = scaled_sqrt_floor(s, k);
  est = floor_rational(p + q * Rational(root, k));
  while (compare(Rational(est)) < 0) est -= 1;
  while (compare(Rational(est + 1)) >= 0) est += 1;
  return est;
}

BigInt Surd::ceil() const {
  BigInt f = floor();
  return compare(Rational(f)) == 0 ? f : f + 1;
}

Surd Surd::reciprocal() const {
  if (q.is_zero() || s.is_zero()) {
    if (p.is_zero()) throw std::domain_error("reciprocal of zero");
    return exact(1 / p);
  }
  const Rational n = p * p - q * q * s;
  if (n.is_zero()) throw std::domain_error("reciprocal of zero");
  return Surd{p / n, -q / n, s};
}

int compare(const Surd& a, const Surd& b) {
  if (a.q.is_zero() || a.s.is_zero()) return -b.compare(a.p);
  if (b.q.is_zero() || b.s.is_zero()) return a.compare(b.p);
  if (a.s != b.s) throw std::invalid_argument("surds over different radicands");
  return Surd{a.p - b.p, a.q - b.q, a.s}.compare(0);
}

double Surd::approx() const {
  return static_cast<double>(p) + static_cast<double>(q) * std::sqrt(static_cast<double>(s));
}

SigDecimal round_sig(const Surd& value) {
  if (value.compare(0) <= 0) throw std::domain_error("round_sig needs a positive value");
  constexpr int kDigits = static_cast<int>(SigDecimal::kSignificantDigits);
  // Decade e with 10^e <= value < 10^(e+1).
  int e = static_cast<int>(std::floor(std::log10(value.approx())));
  auto ten = [](int k) { return k >= 0 ? pow10(static_cast<unsigned>(k)) : 1 / pow10(static_cast<unsigned>(-k)); };
  while (value.compare(ten(e)) < 0) --e;
  while (value.compare(ten(e + 1)) >= 0) ++e;

  const int shift = kDigits - 1 - e;
  BigInt mantissa = (value * ten(shift) + Rational(1, 2)).floor();
  int exponent = -shift;
  if (mantissa >= mp::pow(BigInt(10), kDigits)) {
    mantissa /= 10;
    ++exponent;
  }
  return SigDecimal{static_cast<std::uint64_t>(mantissa), exponent};
}

Rational RationalState::cost_at(const Rational& x1, const Rational& y1) const {
  const Rational u = lambda0 * mu * x1 - center;
  const Rational v = lambda1 * mu * y1 - center;
  return u * u + v * v;
}

Rational RationalState::cost() const { return cost_at(x, y); }

namespace {

struct Axes {
  Rational in_weight;   // lambda_in * mu
  Rational out_weight;  // lambda_out * mu
  Rational in_reserve;
  Rational out_reserve;
};

Axes axes(const RationalState& s, TokenIndex in) {
  if (in == TokenIndex::k0) return Axes{s.lambda0 * s.mu, s.lambda1 * s.mu, s.x, s.y};
  return Axes{s.lambda1 * s.mu, s.lambda0 * s.mu, s.y, s.x};
}

}  // namespace

Surd exact_swap(const RationalState& s, TokenIndex in, const Rational& amount_in, const Rational& fee) {
  if (amount_in.is_zero()) return Surd::exact(0);
  const Axes a = axes(s, in);
  const Rational& c = s.center;
  if (a.in_weight * (a.in_reserve + amount_in) >= c) throw std::domain_error("input crosses the center");
  const Rational moved = a.in_weight * (a.in_reserve + (1 - fee) * amount_in) - c;
  const Rational budget = s.cost() - moved * moved;
  // out_weight * y1 = c - sqrt(budget)
  const Surd out{a.out_reserve - c / a.out_weight, 1 / a.out_weight, budget};
  if (out.compare(a.out_reserve) > 0) throw std::domain_error("output exceeds the reserve");
  return out;
}

Surd exact_amount_in(const RationalState& s, TokenIndex in, const Rational& amount_out, const Rational& fee) {
  if (amount_out.is_zero()) return Surd::exact(0);
  const Axes a = axes(s, in);
  const Rational& c = s.center;
  if (amount_out > a.out_reserve) throw std::domain_error("output exceeds the reserve");
  const Rational moved = a.out_weight * (a.out_reserve - amount_out) - c;
  const Rational budget = s.cost() - moved * moved;
  if (budget.sign() < 0) throw std::domain_error("output unreachable on this level set");
  // in_weight * (x + (1 - fee) * dx) = c - sqrt(budget)
  const Rational k = 1 / (a.in_weight * (1 - fee));
  return Surd{(c / a.in_weight - a.in_reserve) / (1 - fee), -k, budget};
}

Surd exact_mu(const Rational& x, const Rational& y, const Rational& lambda0, const Rational& lambda1,
              std::uint32_t r) {
  const Rational c = pow10(9);
  const Rational a = lambda0 * x;
  const Rational b = lambda1 * y;
  const Rational sum = a + b;
  const Rational sq = a * a + b * b;
  if (sq.is_zero()) throw std::domain_error("empty pool");
  const Rational radius_sq = Rational(r) * pow10(14);
  const Rational disc = c * c * sum * sum - sq * (2 * c * c - radius_sq);
  if (disc.sign() < 0) throw std::domain_error("ray misses the circle");
  const Surd mu{c * sum / sq, -1 / sq, disc};
  if (compare(mu * a, Surd::exact(c)) >= 0 || compare(mu * b, Surd::exact(c)) >= 0)
    throw std::domain_error("root lies past the center");
  return mu;
}

Rational spot_price(const RationalState& s) {
  const Rational den = s.lambda1 * (s.center - s.lambda1 * s.mu * s.y);
  if (den.is_zero()) throw std::domain_error("degenerate price");
  return s.lambda0 * (s.center - s.lambda0 * s.mu * s.x) / den;
}

namespace {

Surd multiply(const Surd& a, const Surd& b) {
  if (a.q.is_zero() || a.s.is_zero()) return b * a.p;
  if (b.q.is_zero() || b.s.is_zero()) return a * b.p;
  if (a.s != b.s) throw std::invalid_argument("surds over different radicands");
  return Surd{a.p * b.p + a.q * b.q * a.s, a.p * b.q + a.q * b.p, a.s};
}

}  // namespace

Surd level_slope(const RationalState& s, const Surd& x, const Surd& y) {
  const Surd num = (x * (s.lambda0 * s.mu) + (-s.center)) * (-s.lambda0);
  const Surd den = (y * (s.lambda1 * s.mu) + (-s.center)) * s.lambda1;
  return multiply(num, den.reciprocal());
}

ExactBounds exact_price_bounds(std::uint32_t r) {
  if (r <= kRadiusBase || r > kRadiusBase + kMaxRSquare) throw std::domain_error("radius out of range");
  const Rational k = r - kRadiusBase;
  return ExactBounds{Surd{0, Rational(1, 100), k}, Surd{0, 100 / k, k}};
}

ExactAdd exact_add(const Rational& x0, const Rational& y0, const Rational& supply, const Rational& amount0) {
  return ExactAdd{amount0 * y0 / x0, supply * amount0 / x0};
}

ExactRemove exact_remove(const Rational& x0, const Rational& y0, const Rational& supply, const Rational& liquidity) {
  return ExactRemove{liquidity * x0 / supply, liquidity * y0 / supply};
}

Rational exact_fee_mint(const Rational& supply, const Rational& mu0, const Rational& mu) {
  return supply * (mu0 - mu) / (5 * mu0 + mu);
}

Rational exact_flat_fee(const Rational& supply, const Rational& lambda_in, const Rational& amount_in,
                        const Rational& value) {
  return Rational(3, 1000) * supply * lambda_in * amount_in / value;
}

Rational exact_initial_supply(const Rational& lambda0, const Rational& x0, const Rational& lambda1,
                              const Rational& y0) {
  return (lambda0 * x0 + lambda1 * y0) / 2;
}

namespace {

const Rational& coin() {
  static const Rational v = pow10(18);
  return v;
}

Rational factor(const CircleParams& c, TokenIndex t) { return t == TokenIndex::k0 ? c.d0 : c.d1; }

}  // namespace

RationalState state_of(const CirclePair& p) {
  const auto& c = p.circle();
  RationalState s;
  s.x = Rational(to_big(p.reserves().reserve0)) * c.d0 / coin();
  s.y = Rational(to_big(p.reserves().reserve1)) * c.d1 / coin();
  s.lambda0 = c.lambda0;
  s.lambda1 = c.lambda1;
  s.mu = Rational(BigInt(c.mu), BigInt(10'000'000));
  s.radius_sq = Rational(c.radius()) * pow10(14);
  return s;
}

RationalState state_of(const FlatPair& p) {
  RationalState s;
  s.x = Rational(to_big(p.reserve0())) / coin();
  s.y = Rational(to_big(p.reserve1())) / coin();
  s.lambda0 = p.lambda0();
  s.lambda1 = p.lambda1();
  return s;
}

Rational swap_fee() { return Rational(3, 1000); }

Surd exact_out_raw(const CirclePair& p, TokenIndex in, const Word256& amount_in) {
  const Rational din = Rational(to_big(amount_in)) * factor(p.circle(), in) / coin();
  return exact_swap(state_of(p), in, din, swap_fee()) * (coin() / factor(p.circle(), other(in)));
}

Surd exact_out_raw(const FlatPair& p, TokenIndex in, const Word256& amount_in) {
  return exact_swap(state_of(p), in, Rational(to_big(amount_in)) / coin(), swap_fee()) * coin();
}

Surd exact_in_raw(const CirclePair& p, TokenIndex in, const Word256& amount_out) {
  const Rational dout = Rational(to_big(amount_out)) * factor(p.circle(), other(in)) / coin();
  return exact_amount_in(state_of(p), in, dout, swap_fee()) * (coin() / factor(p.circle(), in));
}

Surd exact_in_raw(const FlatPair& p, TokenIndex in, const Word256& amount_out) {
  return exact_amount_in(state_of(p), in, Rational(to_big(amount_out)) / coin(), swap_fee()) * coin();
}

BigInt exact_scaled_mu(const CircleParams& circle, const Word256& reserve0, const Word256& reserve1) {
  const Rational x = Rational(to_big(reserve0)) * circle.d0 / coin();
  const Rational y = Rational(to_big(reserve1)) * circle.d1 / coin();
  return (exact_mu(x, y, circle.lambda0, circle.lambda1, circle.radius()) * 10'000'000).ceil();
}

}  // namespace coinswap::oracle
