#include "coinswap/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "coinswap/circle_pair.hpp"
#include "coinswap/errors.hpp"
#include "coinswap/flat_pair.hpp"
#include "coinswap/rational_oracle.hpp"

namespace coinswap::sim {

using json = nlohmann::json;
using oracle::BigInt;
using oracle::Rational;
using oracle::Surd;

std::string_view to_string(Approach a) noexcept { return a == Approach::kCircle ? "circle" : "flat"; }

Approach parse_approach(std::string_view text) {
  if (text == "circle") return Approach::kCircle;
  if (text == "flat") return Approach::kFlat;
  throw std::invalid_argument("approach must be 'circle' or 'flat', got '" + std::string(text) + "'");
}

namespace {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Op { kCreate, kAdd, kRemove, kSwap, kQuote, kCollectFee, kSkim, kAdvanceTime, kOracleSwap };

struct OpSpec {
  std::string_view name;
  Op op;
  std::set<std::string_view> keys;
};

const std::vector<OpSpec>& op_specs() {
  static const std::vector<OpSpec> specs = {
      {"create",
       Op::kCreate,
       {"amount0", "amount1", "r_square", "lambda0", "lambda1", "decimals0", "decimals1", "to", "approach", "fee_on"}},
      {"add", Op::kAdd, {"amount0", "to"}},
      {"remove", Op::kRemove, {"liquidity", "from"}},
      {"swap", Op::kSwap, {"token_in", "amount_in", "amount_out"}},
      {"quote", Op::kQuote, {"token_in", "amount_in", "amount_out"}},
      {"collect_fee", Op::kCollectFee, {}},
      {"skim", Op::kSkim, {"donate0", "donate1"}},
      {"advance_time", Op::kAdvanceTime, {"seconds"}},
      {"oracle_swap",
       Op::kOracleSwap,
       {"x", "y", "center", "lambda0", "lambda1", "mu", "fee", "token_in", "amount_in", "amount_out"}},
  };
  return specs;
}

struct Event {
  std::size_t line = 0;
  Op op = Op::kCreate;
  std::string name;

  PairConfig config;
  std::optional<Approach> approach;
  std::optional<bool> fee_on;
  std::string holder = "lp";
  TokenIndex token = TokenIndex::k0;
  Word256 amount0;
  Word256 amount1;
  std::optional<Word256> amount_in;
  std::optional<Word256> amount_out;
  std::optional<Word256> liquidity;  // empty: the holder's whole balance
  std::uint32_t seconds = 0;

  oracle::RationalState exact;
  Rational fee;
  Rational exact_amount;

  json expect;
};

Word256 parse_amount(const json& body, const std::string& key) {
  const json& v = body.at(key);
  if (!v.is_string()) throw ParseError("field '" + key + "' must be a decimal string");
  try {
    return Word256::from_decimal(v.get<std::string>());
  } catch (const std::exception&) {
    throw ParseError("field '" + key + "' is not a 256-bit decimal: " + v.get<std::string>());
  }
}

std::optional<Word256> optional_amount(const json& body, const std::string& key) {
  if (!body.contains(key)) return std::nullopt;
  return parse_amount(body, key);
}

Word256 required_amount(const json& body, const std::string& key) {
  if (!body.contains(key)) throw ParseError("missing field '" + key + "'");
  return parse_amount(body, key);
}

std::uint64_t parse_integer(const json& body, const std::string& key, std::uint64_t fallback, std::uint64_t max) {
  if (!body.contains(key)) return fallback;
  const json& v = body.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw ParseError("field '" + key + "' must be a non-negative integer");
  const auto n = v.get<std::uint64_t>();
  if (n > max) throw ParseError("field '" + key + "' exceeds " + std::to_string(max));
  return n;
}

std::string parse_text(const json& body, const std::string& key, const std::string& fallback) {
  if (!body.contains(key)) return fallback;
  const json& v = body.at(key);
  if (!v.is_string() || v.get<std::string>().empty()) throw ParseError("field '" + key + "' must be a non-empty string");
  return v.get<std::string>();
}

// "n" or "n/d" with non-negative integers n and d > 0.
Rational parse_rational(const json& body, const std::string& key, const Rational& fallback) {
  if (!body.contains(key)) return fallback;
  const json& v = body.at(key);
  if (!v.is_string()) throw ParseError("field '" + key + "' must be a rational string");
  const std::string s = v.get<std::string>();
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto digits = [](const std::string& t) {
    return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!digits(num) || !digits(den) || BigInt(den) == 0) throw ParseError("field '" + key + "' is not a rational: " + s);
  return Rational(BigInt(num), BigInt(den));
}

TokenIndex parse_token(const json& body) {
  if (!body.contains("token_in")) throw ParseError("missing field 'token_in'");
  return parse_integer(body, "token_in", 0, 1) == 0 ? TokenIndex::k0 : TokenIndex::k1;
}

Event parse_event(const json& body, std::size_t line) {
  if (!body.is_object()) throw ParseError("event must be a JSON object");
  if (!body.contains("op") || !body.at("op").is_string()) throw ParseError("missing string field 'op'");
  Event e;
  e.line = line;
  e.name = body.at("op").get<std::string>();
  const auto& specs = op_specs();
  const auto spec = std::find_if(specs.begin(), specs.end(), [&](const OpSpec& s) { return s.name == e.name; });
  if (spec == specs.end()) throw ParseError("unknown op '" + e.name + "'");
  e.op = spec->op;
  for (const auto& [key, value] : body.items()) {
    if (key != "op" && key != "expect" && !spec->keys.contains(key))
      throw ParseError("op '" + e.name + "' does not take field '" + key + "'");
  }
  if (body.contains("expect")) {
    e.expect = body.at("expect");
    if (!e.expect.is_object()) throw ParseError("'expect' must be an object");
  }

  switch (e.op) {
    case Op::kCreate:
      e.amount0 = required_amount(body, "amount0");
      e.amount1 = required_amount(body, "amount1");
      e.config.r_square = static_cast<std::uint16_t>(parse_integer(body, "r_square", 6000, 0xFFFF));
      e.config.lambda0 = static_cast<std::uint16_t>(parse_integer(body, "lambda0", 1, 0xFFFF));
      e.config.lambda1 = static_cast<std::uint16_t>(parse_integer(body, "lambda1", 1, 0xFFFF));
      e.config.decimals0 = static_cast<unsigned>(parse_integer(body, "decimals0", 18, 18));
      e.config.decimals1 = static_cast<unsigned>(parse_integer(body, "decimals1", 18, 18));
      e.holder = parse_text(body, "to", "lp");
      if (body.contains("approach")) {
        try {
          e.approach = parse_approach(parse_text(body, "approach", ""));
        } catch (const std::invalid_argument& ex) {
          throw ParseError(ex.what());
        }
      }
      if (body.contains("fee_on")) {
        if (!body.at("fee_on").is_boolean()) throw ParseError("field 'fee_on' must be a boolean");
        e.fee_on = body.at("fee_on").get<bool>();
      }
      break;
    case Op::kAdd:
      e.amount0 = required_amount(body, "amount0");
      e.holder = parse_text(body, "to", "lp");
      break;
    case Op::kRemove:
      e.holder = parse_text(body, "from", "lp");
      if (body.contains("liquidity") && body.at("liquidity") != "all") e.liquidity = parse_amount(body, "liquidity");
      break;
    case Op::kSwap:
    case Op::kQuote:
      e.token = parse_token(body);
      e.amount_in = optional_amount(body, "amount_in");
      e.amount_out = optional_amount(body, "amount_out");
      if (e.op == Op::kSwap && !e.amount_in) throw ParseError("swap needs 'amount_in'");
      if (e.op == Op::kQuote && e.amount_in.has_value() == e.amount_out.has_value())
        throw ParseError("quote needs exactly one of 'amount_in' and 'amount_out'");
      break;
    case Op::kCollectFee:
      break;
    case Op::kSkim:
      e.amount0 = optional_amount(body, "donate0").value_or(Word256{});
      e.amount1 = optional_amount(body, "donate1").value_or(Word256{});
      break;
    case Op::kAdvanceTime:
      if (!body.contains("seconds")) throw ParseError("missing field 'seconds'");
      e.seconds = static_cast<std::uint32_t>(parse_integer(body, "seconds", 0, 0xFFFFFFFFULL));
      break;
    case Op::kOracleSwap: {
      if (!body.contains("x") || !body.contains("y")) throw ParseError("oracle_swap needs 'x' and 'y'");
      e.exact.x = parse_rational(body, "x", 0);
      e.exact.y = parse_rational(body, "y", 0);
      e.exact.center = parse_rational(body, "center", e.exact.center);
      e.exact.lambda0 = parse_rational(body, "lambda0", 1);
      e.exact.lambda1 = parse_rational(body, "lambda1", 1);
      e.exact.mu = parse_rational(body, "mu", 1);
      e.fee = parse_rational(body, "fee", 0);
      if (e.fee >= 1) throw ParseError("fee must be below 1");
      e.token = parse_token(body);
      const bool has_in = body.contains("amount_in");
      if (has_in == body.contains("amount_out"))
        throw ParseError("oracle_swap needs exactly one of 'amount_in' and 'amount_out'");
      e.amount_in = has_in ? std::optional<Word256>(Word256{}) : std::nullopt;
      e.exact_amount = parse_rational(body, has_in ? "amount_in" : "amount_out", 0);
      break;
    }
  }
  return e;
}

std::string dec(const Word256& v) { return v.to_decimal(); }
std::string dec(const BigInt& v) { return v.str(); }

BigInt big(const Word256& v) { return oracle::to_big(v); }

// Which side of the correctly rounded oracle value a result may fall on.
enum class Side { kNotAbove, kNotBelow, kEither };

class Session {
 public:
  Session(const RunConfig& config, RunResult* result) : config_(config), result_(result) {}

  json apply(const Event& e);
  json take_oracle() { return std::exchange(oracle_, json::object()); }
  std::string digest() const { return approach_ == Approach::kCircle ? circle_.digest() : flat_.digest(); }
  std::uint32_t now() const { return now_; }

  // Used by the random generator to size events.
  bool established() const { return approach_ == Approach::kCircle ? circle_.established() : flat_.established(); }
  Word256 reserve(TokenIndex t) const {
    if (approach_ == Approach::kCircle)
      return t == TokenIndex::k0 ? circle_.reserves().reserve0 : circle_.reserves().reserve1;
    return t == TokenIndex::k0 ? flat_.reserve0() : flat_.reserve1();
  }
  Word256 balance_of(const std::string& holder) const {
    return approach_ == Approach::kCircle ? circle_.ledger().balance_of(holder) : flat_.ledger().balance_of(holder);
  }
  Word256 supply() const { return approach_ == Approach::kCircle ? circle_.total_supply() : flat_.total_supply(); }
  SwapQuote quote_out(TokenIndex in, const Word256& amount) const {
    return approach_ == Approach::kCircle ? circle_.get_amount_out(in, amount) : flat_.get_amount_out(in, amount);
  }

 private:
  json create(const Event& e);
  json add(const Event& e);
  json remove(const Event& e);
  json swap(const Event& e);
  json quote(const Event& e);
  json collect_fee();
  json skim(const Event& e);
  json oracle_swap(const Event& e) const;

  void require_created() const {
    if (!created_) throw AmmError(AmmErrc::kUnestablished, "no pair has been created");
  }

  void record(const std::string& cls, const std::string& field, const BigInt& fixed, const BigInt& rounded,
              std::uint64_t envelope, Side side);
  template <typename Pair>
  void check_swap(const Pair& pre, const SwapQuote& q, bool exact_in);
  void check_circle_fee(const CirclePair& before, const Word256& fee);
  void check_mu();
  void check_state(bool mu_refreshed);
  void flow_in(TokenIndex t, const Word256& v) { (t == TokenIndex::k0 ? in0_ : in1_) += big(v); }
  void flow_out(TokenIndex t, const Word256& v) { (t == TokenIndex::k0 ? out0_ : out1_) += big(v); }

  RunConfig config_;
  RunResult* result_;
  Approach approach_ = Approach::kCircle;
  bool created_ = false;
  CirclePair circle_;
  FlatPair flat_;
  std::uint32_t now_ = 0;
  BigInt in0_, in1_, out0_, out1_;
  Word512 flat_residual_;
  json oracle_ = json::object();
};

void Session::record(const std::string& cls, const std::string& field, const BigInt& fixed, const BigInt& rounded,
                     std::uint64_t envelope, Side side) {
  const BigInt dev = fixed - rounded;
  oracle_[field] = dec(dev);
  Deviation& d = result_->deviations[cls];
  d.envelope = envelope;
  ++d.samples;
  const BigInt mag = dev < 0 ? BigInt(-dev) : dev;
  if (mag > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    d.max_abs = std::numeric_limits<std::uint64_t>::max();
  } else {
    d.max_abs = std::max(d.max_abs, static_cast<std::uint64_t>(mag));
  }
  if (mag > envelope || (side == Side::kNotAbove && dev > 0) || (side == Side::kNotBelow && dev < 0))
    throw InvariantError(cls + "." + field + " is " + dec(fixed) + ", oracle " + dec(rounded));
}

Word256 pre_reserve(const CirclePair& p, TokenIndex t) {
  return t == TokenIndex::k0 ? p.reserves().reserve0 : p.reserves().reserve1;
}

Word256 pre_reserve(const FlatPair& p, TokenIndex t) { return t == TokenIndex::k0 ? p.reserve0() : p.reserve1(); }

// Largest admissible output: the floor of the exact output, except that
// quotes never take the output reserve below one unit.
template <typename Pair>
BigInt best_out(const Pair& pre, TokenIndex in, const Word256& amount_in) {
  const BigInt cap = big(pre_reserve(pre, other(in))) - 1;
  const Surd exact = [&] {
    try {
      return oracle::exact_out_raw(pre, in, amount_in);
    } catch (const std::domain_error&) {
      // Past the reserve the clamp decides. Inputs that cross the center
      // never get here: the pair rejects them first.
      return Surd::exact(Rational(cap + 1));
    }
  }();
  return std::min(exact.floor(), cap);
}

template <typename Pair>
void Session::check_swap(const Pair& pre, const SwapQuote& q, bool exact_in) {
  if (!config_.verify) return;
  try {
    if (exact_in) {
      record("swap_out", "amount_out", big(q.amount_out), best_out(pre, q.token_in, q.amount_in), 1, Side::kNotAbove);
    } else {
      const Surd exact = oracle::exact_in_raw(pre, q.token_in, q.amount_out);
      record("swap_in", "amount_in", big(q.amount_in), exact.ceil(), 1, Side::kNotBelow);
    }
  } catch (const std::domain_error& ex) {
    throw InvariantError(std::string("oracle has no solution for an accepted trade: ") + ex.what());
  }
}

void Session::check_circle_fee(const CirclePair& before, const Word256& fee) {
  if (!config_.verify) return;
  const BigInt fresh =
      oracle::exact_scaled_mu(before.circle(), before.reserves().reserve0, before.reserves().reserve1);
  const BigInt mu0 = before.circle().mu;
  BigInt expected = 0;
  if (before.fee_on() && fresh < mu0)
    expected = Surd::exact(oracle::exact_fee_mint(Rational(big(before.total_supply())), mu0, fresh)).floor();
  record("protocol_fee", "protocol_fee", big(fee), expected, 1, Side::kNotAbove);
}

void Session::check_mu() {
  if (!config_.verify || approach_ != Approach::kCircle || !circle_.established()) return;
  const BigInt m = oracle::exact_scaled_mu(circle_.circle(), circle_.reserves().reserve0, circle_.reserves().reserve1);
  record("mu", "mu", BigInt(circle_.circle().mu), m, 0, Side::kEither);
}

void Session::check_state(bool mu_refreshed) {
  auto fail = [](const std::string& what) { throw InvariantError(what); };
  const Word256 r0 = reserve(TokenIndex::k0);
  const Word256 r1 = reserve(TokenIndex::k1);
  if (big(r0) != in0_ - out0_ || big(r1) != in1_ - out1_) fail("reserves differ from the recorded token flows");

  const LiquidityLedger& ledger = approach_ == Approach::kCircle ? circle_.ledger() : flat_.ledger();
  Word256 sum;
  for (const auto& [holder, amount] : ledger.balances()) sum += amount;
  if (sum != ledger.total_supply()) fail("liquidity balances do not add up to the total supply");
  if (ledger.total_supply().is_zero() != (r0.is_zero() && r1.is_zero()) || r0.is_zero() != r1.is_zero())
    fail("liquidity supply and reserves disagree on emptiness");
  if (ledger.total_supply().is_zero()) return;

  const Word256 scale{geometry::kFeeScale};
  if (approach_ == Approach::kCircle) {
    const auto c = circle_.trading_circle();
    if (geometry::coordinate(c.weight0, scale * r0) >= c.center ||
        geometry::coordinate(c.weight1, scale * r1) >= c.center)
      fail("weighted reserve at or past the circle center");
    if (circle_.residual() > mul_wide(Word256{circle_.circle().radius()}, Word256::pow10(70)))
      fail("reserves lie outside the circle");
    if (mu_refreshed && !mu_is_minimal(circle_.weighted_amount(TokenIndex::k0),
                                       circle_.weighted_amount(TokenIndex::k1), circle_.circle().radius(),
                                       Word256{circle_.circle().mu}))
      fail("stored M is not the minimal admissible value");
  } else {
    const auto c = flat_.trading_circle();
    if (geometry::coordinate(c.weight0, scale * r0) >= c.center ||
        geometry::coordinate(c.weight1, scale * r1) >= c.center)
      fail("weighted reserve at or past the circle center");
  }
}

json Session::apply(const Event& e) {
  switch (e.op) {
    case Op::kCreate: return create(e);
    case Op::kAdd: return add(e);
    case Op::kRemove: return remove(e);
    case Op::kSwap: return swap(e);
    case Op::kQuote: return quote(e);
    case Op::kCollectFee: return collect_fee();
    case Op::kSkim: return skim(e);
    case Op::kAdvanceTime:
      now_ += e.seconds;
      return json{{"time", std::to_string(now_)}};
    case Op::kOracleSwap: return oracle_swap(e);
  }
  return json::object();
}

json Session::create(const Event& e) {
  if (created_ && established()) throw AmmError(AmmErrc::kAlreadyEstablished, "pair already holds liquidity");
  const Approach approach = e.approach.value_or(config_.approach);
  const bool fee_on = e.fee_on.value_or(config_.fee_on);
  json out;
  if (approach == Approach::kCircle) {
    CirclePair pair(fee_on);
    out["minted"] = dec(pair.establish(e.amount0, e.amount1, e.config, e.holder, now_));
    out["mu"] = std::to_string(pair.circle().mu);
    circle_ = std::move(pair);
    flat_ = FlatPair();
  } else {
    if (e.config.decimals0 != 18 || e.config.decimals1 != 18)
      throw AmmError(AmmErrc::kOutOfRange, "flat pairs take 18-decimal tokens only");
    FlatPair pair(fee_on);
    out["minted"] = dec(pair.establish(e.amount0, e.amount1, e.config.lambda0, e.config.lambda1, e.holder));
    flat_ = std::move(pair);
    circle_ = CirclePair();
    flat_residual_ = flat_.residual();
  }
  approach_ = approach;
  created_ = true;
  in0_ = big(e.amount0);
  in1_ = big(e.amount1);
  out0_ = out1_ = 0;

  if (config_.verify) {
    const std::uint64_t d0 = approach == Approach::kCircle ? circle_.circle().d0 : 1;
    const std::uint64_t d1 = approach == Approach::kCircle ? circle_.circle().d1 : 1;
    const Rational exact = oracle::exact_initial_supply(e.config.lambda0, Rational(big(e.amount0)) * d0,
                                                        e.config.lambda1, Rational(big(e.amount1)) * d1);
    record("create", "minted", big(supply()), Surd::exact(exact).floor(), 0, Side::kEither);
  }
  check_mu();
  check_state(true);
  return out;
}

json Session::add(const Event& e) {
  require_created();
  const Word256 x0 = reserve(TokenIndex::k0);
  const Word256 y0 = reserve(TokenIndex::k1);
  AddResult r;
  if (approach_ == Approach::kCircle) {
    const CirclePair before = circle_;
    r = circle_.add_liquidity(e.amount0, e.holder, now_);
    check_circle_fee(before, r.protocol_fee);
  } else {
    r = flat_.add_liquidity(e.amount0, e.holder);
    flat_residual_ = flat_.residual();
  }
  flow_in(TokenIndex::k0, e.amount0);
  flow_in(TokenIndex::k1, r.amount1);
  if (config_.verify) {
    const Rational s = Rational(big(supply() - r.minted));
    const auto exact = oracle::exact_add(Rational(big(x0)), Rational(big(y0)), s, Rational(big(e.amount0)));
    record("add", "amount1", big(r.amount1), Surd::exact(exact.amount1).floor(), 1, Side::kEither);
    record("add", "minted", big(r.minted), Surd::exact(exact.minted).floor(), 1, Side::kNotAbove);
  }
  check_mu();
  check_state(approach_ == Approach::kCircle);
  return json{{"amount1", dec(r.amount1)}, {"minted", dec(r.minted)}, {"protocol_fee", dec(r.protocol_fee)}};
}

json Session::remove(const Event& e) {
  require_created();
  const Word256 x0 = reserve(TokenIndex::k0);
  const Word256 y0 = reserve(TokenIndex::k1);
  const Word256 liquidity = e.liquidity.value_or(balance_of(e.holder));
  RemoveResult r;
  if (approach_ == Approach::kCircle) {
    const CirclePair before = circle_;
    r = circle_.remove_liquidity(liquidity, e.holder, now_);
    check_circle_fee(before, r.protocol_fee);
  } else {
    r = flat_.remove_liquidity(liquidity, e.holder);
    flat_residual_ = flat_.residual();
  }
  flow_out(TokenIndex::k0, r.amount0);
  flow_out(TokenIndex::k1, r.amount1);
  if (config_.verify) {
    const Rational s = Rational(big(supply() + liquidity));
    const auto exact = oracle::exact_remove(Rational(big(x0)), Rational(big(y0)), s, Rational(big(liquidity)));
    record("remove", "amount0", big(r.amount0), Surd::exact(exact.amount0).floor(), 1, Side::kNotAbove);
    record("remove", "amount1", big(r.amount1), Surd::exact(exact.amount1).floor(), 1, Side::kNotAbove);
  }
  check_mu();
  check_state(approach_ == Approach::kCircle);
  return json{{"amount0", dec(r.amount0)},
              {"amount1", dec(r.amount1)},
              {"liquidity", dec(liquidity)},
              {"protocol_fee", dec(r.protocol_fee)}};
}

json Session::swap(const Event& e) {
  require_created();
  const TokenIndex in = e.token;
  const CirclePair circle_before = circle_;
  const FlatPair flat_before = flat_;
  SwapQuote q;
  Word256 protocol_fee;
  if (e.amount_out) {
    // Low-level swap: the caller names the output and the pair only verifies.
    geometry::SwapAmounts a;
    (in == TokenIndex::k0 ? a.in0 : a.in1) = *e.amount_in;
    (in == TokenIndex::k0 ? a.out1 : a.out0) = *e.amount_out;
    if (approach_ == Approach::kCircle)
      circle_.swap(a, now_);
    else
      protocol_fee = flat_.swap(a);
    q.token_in = in;
    q.amount_in = *e.amount_in;
    q.amount_out = *e.amount_out;
    if (config_.verify) {
      const BigInt bound = approach_ == Approach::kCircle ? best_out(circle_before, in, q.amount_in)
                                                          : best_out(flat_before, in, q.amount_in);
      if (big(q.amount_out) > bound) throw InvariantError("pair accepted an output above the exact bound");
    }
  } else if (approach_ == Approach::kCircle) {
    q = circle_.swap_exact_in(in, *e.amount_in, now_);
    check_swap(circle_before, q, true);
  } else {
    const FlatSwapResult r = flat_.swap_exact_in(in, *e.amount_in);
    q = r.quote;
    protocol_fee = r.protocol_fee;
    check_swap(flat_before, q, true);
  }
  flow_in(in, q.amount_in);
  flow_out(other(in), q.amount_out);
  if (approach_ == Approach::kFlat) {
    if (config_.verify) {
      BigInt expected = 0;
      if (flat_before.fee_on()) {
        const Rational fee = oracle::exact_flat_fee(
            Rational(big(flat_before.total_supply())), in == TokenIndex::k0 ? flat_.lambda0() : flat_.lambda1(),
            Rational(big(q.amount_in)), Rational(big(flat_before.value())));
        expected = Surd::exact(fee).floor();
      }
      record("protocol_fee", "protocol_fee", big(protocol_fee), expected, 1, Side::kNotAbove);
    }
    if (flat_.residual() > flat_residual_) throw InvariantError("swap moved the flat pair off its level set");
    flat_residual_ = flat_.residual();
  }
  check_state(false);
  json out{{"amount_in", dec(q.amount_in)}, {"amount_out", dec(q.amount_out)}};
  if (!e.amount_out) out["fee_amount"] = dec(q.fee_amount);
  if (approach_ == Approach::kFlat) out["protocol_fee"] = dec(protocol_fee);
  return out;
}

json Session::quote(const Event& e) {
  require_created();
  SwapQuote q;
  if (e.amount_in) {
    q = quote_out(e.token, *e.amount_in);
  } else {
    q = approach_ == Approach::kCircle ? circle_.get_amount_in(e.token, *e.amount_out)
                                       : flat_.get_amount_in(e.token, *e.amount_out);
  }
  if (approach_ == Approach::kCircle)
    check_swap(circle_, q, e.amount_in.has_value());
  else
    check_swap(flat_, q, e.amount_in.has_value());
  return json{{"amount_in", dec(q.amount_in)},
              {"amount_out", dec(q.amount_out)},
              {"fee_amount", dec(q.fee_amount)},
              {"post_reserve0", dec(q.post_reserve0)},
              {"post_reserve1", dec(q.post_reserve1)}};
}

json Session::collect_fee() {
  require_created();
  json out;
  if (approach_ == Approach::kCircle) {
    const CirclePair before = circle_;
    const Word256 fee = circle_.mint_fee(now_);
    check_circle_fee(before, fee);
    out["protocol_fee"] = dec(fee);
    out["mu"] = std::to_string(circle_.circle().mu);
    out["price_cumulative"] = dec(circle_.price_cumulative());
    check_mu();
  } else {
    // Flat pairs mint their fee on every swap; there is nothing to settle.
    out["protocol_fee"] = "0";
  }
  check_state(approach_ == Approach::kCircle);
  return out;
}

json Session::skim(const Event& e) {
  require_created();
  const Word256 b0 = reserve(TokenIndex::k0) + e.amount0;
  const Word256 b1 = reserve(TokenIndex::k1) + e.amount1;
  SkimResult r;
  if (approach_ == Approach::kCircle) {
    const CirclePair before = circle_;
    r = circle_.skim(b0, b1, now_);
    check_circle_fee(before, r.protocol_fee);
    check_mu();
  } else {
    r = flat_.skim(b0, b1);
  }
  flow_in(TokenIndex::k0, e.amount0);
  flow_in(TokenIndex::k1, e.amount1);
  flow_out(TokenIndex::k0, r.excess0);
  flow_out(TokenIndex::k1, r.excess1);
  check_state(approach_ == Approach::kCircle);
  return json{{"excess0", dec(r.excess0)}, {"excess1", dec(r.excess1)}, {"protocol_fee", dec(r.protocol_fee)}};
}

// (p + q*sqrt(s))^2 when it is rational.
std::optional<Rational> rational_square(const Surd& v) {
  if (!v.p.is_zero() && !v.q.is_zero() && !v.s.is_zero()) return std::nullopt;
  return v.p * v.p + v.q * v.q * v.s;
}

json Session::oracle_swap(const Event& e) const {
  const oracle::RationalState& s = e.exact;
  const TokenIndex in = e.token;
  const bool exact_in = e.amount_in.has_value();
  Surd amount;
  try {
    amount = exact_in ? oracle::exact_swap(s, in, e.exact_amount, e.fee)
                      : oracle::exact_amount_in(s, in, e.exact_amount, e.fee);
  } catch (const std::domain_error& ex) {
    throw AmmError(AmmErrc::kInsufficientOutputReserve, ex.what());
  }
  const Rational rin = in == TokenIndex::k0 ? s.x : s.y;
  const Rational rout = in == TokenIndex::k0 ? s.y : s.x;
  const Rational win = (in == TokenIndex::k0 ? s.lambda0 : s.lambda1) * s.mu;
  const Rational wout = (in == TokenIndex::k0 ? s.lambda1 : s.lambda0) * s.mu;

  // Offsets from the center after the trade, with the input counted net of
  // the fee. The cost is conserved when both lie below the center and their
  // squares add up to the starting cost.
  const Surd post_in = exact_in ? Surd::exact(rin + e.exact_amount) : amount + rin;
  const Surd post_out = exact_in ? -amount + rout : Surd::exact(rout - e.exact_amount);
  const Surd net_in = (exact_in ? Surd::exact(e.exact_amount) : amount) * (1 - e.fee) + rin;
  const Surd u = net_in * win + (-s.center);
  const Surd v = post_out * wout + (-s.center);
  const auto u2 = rational_square(u);
  const auto v2 = rational_square(v);
  const bool conserved = u.compare(0) < 0 && v.compare(0) < 0 && u2 && v2 && *u2 + *v2 == s.cost();

  return json{{"amount_floor", dec(amount.floor())},
              {"amount_ceil", dec(amount.ceil())},
              {"post_in_floor", dec(post_in.floor())},
              {"post_out_floor", dec(post_out.floor())},
              {"cost_before", s.cost().str()},
              {"cost_conserved", conserved}};
}

std::string expectation_mismatch(const json& expect, const json& outputs) {
  for (const auto& [key, want] : expect.items()) {
    const auto it = outputs.find(key);
    if (it == outputs.end()) return "expected " + key + "=" + want.dump() + ", got nothing";
    if (*it != want) return "expected " + key + "=" + want.dump() + ", got " + it->dump();
  }
  if (outputs.contains("error") && !expect.contains("error"))
    return "unexpected error " + outputs.at("error").dump();
  return {};
}

}  // namespace

RunResult run_scenario(std::istream& in, const RunConfig& config) {
  RunResult result;
  std::vector<Event> events;
  std::string text;
  for (std::size_t line = 1; std::getline(in, text); ++line) {
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    try {
      events.push_back(parse_event(json::parse(text), line));
    } catch (const json::exception& ex) {
      result.status = ExitStatus::kParse;
      result.message = "line " + std::to_string(line) + ": " + ex.what();
      return result;
    } catch (const ParseError& ex) {
      result.status = ExitStatus::kParse;
      result.message = "line " + std::to_string(line) + ": " + ex.what();
      return result;
    }
  }

  Session session(config, &result);
  for (std::size_t seq = 0; seq < events.size(); ++seq) {
    const Event& e = events[seq];
    json outputs;
    try {
      outputs = session.apply(e);
    } catch (const AmmError& ex) {
      outputs = json{{"error", std::string(to_string(ex.code()))}};
    } catch (const ArithmeticError&) {
      outputs = json{{"error", "arithmetic"}};
    } catch (const std::exception& ex) {
      // Invariant failures, and anything the pair should have rejected
      // itself but did not.
      result.status = ExitStatus::kInvariant;
      result.message = "line " + std::to_string(e.line) + " (" + e.name + "): " + ex.what();
      result.events = seq + 1;
      return result;
    }
    json entry{{"seq", seq}, {"op", e.name}, {"time", session.now()}, {"outputs", outputs},
               {"digest", session.digest()}};
    json deltas = session.take_oracle();
    if (config.verify && !deltas.empty()) entry["oracle"] = std::move(deltas);
    result.log.push_back(entry.dump());
    if (!e.expect.is_null()) {
      const std::string miss = expectation_mismatch(e.expect, outputs);
      if (!miss.empty() && result.status == ExitStatus::kOk) {
        result.status = ExitStatus::kExpectation;
        result.message = "line " + std::to_string(e.line) + " (" + e.name + "): " + miss;
      }
    }
  }
  result.events = events.size();
  return result;
}

RunResult run_scenario_text(std::string_view text, const RunConfig& config) {
  std::istringstream in{std::string(text)};
  return run_scenario(in, config);
}

std::string random_scenario(std::uint64_t seed, std::size_t events, Approach approach, bool fee_on) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  // A fraction num / 10^6 of v, at least one unit.
  auto part = [&](const Word256& v, std::uint64_t lo, std::uint64_t hi) {
    const Word256 p = muldiv(v, Word256{uniform(lo, hi)}, Word256{1'000'000});
    return p.is_zero() ? Word256{1} : p;
  };

  RunConfig config;
  config.approach = approach;
  config.fee_on = fee_on;
  RunResult sink;
  Session shadow(config, &sink);
  std::ostringstream out;
  std::size_t emitted = 0;
  auto emit = [&](const json& body) {
    out << body.dump() << '\n';
    ++emitted;
    try {
      shadow.apply(parse_event(body, 0));
    } catch (const std::exception&) {
      // Rejected events stay in the scenario; they exercise error paths.
    }
  };

  json create{{"op", "create"}};
  const bool circle = approach == Approach::kCircle;
  const std::uint64_t l0 = uniform(1, circle ? 12 : 8);
  const std::uint64_t l1 = uniform(1, circle ? 12 : 8);
  const unsigned dec0 = circle && uniform(0, 3) == 0 ? static_cast<unsigned>(uniform(6, 17)) : 18;
  const unsigned dec1 = circle && uniform(0, 3) == 0 ? static_cast<unsigned>(uniform(6, 17)) : 18;
  // Weighted value per side between 10 and 10^8 coins, in 18-decimal units.
  const Word256 value = Word256{uniform(10, 100'000'000)} * Word256::pow10(18);
  const Word256 amount0 = value / Word256{l0} / Word256{decimals_factor(dec0)};
  const Word256 amount1 =
      value * Word256{uniform(80, 125)} / Word256{100} / Word256{l1} / Word256{decimals_factor(dec1)};
  create["amount0"] = dec(std::max(amount0, Word256::pow10(dec0)));
  create["amount1"] = dec(std::max(amount1, Word256::pow10(dec1)));
  create["lambda0"] = l0;
  create["lambda1"] = l1;
  if (circle) {
    create["r_square"] = uniform(1, 9999);
    create["decimals0"] = dec0;
    create["decimals1"] = dec1;
  }
  emit(create);

  const std::vector<std::string> holders = {"lp", "alice", "bob"};
  emitted = 0;
  while (emitted < events) {
    const std::uint64_t pick = uniform(0, 99);
    const auto t = uniform(0, 1) == 0 ? TokenIndex::k0 : TokenIndex::k1;
    const int token = t == TokenIndex::k0 ? 0 : 1;
    if (!shadow.established() && pick < 90) {
      emit(json{{"op", "advance_time"}, {"seconds", uniform(1, 600)}});
      continue;
    }
    if (pick < 40) {
      emit(json{{"op", "swap"}, {"token_in", token}, {"amount_in", dec(part(shadow.reserve(t), 1, 300'000))}});
    } else if (pick < 46) {
      emit(json{{"op", "quote"}, {"token_in", token}, {"amount_in", dec(part(shadow.reserve(t), 1, 500'000))}});
    } else if (pick < 52) {
      emit(json{{"op", "quote"}, {"token_in", token},
                {"amount_out", dec(part(shadow.reserve(other(t)), 1, 200'000))}});
    } else if (pick < 56) {
      const Word256 amount_in = part(shadow.reserve(t), 1, 100'000);
      Word256 amount_out;
      bool quoted = true;
      try {
        amount_out = shadow.quote_out(t, amount_in).amount_out;
      } catch (const std::exception&) {
        quoted = false;
      }
      const bool greedy = uniform(0, 1) == 0;
      json body{{"op", "swap"}, {"token_in", token}, {"amount_in", dec(amount_in)},
                {"amount_out", dec(greedy ? amount_out + Word256{1} : amount_out)}};
      if (quoted && greedy && amount_out + Word256{1} < shadow.reserve(other(t)))
        body["expect"] = json{{"error", std::string(to_string(AmmErrc::kInvariantViolation))}};
      emit(body);
    } else if (pick < 70) {
      emit(json{{"op", "add"}, {"amount0", dec(part(shadow.reserve(TokenIndex::k0), 1'000, 500'000))},
                {"to", holders[uniform(0, 2)]}});
    } else if (pick < 84) {
      const std::string& h = holders[uniform(0, 2)];
      const Word256 bal = shadow.balance_of(h);
      if (bal.is_zero()) continue;
      Word256 liq = part(bal, 1'000, 600'000);
      if (liq >= shadow.supply()) liq = shadow.supply() / Word256{2};
      emit(json{{"op", "remove"}, {"liquidity", dec(liq)}, {"from", h}});
    } else if (pick < 90) {
      emit(json{{"op", "collect_fee"}});
    } else if (pick < 94) {
      emit(json{{"op", "skim"}, {"donate" + std::to_string(token), dec(part(shadow.reserve(t), 0, 1'000))}});
    } else {
      emit(json{{"op", "advance_time"}, {"seconds", uniform(1, 3600)}});
    }
  }
  return out.str();
}

const std::vector<std::uint32_t>& reference_radii() {
  static const std::vector<std::uint32_t> r = {10001, 10010, 10100, 10500, 11000, 15000,
                                               17000, 19000, 19900, 19990, 19999};
  return r;
}

std::vector<PriceRow> price_table(const std::vector<std::uint32_t>& radii) {
  std::vector<PriceRow> rows;
  rows.reserve(radii.size());
  for (std::uint32_t r : radii) {
    const PriceBounds b = price_bounds(r);
    rows.push_back(PriceRow{r, b.min_price, b.max_price});
  }
  return rows;
}

std::string format_price_table(const std::vector<PriceRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "r" << std::setw(16) << "min_price" << "max_price" << '\n';
  for (const PriceRow& row : rows)
    out << std::setw(8) << row.r << std::setw(16) << row.min_price.to_string() << row.max_price.to_string() << '\n';
  return out.str();
}

}  // namespace coinswap::sim
