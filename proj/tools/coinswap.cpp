// coinswap: scenario runner and calculator for constant-circle pairs.
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coinswap/circle_pair.hpp"
#include "coinswap/errors.hpp"
#include "coinswap/flat_pair.hpp"
#include "coinswap/rational_oracle.hpp"
#include "coinswap/scenario.hpp"

using namespace coinswap;
using json = nlohmann::json;

namespace {

constexpr int kUsage = static_cast<int>(sim::ExitStatus::kUsage);

struct PairFlags {
  std::string approach = "circle";
  bool fee_on = false;
  std::string log_path;
};

void add_pair_flags(CLI::App* cmd, PairFlags& f) {
  cmd->add_option("--approach", f.approach, "Pair variant")->check(CLI::IsMember({"circle", "flat"}));
  cmd->add_flag("--fee-on", f.fee_on, "Enable the protocol fee");
  cmd->add_option("--log", f.log_path, "Write the event log here instead of stdout");
}

sim::RunConfig run_config(const PairFlags& f, bool verify) {
  sim::RunConfig c;
  c.approach = sim::parse_approach(f.approach);
  c.fee_on = f.fee_on;
  c.verify = verify;
  return c;
}

bool write_log(const sim::RunResult& r, const std::string& path, std::ostream& fallback) {
  if (path.empty()) {
    for (const auto& line : r.log) fallback << line << '\n';
    return true;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << '\n';
    return false;
  }
  for (const auto& line : r.log) out << line << '\n';
  return true;
}

int finish(const sim::RunResult& r) {
  if (r.status != sim::ExitStatus::kOk) std::cerr << "error: " << r.message << '\n';
  return static_cast<int>(r.status);
}

std::optional<sim::RunResult> run_file(const std::string& path, const sim::RunConfig& config) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << '\n';
    return std::nullopt;
  }
  return sim::run_scenario(in, config);
}

Word256 parse_word(const std::string& text, const char* what) {
  try {
    return Word256::from_decimal(text);
  } catch (const std::exception&) {
    throw CLI::ValidationError(what, "expected a base-unit decimal integer, got '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-circle AMM scenario runner"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with default options")->envname("COINSWAP_CONFIG");

  PairFlags sim_flags;
  std::string sim_file;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and print its event log");
  simulate->add_option("file", sim_file, "Scenario (JSON lines)")->required();
  add_pair_flags(simulate, sim_flags);

  PairFlags ver_flags;
  std::string ver_file;
  std::optional<std::uint64_t> seed;
  std::size_t events = 1000;
  std::string emit_path;
  auto* verify = app.add_subcommand("verify", "Run a scenario against the exact oracle");
  verify->add_option("file", ver_file, "Scenario (JSON lines)");
  verify->add_option("--seed", seed, "Generate a random scenario from this seed");
  verify->add_option("--events", events, "Events in a generated scenario")->capture_default_str();
  verify->add_option("--emit", emit_path, "Save the generated scenario");
  add_pair_flags(verify, ver_flags);

  std::vector<std::uint32_t> radii;
  auto* table = app.add_subcommand("price-table", "Boundary prices for circle radii");
  table->add_option("--r", radii, "r = 10000 + rSquare, in [10001, 19999]")->check(CLI::Range(10001, 19999));

  std::string pair_text;
  std::string quote_in;
  std::string quote_out;
  int token_in = 0;
  std::uint16_t q_r_square = 6000;
  std::uint16_t q_lambda0 = 1;
  std::uint16_t q_lambda1 = 1;
  std::string q_approach = "circle";
  auto* quote = app.add_subcommand("quote", "Quote a trade against fresh reserves");
  quote->add_option("--pair", pair_text, "reserve0,reserve1 in base units")->required();
  auto* in_opt = quote->add_option("--in", quote_in, "Exact input amount");
  auto* out_opt = quote->add_option("--out", quote_out, "Exact output amount");
  in_opt->excludes(out_opt);
  quote->add_option("--token-in", token_in, "Input token")->check(CLI::Range(0, 1));
  quote->add_option("--r-square", q_r_square, "Circle radius parameter")->check(CLI::Range(1, 9999));
  quote->add_option("--lambda0", q_lambda0, "Weight of token0")->check(CLI::Range(1, 65535));
  quote->add_option("--lambda1", q_lambda1, "Weight of token1")->check(CLI::Range(1, 65535));
  quote->add_option("--approach", q_approach, "Pair variant")->check(CLI::IsMember({"circle", "flat"}));

  std::string mu_x;
  std::string mu_y;
  std::uint16_t mu_lambda0 = 1;
  std::uint16_t mu_lambda1 = 1;
  std::uint32_t mu_r = 16000;
  auto* mu = app.add_subcommand("mu", "Scaled multiplier M = ceil(10^7 mu) for 18-decimal reserves");
  mu->add_option("--x", mu_x, "Token0 reserve in base units")->required();
  mu->add_option("--y", mu_y, "Token1 reserve in base units")->required();
  mu->add_option("--lambda0", mu_lambda0)->check(CLI::Range(1, 65535));
  mu->add_option("--lambda1", mu_lambda1)->check(CLI::Range(1, 65535));
  mu->add_option("--r", mu_r, "r = 10000 + rSquare")->check(CLI::Range(10001, 19999));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*simulate) {
      auto r = run_file(sim_file, run_config(sim_flags, false));
      if (!r) return kUsage;
      if (!write_log(*r, sim_flags.log_path, std::cout)) return kUsage;
      return finish(*r);
    }

    if (*verify) {
      const sim::RunConfig config = run_config(ver_flags, true);
      std::optional<sim::RunResult> r;
      if (seed) {
        if (!ver_file.empty()) {
          std::cerr << "give either a scenario file or --seed\n";
          return kUsage;
        }
        const std::string text = sim::random_scenario(*seed, events, config.approach, config.fee_on);
        if (!emit_path.empty()) std::ofstream(emit_path) << text;
        r = sim::run_scenario_text(text, config);
      } else {
        if (ver_file.empty()) {
          std::cerr << "verify needs a scenario file or --seed\n";
          return kUsage;
        }
        r = run_file(ver_file, config);
        if (!r) return kUsage;
      }
      if (!ver_flags.log_path.empty() && !write_log(*r, ver_flags.log_path, std::cout)) return kUsage;
      std::cout << "events " << r->events << '\n';
      std::cout << "class          samples  max_dev  envelope\n";
      for (const auto& [cls, d] : r->deviations) {
        std::cout << std::left << std::setw(15) << cls << std::setw(9) << d.samples << std::setw(9) << d.max_abs
                  << d.envelope << '\n';
      }
      std::cout << (r->status == sim::ExitStatus::kOk ? "verify: ok" : "verify: FAILED") << '\n';
      return finish(*r);
    }

    if (*table) {
      const auto start = std::chrono::steady_clock::now();
      const auto rows = sim::price_table(radii.empty() ? sim::reference_radii() : radii);
      std::cout << sim::format_price_table(rows);
      const auto us =
          std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
      std::cerr << "computed " << rows.size() << " rows in " << us << " us\n";
      return 0;
    }

    if (*quote) {
      const auto comma = pair_text.find(',');
      if (comma == std::string::npos) throw CLI::ValidationError("--pair", "expected reserve0,reserve1");
      const Word256 r0 = parse_word(pair_text.substr(0, comma), "--pair");
      const Word256 r1 = parse_word(pair_text.substr(comma + 1), "--pair");
      if (quote_in.empty() == quote_out.empty()) throw CLI::ValidationError("quote", "give exactly one of --in, --out");
      const TokenIndex in = token_in == 0 ? TokenIndex::k0 : TokenIndex::k1;
      SwapQuote q;
      oracle::Surd exact;
      if (q_approach == "circle") {
        CirclePair p;
        PairConfig cfg;
        cfg.r_square = q_r_square;
        cfg.lambda0 = q_lambda0;
        cfg.lambda1 = q_lambda1;
        p.establish(r0, r1, cfg, "lp", 0);
        q = quote_in.empty() ? p.get_amount_in(in, parse_word(quote_out, "--out"))
                             : p.get_amount_out(in, parse_word(quote_in, "--in"));
        exact = quote_in.empty() ? oracle::exact_in_raw(p, in, q.amount_out) : oracle::exact_out_raw(p, in, q.amount_in);
      } else {
        FlatPair p;
        p.establish(r0, r1, q_lambda0, q_lambda1, "lp");
        q = quote_in.empty() ? p.get_amount_in(in, parse_word(quote_out, "--out"))
                             : p.get_amount_out(in, parse_word(quote_in, "--in"));
        exact = quote_in.empty() ? oracle::exact_in_raw(p, in, q.amount_out) : oracle::exact_out_raw(p, in, q.amount_in);
      }
      json out{{"amount_in", q.amount_in.to_decimal()},
               {"amount_out", q.amount_out.to_decimal()},
               {"fee_amount", q.fee_amount.to_decimal()},
               {"post_reserve0", q.post_reserve0.to_decimal()},
               {"post_reserve1", q.post_reserve1.to_decimal()},
               {quote_in.empty() ? "oracle_ceil" : "oracle_floor",
                (quote_in.empty() ? exact.ceil() : exact.floor()).str()}};
      std::cout << out.dump() << '\n';
      return 0;
    }

    if (*mu) {
      const Word256 x = parse_word(mu_x, "--x");
      const Word256 y = parse_word(mu_y, "--y");
      const Word256 m = revise_mu(x, y, mu_lambda0, mu_lambda1, mu_r);
      const bool minimal = mu_is_minimal(Word256{mu_lambda0} * x, Word256{mu_lambda1} * y, mu_r, m);
      CircleParams params{0, 1, 1, static_cast<std::uint16_t>(mu_r - kRadiusBase), mu_lambda0, mu_lambda1, 0};
      json out{{"mu", m.to_decimal()},
               {"oracle", oracle::exact_scaled_mu(params, x, y).str()},
               {"minimal", minimal}};
      std::cout << out.dump() << '\n';
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const AmmError& e) {
    std::cerr << "rejected: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
