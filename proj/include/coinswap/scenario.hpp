// Scripted market sessions. A scenario is line-delimited JSON, one event per
// line, driving a single pair on a logical clock:
//
//   {"op":"create","amount0":"1000000000000000000000","amount1":"...","r_square":6000}
//   {"op":"swap","token_in":0,"amount_in":"5000","expect":{"amount_out":"4984"}}
//   {"op":"advance_time","seconds":60}
//
// Amounts are decimal strings of base units. Each event produces one log
// line with its outputs and the pair digest; in verify mode the line also
// carries the signed distance of every fixed-point result from the
// correctly rounded oracle value.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coinswap/pair_params.hpp"

namespace coinswap::sim {

enum class Approach { kCircle, kFlat };

std::string_view to_string(Approach a) noexcept;
// Throws std::invalid_argument for anything but "circle" or "flat".
Approach parse_approach(std::string_view text);

enum class ExitStatus : int { kOk = 0, kUsage = 1, kParse = 2, kInvariant = 3, kExpectation = 4 };

struct RunConfig {
  Approach approach = Approach::kCircle;
  bool fee_on = false;
  bool verify = false;
};

// Largest |fixed - oracle| seen in one operation class, in base units.
struct Deviation {
  std::uint64_t samples = 0;
  std::uint64_t max_abs = 0;
  std::uint64_t envelope = 0;
};

struct RunResult {
  ExitStatus status = ExitStatus::kOk;
  std::string message;
  std::vector<std::string> log;
  std::map<std::string, Deviation> deviations;
  std::size_t events = 0;
};

RunResult run_scenario(std::istream& in, const RunConfig& config);
RunResult run_scenario_text(std::string_view text, const RunConfig& config);

// A reproducible random session of `events` events after the create.
std::string random_scenario(std::uint64_t seed, std::size_t events, Approach approach, bool fee_on);

// The r values of the reference fluctuation table.
const std::vector<std::uint32_t>& reference_radii();

struct PriceRow {
  std::uint32_t r = 0;
  SigDecimal min_price;
  SigDecimal max_price;
};
std::vector<PriceRow> price_table(const std::vector<std::uint32_t>& radii);
std::string format_price_table(const std::vector<PriceRow>& rows);

}  // namespace coinswap::sim
