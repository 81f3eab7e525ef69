#include "coinswap/errors.hpp"

namespace coinswap {

std::string_view to_string(AmmErrc code) noexcept {
  switch (code) {
    case AmmErrc::kAlreadyEstablished: return "already-established";
    case AmmErrc::kUnestablished: return "unestablished-pair";
    case AmmErrc::kDepositBelowMinimum: return "deposit-below-minimum";
    case AmmErrc::kMuUnsatisfiable: return "mu-unsatisfiable";
    case AmmErrc::kZeroAmount: return "zero-amount";
    case AmmErrc::kInsufficientLiquidity: return "insufficient-liquidity";
    case AmmErrc::kInsufficientOutputReserve: return "insufficient-output-reserve";
    case AmmErrc::kQuadrantViolation: return "quadrant-violation";
    case AmmErrc::kInvariantViolation: return "invariant-violation";
    case AmmErrc::kBalanceDeficit: return "balance-deficit";
    case AmmErrc::kFieldOverflow: return "field-overflow";
    case AmmErrc::kReserveOverflow: return "reserve-overflow";
    case AmmErrc::kOutOfRange: return "out-of-range";
    case AmmErrc::kIdenticalTokens: return "identical-tokens";
    case AmmErrc::kDegenerateDenominator: return "degenerate-denominator";
  }
  return "unknown";
}

}  // namespace coinswap
