#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coinswap {

// Raised by the wide-integer layer. AMM code never catches these: an
// arithmetic fault inside market math is a bug or a hostile input.
class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public ArithmeticError {
 public:
  DivisionByZero() : ArithmeticError("division by zero") {}
};

class OverflowError : public ArithmeticError {
 public:
  using ArithmeticError::ArithmeticError;
};

enum class AmmErrc {
  kAlreadyEstablished,
  kUnestablished,
  kDepositBelowMinimum,
  kMuUnsatisfiable,
  kZeroAmount,
  kInsufficientLiquidity,
  kInsufficientOutputReserve,
  kQuadrantViolation,
  kInvariantViolation,
  kBalanceDeficit,
  kFieldOverflow,
  kReserveOverflow,
  kOutOfRange,
  kIdenticalTokens,
  kDegenerateDenominator,
};

// Stable kebab-case name, used in scenario files and event logs.
std::string_view to_string(AmmErrc code) noexcept;

class AmmError : public std::runtime_error {
 public:
  AmmError(AmmErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  AmmErrc code() const noexcept { return code_; }

 private:
  AmmErrc code_;
};

}  // namespace coinswap
