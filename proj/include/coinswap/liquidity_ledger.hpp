#pragma once

#include <map>
#include <string>

#include "coinswap/errors.hpp"
#include "coinswap/wide_uint.hpp"

namespace coinswap {

// Liquidity-share balances by holder. total_supply() always equals the sum
// of all balances.
class LiquidityLedger {
 public:
  void mint(const std::string& to, const Word256& amount) {
    if (amount.is_zero()) return;
    total_ = total_ + amount;
    balances_[to] += amount;
  }

  void burn(const std::string& from, const Word256& amount) {
    auto it = balances_.find(from);
    if (it == balances_.end() || it->second < amount)
      throw AmmError(AmmErrc::kInsufficientLiquidity, "holder '" + from + "' has too little liquidity");
    it->second -= amount;
    total_ -= amount;
    if (it->second.is_zero()) balances_.erase(it);
  }

  Word256 balance_of(const std::string& holder) const {
    auto it = balances_.find(holder);
    return it == balances_.end() ? Word256{} : it->second;
  }

  const Word256& total_supply() const noexcept { return total_; }
  const std::map<std::string, Word256>& balances() const noexcept { return balances_; }

 private:
  Word256 total_;
  std::map<std::string, Word256> balances_;
};

}  // namespace coinswap
