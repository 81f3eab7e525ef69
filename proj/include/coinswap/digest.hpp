#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "coinswap/wide_uint.hpp"

namespace coinswap {

// FNV-1a (64-bit) over a canonical byte stream; identifies pair states in
// event logs. Not a cryptographic hash.
class StateDigest {
 public:
  void add(std::uint64_t v) noexcept {
    for (int i = 0; i < 8; ++i) byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  template <std::size_t N>
  void add(const UInt<N>& v) noexcept {
    for (auto limb : v.limbs()) add(limb);
  }

  void add(std::string_view s) noexcept {
    add(static_cast<std::uint64_t>(s.size()));
    for (char c : s) byte(static_cast<std::uint8_t>(c));
  }

  std::uint64_t value() const noexcept { return h_; }

  std::string hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) out[15 - i] = kDigits[(h_ >> (4 * i)) & 0xF];
    return out;
  }

 private:
  void byte(std::uint8_t b) noexcept {
    h_ ^= b;
    h_ *= 0x100000001b3ULL;
  }

  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace coinswap
