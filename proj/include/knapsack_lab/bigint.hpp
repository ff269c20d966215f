#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <ios>
#include <string>
#include <string_view>

#include "knapsack_lab/errors.hpp"

namespace knapsack_lab {

// Exact arbitrary precision integer. All scheme arithmetic goes through this
// type; no operation reduces modulo anything unless it says so.
using BigInt = boost::multiprecision::mpz_int;

inline std::size_t bit_length(const BigInt& v) {
  if (v <= 0) return 0;
  return static_cast<std::size_t>(boost::multiprecision::msb(v)) + 1;
}

inline std::string to_hex(const BigInt& v) {
  if (v < 0) throw Error(ErrorKind::domain, "to_hex: negative value");
  return v.str(0, std::ios_base::hex);
}

inline std::string to_dec(const BigInt& v) { return v.str(); }

// Canonical lowercase hex: no prefix, no leading zeros (except "0" itself).
inline BigInt from_hex(std::string_view text) {
  if (text.empty()) throw Error(ErrorKind::format, "empty hex value");
  for (char c : text) {
    const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!ok) throw Error(ErrorKind::format, "non-canonical hex value '" + std::string(text) + "'");
  }
  if (text.size() > 1 && text.front() == '0')
    throw Error(ErrorKind::format, "hex value with leading zero '" + std::string(text) + "'");
  return BigInt("0x" + std::string(text));
}

inline BigInt from_dec(std::string_view text) {
  if (text.empty()) throw Error(ErrorKind::format, "empty decimal value");
  for (char c : text)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw Error(ErrorKind::format, "bad decimal value '" + std::string(text) + "'");
  return BigInt(std::string(text));
}

// Decimal, or hex with a 0x prefix.
inline BigInt parse_integer(std::string_view text) {
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    std::string lowered(text.substr(2));
    for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    while (lowered.size() > 1 && lowered.front() == '0') lowered.erase(lowered.begin());
    return from_hex(lowered);
  }
  return from_dec(text);
}

inline std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || bit_length(v) > 64) throw Error(ErrorKind::domain, "value does not fit in 64 bits");
  return v.convert_to<std::uint64_t>();
}

}  // namespace knapsack_lab
