#include "addisc/common.hpp"

#include <algorithm>

namespace addisc {

std::string to_string(u128 value) {
  if (value == 0) return "0";
  std::string out;
  while (value != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_hex(u128 value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(32, '0');
  for (int i = 31; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[static_cast<int>(value & 0xf)];
    value >>= 4;
  }
  return "0x" + out;
}

u128 parse_u128(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty integer literal");
  const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
  const unsigned base = hex ? 16 : 10;
  if (hex) text.remove_prefix(2);
  const u128 max = ~u128{0};
  u128 value = 0;
  for (char ch : text) {
    unsigned digit;
    if (ch >= '0' && ch <= '9') {
      digit = static_cast<unsigned>(ch - '0');
    } else if (hex && ch >= 'a' && ch <= 'f') {
      digit = static_cast<unsigned>(ch - 'a' + 10);
    } else if (hex && ch >= 'A' && ch <= 'F') {
      digit = static_cast<unsigned>(ch - 'A' + 10);
    } else {
      throw InvalidArgument("invalid digit in integer literal: " + std::string(text));
    }
    if (value > (max - digit) / base) throw InvalidArgument("integer literal exceeds 128 bits");
    value = value * base + digit;
  }
  return value;
}

}  // namespace addisc
