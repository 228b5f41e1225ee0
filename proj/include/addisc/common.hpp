#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace addisc {

__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

inline constexpr const char* kVersion = "0.1.0";

// Error hierarchy. The CLI maps each class onto an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters or violated preconditions (exit code 2).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Window limits, panel budgets, oracle caps, 64-bit overflow (exit code 3).
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A floating-point route could not certify its own result.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// An invariant or oracle comparison failed (exit code 1).
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

std::string to_string(u128 value);
std::string to_hex(u128 value);

// Accepts decimal digits or a 0x-prefixed hex literal.
u128 parse_u128(std::string_view text);

}  // namespace addisc
