#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "addisc/common.hpp"

namespace addisc::sequences {

enum class Family {
  kronecker,
  polynomial,
  floor_power,
  quasi_exponential,
  rudin_shapiro,
  thue_morse,
  lacunary,
  explicit_list,
};

std::string_view family_name(Family family);
Family family_from_name(std::string_view name);

// a_n = n.
struct Kronecker {
  bool operator==(const Kronecker&) const = default;
};

// a_k = P(n0 + k - 1), where n0 >= 1 is the first index from which P is
// nonnegative and strictly increasing. Coefficients are ascending by power.
struct Polynomial {
  std::vector<std::int64_t> coefficients;
  bool operator==(const Polynomial&) const = default;
};

// a_n = floor(n^c), c > 1.
struct FloorPower {
  double c = 2.0;
  bool operator==(const FloorPower&) const = default;
};

// a_n = floor(exp(gamma * (ln n)^beta)), gamma > 0, 1 < beta <= 2. Repeated
// values are skipped so the prefix is strictly increasing.
struct QuasiExponential {
  double gamma = 1.0;
  double beta = 1.5;
  bool operator==(const QuasiExponential&) const = default;
};

// Indices k >= 0 with r_k = +1, ascending; the first term is 0.
struct RudinShapiro {
  bool operator==(const RudinShapiro&) const = default;
};

// Indices k >= 0 with an even number of one bits (evil numbers).
struct ThueMorse {
  bool operator==(const ThueMorse&) const = default;
};

// a_1 = 1, a_{n+1} = max(a_n + 1, ceil(ratio * a_n)), ratio > 1.
struct Lacunary {
  double ratio = 2.0;
  bool operator==(const Lacunary&) const = default;
};

struct ExplicitList {
  std::vector<std::uint64_t> terms;
  bool operator==(const ExplicitList&) const = default;
};

using SequenceSpec = std::variant<Kronecker, Polynomial, FloorPower, QuasiExponential, RudinShapiro,
                                  ThueMorse, Lacunary, ExplicitList>;

Family family_of(const SequenceSpec& spec);

// Throws InvalidArgument when a parameter is outside its family's range.
void validate(const SequenceSpec& spec);

// {"family": "...", "params": {...}}
nlohmann::json spec_to_json(const SequenceSpec& spec);
SequenceSpec spec_from_json(const nlohmann::json& j);

struct IntegerSequence {
  SequenceSpec spec;
  std::vector<std::uint64_t> terms;
  // Index n of the first term (polynomial n0; 0 for index-set families).
  std::uint64_t first_index = 1;
  // Indices dropped because the floor value repeated (quasi_exponential).
  std::uint64_t skipped = 0;

  std::size_t size() const { return terms.size(); }
  std::span<const std::uint64_t> prefix(std::size_t n) const;
};

// Exactly `count` strictly increasing terms. Throws BudgetExceeded when a term
// would leave the 64-bit range.
IntegerSequence generate(const SequenceSpec& spec, std::size_t count);

// True iff successive gaps strictly increase. Needs at least 3 terms.
bool is_convex(std::span<const std::uint64_t> terms);

// max over n >= 2 of ln(a_n) / (ln n)^2; zero terms are skipped.
double growth_gamma(std::span<const std::uint64_t> terms);

// Predicted discrepancy exponent tau with N D_N^* = Omega(N^{tau - eps}).
// A supplied kappa in [2, 3] yields (3 - kappa) / 2 for any family.
double predicted_tau(const SequenceSpec& spec, std::optional<double> kappa = std::nullopt);

// Exact floor(x^c) for n >= 1. Exposed for testing.
std::uint64_t floor_power_term(std::uint64_t n, double c);

}  // namespace addisc::sequences
