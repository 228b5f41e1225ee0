#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "addisc/common.hpp"
#include "addisc/fit.hpp"
#include "addisc/sequences.hpp"

namespace addisc::energy {

inline constexpr std::size_t kBruteforceCap = 64;
inline constexpr std::uint64_t kDefaultWindowLimit = std::uint64_t{1} << 26;

enum class Backend { bruteforce, histogram, convolution };

std::string_view backend_name(Backend backend);
Backend backend_from_name(std::string_view name);

// r(d) = #{(i, j) : a_i - a_j = d} for d >= 0; r(-d) = r(d) is implied.
struct DifferenceHistogram {
  std::size_t n = 0;
  // Sorted by difference; only realized differences are stored.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;

  std::uint64_t at(std::uint64_t d) const;
};

struct EnergyResult {
  std::size_t n = 0;
  u128 value = 0;
  Backend backend = Backend::histogram;
};

struct EnergyCheckpoint {
  std::size_t n = 0;
  EnergyResult energy;
};

struct EnergyProfile {
  std::vector<EnergyCheckpoint> checkpoints;
};

// Input must be strictly increasing.
DifferenceHistogram difference_histogram(std::span<const std::uint64_t> terms);

// Literal count over all |A|^4 quadruples; |A| <= kBruteforceCap.
EnergyResult energy_bruteforce(std::span<const std::uint64_t> terms);

// E = r(0)^2 + 2 sum_{d > 0} r(d)^2.
EnergyResult energy_histogram(const DifferenceHistogram& hist);

// Autocorrelation of the indicator of A on [0, max A] by real FFT, each
// coefficient rounded and certified (residual < 0.25) before squaring.
// Throws BudgetExceeded above the window and NumericalFailure when a
// coefficient cannot be certified.
EnergyResult energy_convolution(std::span<const std::uint64_t> terms,
                                std::uint64_t window_limit = kDefaultWindowLimit);

// Histogram energy maintained under appends of increasing terms. Each push
// costs O(|A|).
class IncrementalEnergy {
 public:
  void push(std::uint64_t term);
  std::size_t size() const { return terms_.size(); }
  EnergyResult result() const { return {terms_.size(), value_, Backend::histogram}; }

 private:
  std::vector<std::uint64_t> terms_;
  std::unordered_map<std::uint64_t, std::uint64_t> positive_;
  u128 value_ = 0;
};

// Exact energies at increasing checkpoints. Convolution when max term fits the
// window, histogram otherwise (also used if convolution cannot certify).
EnergyProfile energy_profile(const sequences::IntegerSequence& seq, std::span<const std::size_t> checkpoints,
                             std::uint64_t window_limit = kDefaultWindowLimit);

// Slope of ln E against ln N; the raw slope is reported even outside [2, 3].
harness::ExponentFit kappa_fit(const EnergyProfile& profile);

// "N,E,backend" with 128-bit values in decimal.
std::string profile_csv(const EnergyProfile& profile);

// Integer polynomial with ascending coefficients.
struct IntegerPolynomial {
  std::vector<std::int64_t> coefficients;

  std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
  i128 operator()(i128 x) const;
};

enum class CountMethod { divisor, bruteforce };

// #{(x, y) in [1, range_n]^2 : f(x) - f(y) = a}. f must have degree >= 2 and be
// strictly increasing on [1, range_n]. For a = 0 the diagonal count range_n is
// returned without the divisor argument, which needs a != 0.
std::uint64_t representation_count(const IntegerPolynomial& f, std::uint64_t range_n, std::int64_t a,
                                   CountMethod method);

}  // namespace addisc::energy
