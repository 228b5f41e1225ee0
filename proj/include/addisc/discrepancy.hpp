#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "addisc/common.hpp"
#include "addisc/fit.hpp"
#include "addisc/sequences.hpp"

namespace addisc::discrepancy {

// alpha = numerator / 2^128, a point of the dyadic grid in [0, 1). All
// fractional parts {a alpha} are then exact integer multiply-reduce results.
class AlphaValue {
 public:
  constexpr AlphaValue() = default;
  constexpr explicit AlphaValue(u128 numerator) : numerator_(numerator) {}

  // Nearest grid point to p / q, 0 <= p < q.
  static AlphaValue from_rational(std::uint64_t p, std::uint64_t q);
  // Exact grid image of x in [0, 1); x is reduced mod 1 first.
  static AlphaValue from_double(double x);
  // floor(2^128 (sqrt(5) - 1) / 2).
  static AlphaValue golden();

  constexpr u128 numerator() const { return numerator_; }
  constexpr bool degenerate() const { return numerator_ == 0; }
  double to_double() const;
  // 1 - alpha on the grid.
  constexpr AlphaValue reflected() const { return AlphaValue(u128{0} - numerator_); }

  constexpr bool operator==(const AlphaValue&) const = default;

 private:
  u128 numerator_ = 0;
};

// {a alpha} as a 128-bit fixed-point fraction (exact).
constexpr u128 fractional_part_fixed(std::uint64_t a, AlphaValue alpha) {
  return static_cast<u128>(a) * alpha.numerator();
}

// Fixed-point fraction to the nearest double, kept strictly below 1.
double fixed_to_unit(u128 fraction);

std::vector<double> fractional_parts(std::span<const std::uint64_t> terms, AlphaValue alpha);

// D_N^* via the sorted-point formula
//   max_i max(i/N - x_(i), x_(i) - (i-1)/N).
// Points must lie in [0, 1); duplicates are fine.
double star_discrepancy(std::span<const double> points);

// sup of |A_N(beta)/N - beta| over the finite candidate set: every point, its
// right limit, and beta = 1. O(N^2); used by the verification suites.
double star_discrepancy_candidates(std::span<const double> points);

struct DiscrepancyCheckpoint {
  std::size_t n = 0;
  double dstar = 0.0;
  double weighted = 0.0;  // n * dstar
};

struct DiscrepancyProfile {
  AlphaValue alpha;
  std::vector<DiscrepancyCheckpoint> checkpoints;
};

DiscrepancyProfile discrepancy_profile(std::span<const std::uint64_t> terms, AlphaValue alpha,
                                       std::span<const std::size_t> checkpoints);
DiscrepancyProfile discrepancy_profile(const sequences::IntegerSequence& seq, AlphaValue alpha,
                                       std::span<const std::size_t> checkpoints);

// Seeded alpha stream: SplitMix64(seed), 128-bit draws high word first,
// alpha = 0 rejected and redrawn.
std::vector<AlphaValue> draw_alphas(std::uint64_t seed, std::size_t count, std::size_t* redraws = nullptr);

// Linear-interpolation quantile (numpy's default) of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);

struct QuantileBand {
  std::size_t n = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

struct MetricResult {
  std::uint64_t seed = 0;
  std::vector<AlphaValue> alphas;
  std::size_t redraws = 0;
  std::vector<QuantileBand> bands;
  // ln(median N D_N^*) against ln N
  harness::ExponentFit fit;
};

// Needs alpha_count >= 3 and at least 3 checkpoints.
MetricResult metric_experiment(const sequences::IntegerSequence& seq, std::size_t alpha_count, std::uint64_t seed,
                               std::span<const std::size_t> checkpoints);

// "N,median_NDstar,q25,q75"
std::string median_csv(const MetricResult& result);
// "N,Dstar,NDstar"
std::string profile_csv(const DiscrepancyProfile& profile);

}  // namespace addisc::discrepancy
