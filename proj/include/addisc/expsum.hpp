#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "addisc/common.hpp"
#include "addisc/discrepancy.hpp"
#include "addisc/sequences.hpp"

namespace addisc::expsum {

inline constexpr std::uint64_t kMinPanels = 4096;
inline constexpr std::uint64_t kDefaultPanelCap = std::uint64_t{1} << 26;

// sum_n e^{2 pi i a_n alpha}, phases reduced by the exact fixed-point kernel.
std::complex<double> exp_sum(std::span<const std::uint64_t> terms, discrepancy::AlphaValue alpha);
std::complex<double> exp_sum(std::span<const std::uint64_t> terms, double alpha);

// S at the midpoints (2j + 1) / (2 panels), j < panels. Needs a power-of-two
// panel count above max(terms); computed as a single inverse DFT.
std::vector<std::complex<double>> midpoint_values(std::span<const std::uint64_t> terms, std::uint64_t panels);

struct ExpSumEstimate {
  std::size_t n_terms = 0;
  double l1 = 0.0;             // I(N) = int_0^1 |S| d alpha
  double fourth_moment = 0.0;  // int_0^1 |S|^4 d alpha
  std::uint64_t panels = 0;
  // Relative change of l1 over the final doubling.
  double rel_error_bound = 0.0;
};

// Composite midpoint rule. The panel count starts at the power of two
// >= max(4096, 8 max(terms)) and doubles until successive l1 estimates agree
// to rel_tol. Throws BudgetExceeded when the count would pass panel_cap.
ExpSumEstimate l1_norm(std::span<const std::uint64_t> terms, double rel_tol,
                       std::uint64_t panel_cap = kDefaultPanelCap);
ExpSumEstimate l1_norm(const sequences::IntegerSequence& seq, std::size_t n, double rel_tol,
                       std::uint64_t panel_cap = kDefaultPanelCap);

// |quadrature fourth moment - E| / E against the exact energy.
double fourth_moment_check(std::span<const std::uint64_t> terms, double rel_tol,
                           std::uint64_t panel_cap = kDefaultPanelCap);

// sqrt(N^3 / E). Throws InvalidArgument when E < N^2.
double holder_lower_bound(u128 energy, std::size_t n);

// Slack for l1 >= holder_lower_bound.
constexpr double holder_slack(std::size_t n) { return 1e-9 * static_cast<double>(n); }

struct HolderRow {
  std::size_t n = 0;
  double l1 = 0.0;
  double fourth_moment = 0.0;
  double holder_bound = 0.0;
  std::uint64_t panels = 0;

  bool holds() const { return l1 >= holder_bound - holder_slack(n); }
};

// "N,I,fourth_moment,holder_bound,panels"
std::string holder_csv(std::span<const HolderRow> rows);

// Pairwise (tree) summation; the result does not depend on thread layout.
double pairwise_sum(std::span<const double> values);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

}  // namespace addisc::expsum
