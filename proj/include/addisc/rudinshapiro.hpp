#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>

#include "addisc/discrepancy.hpp"
#include "addisc/sequences.hpp"

namespace addisc::rudinshapiro {

// Largest n for which the 2^n-term sums are evaluated by direct summation.
inline constexpr unsigned kMaxDirectExponent = 22;
// Largest n for which L1 norms over [0, 1] are computed by quadrature.
inline constexpr unsigned kMaxQuadratureExponent = 16;

// r_k = (-1)^(number of overlapping "11" blocks in binary k).
constexpr int rs_sign(std::uint64_t k) {
  return (std::popcount(k & (k >> 1)) & 1) != 0 ? -1 : 1;
}

// First `count` indices k with r_k = +1, ascending: 0, 1, 2, 4, 5, 7, ...
sequences::IntegerSequence rs_integers(std::size_t count);

// sum_{k < l} r_k.
std::int64_t rs_partial_sum(std::uint64_t l);

struct RSBlockSummary {
  unsigned n = 0;
  // #{0 <= k < 2^n : r_k = +1}
  std::uint64_t sigma = 0;
};

RSBlockSummary block_summary(unsigned n);

// rho_n(e^{2 pi i alpha}) = sum_{k < 2^n} r_k e^{2 pi i k alpha}.
std::complex<double> rs_polynomial_eval(unsigned n, discrepancy::AlphaValue alpha);
std::complex<double> rs_polynomial_eval(unsigned n, double alpha);

// |Sigma(n) - (rho_n + sum_{k<2^n} e(k alpha)) / 2|, where Sigma(n) sums
// e(a alpha) over the Rudin-Shapiro integers a < 2^n. The identity is exact,
// so the residual is pure rounding.
double block_sum_identity_residual(unsigned n, discrepancy::AlphaValue alpha);
double block_sum_identity_residual(unsigned n, double alpha);

struct BoundCheck {
  double value = 0.0;
  double bound = 0.0;
  bool holds() const { return value <= bound; }
};

// Quadrature value of int_0^1 |sum_{k<2^n} e(k alpha)| d alpha against 2 + 2n.
BoundCheck geometric_l1_bound_check(unsigned n, double rel_tol = 1e-6);

// int_0^1 |Sigma(n)| d alpha / 2^{n/2}.
double rs_l1_ratio(unsigned n, double rel_tol = 1e-6);

}  // namespace addisc::rudinshapiro
