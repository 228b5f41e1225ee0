#include "addisc/rudinshapiro.hpp"

#include <cmath>
#include <numbers>

#include "addisc/expsum.hpp"

namespace addisc::rudinshapiro {

namespace {

void require_direct(unsigned n) {
  if (n > kMaxDirectExponent)
    throw BudgetExceeded("direct summation is limited to n <= " + std::to_string(kMaxDirectExponent));
}

void require_quadrature(unsigned n) {
  if (n > kMaxQuadratureExponent)
    throw BudgetExceeded("quadrature is limited to n <= " + std::to_string(kMaxQuadratureExponent));
}

std::complex<double> phase(std::uint64_t k, discrepancy::AlphaValue alpha) {
  const u128 fraction = discrepancy::fractional_part_fixed(k, alpha);
  const double turns = std::ldexp(static_cast<double>(static_cast<std::uint64_t>(fraction >> 64)), -64);
  return std::polar(1.0, 2.0 * std::numbers::pi * turns);
}

std::vector<std::uint64_t> integers_below(unsigned n) {
  std::vector<std::uint64_t> out;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t k = 0; k < limit; ++k) {
    if (rs_sign(k) == 1) out.push_back(k);
  }
  return out;
}

}  // namespace

sequences::IntegerSequence rs_integers(std::size_t count) {
  return sequences::generate(sequences::RudinShapiro{}, count);
}

std::int64_t rs_partial_sum(std::uint64_t l) {
  std::int64_t sum = 0;
  for (std::uint64_t k = 0; k < l; ++k) sum += rs_sign(k);
  return sum;
}

RSBlockSummary block_summary(unsigned n) {
  if (n > 40) throw BudgetExceeded("block summary is limited to n <= 40");
  std::uint64_t sigma = 0;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t k = 0; k < limit; ++k) sigma += rs_sign(k) == 1;
  return {n, sigma};
}

std::complex<double> rs_polynomial_eval(unsigned n, discrepancy::AlphaValue alpha) {
  require_direct(n);
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::vector<std::complex<double>> terms(limit);
  for (std::uint64_t k = 0; k < limit; ++k) terms[k] = static_cast<double>(rs_sign(k)) * phase(k, alpha);
  return expsum::pairwise_sum(terms);
}

std::complex<double> rs_polynomial_eval(unsigned n, double alpha) {
  return rs_polynomial_eval(n, discrepancy::AlphaValue::from_double(alpha));
}

double block_sum_identity_residual(unsigned n, discrepancy::AlphaValue alpha) {
  require_direct(n);
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::vector<std::complex<double>> block, signed_terms, geometric;
  block.reserve(limit);
  signed_terms.reserve(limit);
  geometric.reserve(limit);
  for (std::uint64_t k = 0; k < limit; ++k) {
    const auto e = phase(k, alpha);
    const int r = rs_sign(k);
    if (r == 1) block.push_back(e);
    signed_terms.push_back(static_cast<double>(r) * e);
    geometric.push_back(e);
  }
  const auto sigma = expsum::pairwise_sum(block);
  const auto rho = expsum::pairwise_sum(signed_terms);
  const auto geo = expsum::pairwise_sum(geometric);
  return std::abs(sigma - 0.5 * (rho + geo));
}

double block_sum_identity_residual(unsigned n, double alpha) {
  return block_sum_identity_residual(n, discrepancy::AlphaValue::from_double(alpha));
}

BoundCheck geometric_l1_bound_check(unsigned n, double rel_tol) {
  require_quadrature(n);
  std::vector<std::uint64_t> terms(std::uint64_t{1} << n);
  for (std::uint64_t k = 0; k < terms.size(); ++k) terms[k] = k;
  const auto est = expsum::l1_norm(terms, rel_tol);
  return {est.l1, 2.0 + 2.0 * n};
}

double rs_l1_ratio(unsigned n, double rel_tol) {
  require_quadrature(n);
  const auto est = expsum::l1_norm(integers_below(n), rel_tol);
  return est.l1 / std::pow(2.0, 0.5 * n);
}

}  // namespace addisc::rudinshapiro
