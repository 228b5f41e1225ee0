#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "addisc/energy.hpp"
#include "addisc/rng.hpp"
#include "addisc/rudinshapiro.hpp"
#include "oracles.hpp"

using namespace addisc;
using namespace addisc::rudinshapiro;
using discrepancy::AlphaValue;

TEST_CASE("rs_sign: listed signs") {
  const int listed[] = {1, 1, 1, -1, 1, 1, -1, 1};
  for (std::uint64_t k = 0; k < 8; ++k) CHECK(rs_sign(k) == listed[k]);
  CHECK(rs_sign(0) == 1);
  CHECK(rs_sign(3) == -1);
  CHECK(rs_sign(6) == -1);
  CHECK(rs_sign(7) == 1);  // 111 holds two overlapping blocks
}

TEST_CASE("rs_sign matches the bit-string count and the scattering recurrences") {
  for (std::uint64_t k = 0; k <= 1000000; ++k) {
    REQUIRE(rs_sign(k) == oracle::rs_sign(k));
    REQUIRE(rs_sign(2 * k) == rs_sign(k));
    REQUIRE(rs_sign(2 * k + 1) == ((k & 1) ? -rs_sign(k) : rs_sign(k)));
  }
  SplitMix64 rng(6);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t k = rng.next();
    REQUIRE(rs_sign(k) == oracle::rs_sign(k));
  }
}

TEST_CASE("rs_integers") {
  CHECK(rs_integers(6).terms == std::vector<std::uint64_t>{0, 1, 2, 4, 5, 7});
  CHECK(rs_integers(1).terms == std::vector<std::uint64_t>{0});
  const auto s = rs_integers(1000000);
  for (std::size_t k = 1; k <= s.size(); ++k) {
    REQUIRE(s.terms[k - 1] <= 2 * k);
    REQUIRE(rs_sign(s.terms[k - 1]) == 1);
  }
}

TEST_CASE("rs_partial_sum") {
  CHECK(rs_partial_sum(1) == 1);
  CHECK(rs_partial_sum(2) == 2);
  CHECK(rs_partial_sum(8) == 4);
  CHECK(rs_partial_sum(0) == 0);
  std::int64_t s = 0;
  for (std::uint64_t l = 1; l <= 1000000; ++l) {
    s += rs_sign(l - 1);
    const double v = static_cast<double>(s), ld = static_cast<double>(l);
    REQUIRE(v > std::sqrt(3.0 * ld / 5.0));
    REQUIRE(v < std::sqrt(6.0 * ld));
  }
  CHECK(rs_partial_sum(1000000) == s);
}

TEST_CASE("block_summary") {
  CHECK(block_summary(0).sigma == 1);
  CHECK(block_summary(1).sigma == 2);
  CHECK(block_summary(3).sigma == 6);
  for (unsigned n = 1; n <= 20; ++n) {
    const auto b = block_summary(n);
    REQUIRE(2 * static_cast<std::int64_t>(b.sigma) == (std::int64_t{1} << n) + rs_partial_sum(std::uint64_t{1} << n));
    REQUIRE(b.sigma > (std::uint64_t{1} << (n - 1)));
    if (n >= 2) REQUIRE(b.sigma < (std::uint64_t{1} << n));
  }
  CHECK_THROWS_AS(block_summary(41), BudgetExceeded);
}

TEST_CASE("rs_polynomial_eval") {
  CHECK(std::abs(rs_polynomial_eval(1, 0.0) - 2.0) < 1e-15);
  CHECK(std::abs(rs_polynomial_eval(2, 0.0) - 2.0) < 1e-15);
  CHECK(std::abs(rs_polynomial_eval(3, 0.0) - 4.0) < 1e-15);
  CHECK(std::abs(rs_polynomial_eval(1, 0.5)) < 1e-15);
  SplitMix64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const unsigned n = 1 + static_cast<unsigned>(rng.below(12));
    const std::uint64_t q = std::uint64_t{1} << 32, p = rng.below(q);
    std::vector<std::uint64_t> plus, minus;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) (rs_sign(k) == 1 ? plus : minus).push_back(k);
    const auto ref = oracle::exp_sum_rational(plus, p, q) - oracle::exp_sum_rational(minus, p, q);
    const auto got = rs_polynomial_eval(n, AlphaValue(u128{p} << 96));
    REQUIRE(std::abs(got - std::complex<double>(ref)) < 1e-10);
    REQUIRE(std::abs(got) <= std::ldexp(1.0, static_cast<int>(n)));
  }
  CHECK_THROWS_AS(rs_polynomial_eval(23, 0.1), BudgetExceeded);
}

TEST_CASE("block-sum identity") {
  CHECK(block_sum_identity_residual(1, 0.37) < 1e-15);
  CHECK(block_sum_identity_residual(3, 0.0) == 0.0);
  SplitMix64 rng(10);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) worst = std::max(worst, block_sum_identity_residual(10, AlphaValue(rng.next_u128())));
  CHECK(worst < 1e-9);
  CHECK_THROWS_AS(block_sum_identity_residual(23, 0.1), BudgetExceeded);
}

TEST_CASE("geometric_l1_bound_check") {
  const auto b1 = geometric_l1_bound_check(1);
  CHECK(b1.value == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-6));
  CHECK(b1.bound == 4.0);
  CHECK(b1.holds());
  const auto b0 = geometric_l1_bound_check(0);
  CHECK(b0.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b0.bound == 2.0);
  const auto b10 = geometric_l1_bound_check(10);
  CHECK(b10.value <= 22.0);
  CHECK(b10.value == doctest::Approx(static_cast<double>(oracle::dirichlet_l1(1024))).epsilon(1e-6));
  CHECK_THROWS_AS(geometric_l1_bound_check(17), BudgetExceeded);
}

TEST_CASE("rs_l1_ratio: closed forms and frozen baselines") {
  CHECK(rs_l1_ratio(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rs_l1_ratio(1) == doctest::Approx(4.0 / std::numbers::pi / std::sqrt(2.0)).epsilon(1e-6));
  // Quadrature values at rel_tol 1e-6, frozen after the first run.
  const double frozen[] = {0.62007538239518278, 0.61130590062297052, 0.56282844261343434, 0.54507008305019788,
                           0.52450966226416806, 0.51335882932221688, 0.50161998385936835, 0.49507861324859681,
                           0.48827725862305116, 0.48448489334583011, 0.48075835042084436};
  double smallest = 1.0;
  for (unsigned n = 4; n <= 14; ++n) {
    const double r = rs_l1_ratio(n);
    CHECK(r == doctest::Approx(frozen[n - 4]).epsilon(1e-9));
    smallest = std::min(smallest, r);
  }
  CHECK(smallest > 0.1);
  CHECK_THROWS_AS(rs_l1_ratio(17), BudgetExceeded);
}

TEST_CASE("Rudin-Shapiro integers have energy of order N^3") {
  const auto s = rs_integers(1 << 12);
  for (std::size_t n : {1 << 10, 1 << 11, 1 << 12}) {
    const auto prefix = s.prefix(n);
    const u128 conv = energy::energy_convolution(prefix).value;
    REQUIRE(conv == energy::energy_histogram(energy::difference_histogram(prefix)).value);
    REQUIRE(static_cast<double>(conv) / std::pow(static_cast<double>(n), 3) > 0.33);
  }
}
