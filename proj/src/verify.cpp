#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "addisc/harness.hpp"
#include "addisc/rng.hpp"
#include "addisc/rudinshapiro.hpp"

namespace addisc::harness {

namespace {

class Recorder {
 public:
  explicit Recorder(std::string suite) : suite_(std::move(suite)) {}

  void check(std::string name, bool passed, std::string detail = {}) {
    summary_.checks.push_back({suite_, std::move(name), passed, std::move(detail)});
  }

  VerifySummary take() { return std::move(summary_); }

 private:
  std::string suite_;
  VerifySummary summary_;
};

std::vector<std::uint64_t> random_distinct(SplitMix64& rng, std::size_t n, std::uint64_t bound) {
  std::set<std::uint64_t> values;
  while (values.size() < n) values.insert(rng.below(bound));
  return {values.begin(), values.end()};
}

std::vector<std::uint64_t> range_terms(std::uint64_t first, std::uint64_t last) {
  std::vector<std::uint64_t> out(last - first + 1);
  std::iota(out.begin(), out.end(), first);
  return out;
}

u128 closed_form_interval(u128 n) { return (2 * n * n * n + n) / 3; }

// Random degree 2..4 polynomial with small nonnegative coefficients and a
// positive leading coefficient, hence strictly increasing on [1, inf).
energy::IntegerPolynomial random_increasing_polynomial(SplitMix64& rng) {
  const std::size_t degree = 2 + rng.below(3);
  energy::IntegerPolynomial f;
  for (std::size_t k = 0; k <= degree; ++k) f.coefficients.push_back(static_cast<std::int64_t>(rng.below(4)));
  f.coefficients.back() = 1 + static_cast<std::int64_t>(rng.below(3));
  return f;
}

VerifySummary energy_suite(std::uint64_t seed) {
  Recorder rec("energy");
  SplitMix64 rng(seed);

  std::size_t agree = 0;
  constexpr std::size_t kSets = 50;
  for (std::size_t i = 0; i < kSets; ++i) {
    const auto terms = random_distinct(rng, 1 + rng.below(64), std::uint64_t{1} << 20);
    const u128 brute = energy::energy_bruteforce(terms).value;
    const u128 hist = energy::energy_histogram(energy::difference_histogram(terms)).value;
    const u128 conv = energy::energy_convolution(terms).value;
    agree += brute == hist && hist == conv;
  }
  rec.check("backend agreement on random sets", agree == kSets, std::to_string(agree) + "/" + std::to_string(kSets));

  energy::IncrementalEnergy inc;
  bool closed = true;
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    inc.push(n);
    closed = closed && inc.result().value == closed_form_interval(n);
  }
  for (std::uint64_t n : {1, 7, 100, 1000}) {
    closed = closed && energy::energy_histogram(energy::difference_histogram(range_terms(1, n))).value ==
                           closed_form_interval(n);
  }
  rec.check("E({1..N}) = (2N^3 + N) / 3", closed, "N <= 2000");

  // Progressions reach the maximum (2n^3 + n) / 3; any perturbation drops below it.
  bool ap = true;
  for (std::uint64_t n = 1; n <= 32; ++n) {
    std::vector<std::uint64_t> terms;
    for (std::uint64_t k = 0; k < n; ++k) terms.push_back(5 + 3 * k);
    const u128 e = energy::energy_histogram(energy::difference_histogram(terms)).value;
    ap = ap && e == closed_form_interval(n);
    if (n >= 3) {
      terms.back() += 1;
      const u128 p = energy::energy_histogram(energy::difference_histogram(terms)).value;
      ap = ap && p < closed_form_interval(n) && p >= u128{n} * n;
    }
  }
  rec.check("E = (2n^3 + n) / 3 exactly on arithmetic progressions, less otherwise", ap, "n <= 32");

  bool invariant = true;
  for (int i = 0; i < 20; ++i) {
    const auto terms = random_distinct(rng, 2 + rng.below(40), 4096);
    const std::uint64_t c = 1 + rng.below(5), b = rng.below(1000);
    std::vector<std::uint64_t> moved;
    for (auto t : terms) moved.push_back(c * t + b);
    invariant = invariant && energy::energy_convolution(terms).value == energy::energy_convolution(moved).value;
  }
  rec.check("translation and dilation invariance", invariant);

  std::size_t reps_ok = 0;
  constexpr std::size_t kReps = 100;
  for (std::size_t i = 0; i < kReps; ++i) {
    const auto f = random_increasing_polynomial(rng);
    const std::uint64_t n = 2 + rng.below(99);
    const auto x = static_cast<i128>(1 + rng.below(n)), y = static_cast<i128>(1 + rng.below(n));
    const auto a = static_cast<std::int64_t>(f(x) - f(y));
    reps_ok += energy::representation_count(f, n, a, energy::CountMethod::divisor) ==
               energy::representation_count(f, n, a, energy::CountMethod::bruteforce);
  }
  rec.check("representation count: divisor = brute force", reps_ok == kReps,
            std::to_string(reps_ok) + "/" + std::to_string(kReps));
  return rec.take();
}

VerifySummary discrepancy_suite(std::uint64_t seed) {
  Recorder rec("discrepancy");
  SplitMix64 rng(seed);

  double worst_gap = 0.0;
  bool bounds = true, permutation = true;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.below(200);
    std::vector<double> points(n);
    for (auto& p : points) p = static_cast<double>(rng.below(std::uint64_t{1} << 20)) / 1048576.0;
    const double d = discrepancy::star_discrepancy(points);
    worst_gap = std::max(worst_gap, std::fabs(d - discrepancy::star_discrepancy_candidates(points)));
    bounds = bounds && d >= 0.5 / static_cast<double>(n) && d <= 1.0;
    std::reverse(points.begin(), points.end());
    permutation = permutation && discrepancy::star_discrepancy(points) == d;
  }
  rec.check("sorted formula = candidate-set supremum", worst_gap <= 1e-15, "max gap " + std::to_string(worst_gap));
  rec.check("1/(2N) <= D* <= 1", bounds);
  rec.check("permutation invariance", permutation);

  bool reflection = true;
  for (int i = 0; i < 100; ++i) {
    const discrepancy::AlphaValue alpha(rng.next_u128());
    const std::uint64_t a = rng.next();
    const u128 x = discrepancy::fractional_part_fixed(a, alpha);
    const u128 y = discrepancy::fractional_part_fixed(a, alpha.reflected());
    reflection = reflection && (x == 0 ? y == 0 : y == u128{0} - x);
  }
  rec.check("{a(1 - alpha)} = 1 - {a alpha} on the 128-bit grid", reflection);

  const auto seq = sequences::generate(sequences::Kronecker{}, 512);
  const std::vector<std::size_t> cps{64, 128, 256, 512};
  const auto r1 = discrepancy::metric_experiment(seq, 5, seed, cps);
  const auto r2 = discrepancy::metric_experiment(seq, 5, seed, cps);
  rec.check("metric experiment reproducible from seed", discrepancy::median_csv(r1) == discrepancy::median_csv(r2) &&
                                                            r1.fit.slope == r2.fit.slope);
  return rec.take();
}

VerifySummary expsum_suite(std::uint64_t seed) {
  Recorder rec("expsum");
  SplitMix64 rng(seed);
  double worst = 0.0;
  bool holder = true;
  for (int i = 0; i < 10; ++i) {
    const auto terms = random_distinct(rng, 1 + rng.below(32), 513);
    const auto est = expsum::l1_norm(terms, 1e-7);
    const u128 e = energy::energy_bruteforce(terms).value;
    worst = std::max(worst, std::fabs(est.fourth_moment - static_cast<double>(e)) / static_cast<double>(e));
    holder = holder && est.l1 >= expsum::holder_lower_bound(e, terms.size()) - expsum::holder_slack(terms.size());
  }
  rec.check("fourth moment matches exact energy", worst < 1e-6, "max rel error " + std::to_string(worst));
  rec.check("I(N) >= sqrt(N^3 / E)", holder);

  const auto terms = random_distinct(rng, 20, 300);
  const auto grid = expsum::midpoint_values(terms, 4096);
  double gap = 0.0;
  for (std::uint64_t j = 0; j < 4096; j += 97) {
    const auto alpha = discrepancy::AlphaValue::from_rational(2 * j + 1, 8192);
    gap = std::max(gap, std::abs(grid[j] - expsum::exp_sum(terms, alpha)));
  }
  rec.check("FFT grid = direct exponential sums", gap < 1e-10, "max gap " + std::to_string(gap));
  return rec.take();
}

}  // namespace

Suite suite_from_name(std::string_view name) {
  if (name == "energy") return Suite::energy;
  if (name == "discrepancy") return Suite::discrepancy;
  if (name == "expsum") return Suite::expsum;
  if (name == "rs") return Suite::rs;
  if (name == "all") return Suite::all;
  throw InvalidArgument("unknown verification suite: " + std::string(name));
}

bool VerifySummary::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void VerifySummary::merge(const VerifySummary& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

nlohmann::json VerifySummary::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : checks)
    rows.push_back({{"suite", c.suite}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"passed", passed()}, {"checks", rows}};
}

VerifySummary rs_verify(unsigned max_n, std::uint64_t max_l, std::uint64_t seed) {
  using namespace rudinshapiro;
  Recorder rec("rs");
  SplitMix64 rng(seed);

  const auto first = rs_integers(6).terms;
  rec.check("first Rudin-Shapiro integers are 0,1,2,4,5,7",
            first == std::vector<std::uint64_t>{0, 1, 2, 4, 5, 7});

  if (max_l >= 1) {
    const auto seq = rs_integers(max_l);
    bool growth = true;
    for (std::uint64_t k = 1; k <= max_l; ++k) growth = growth && seq.terms[k - 1] <= 2 * k;
    rec.check("a_k <= 2k", growth, "k <= " + std::to_string(max_l));

    // sqrt(3l/5) < s(l) < sqrt(6l), compared as 5 s^2 > 3l and s^2 < 6l
    bool sandwich = true;
    std::int64_t s = 0;
    std::uint64_t first_bad = 0;
    for (std::uint64_t l = 1; l <= max_l; ++l) {
      s += rs_sign(l - 1);
      const u128 sq = static_cast<u128>(s * s);
      const bool ok = s > 0 && 5 * sq > 3 * u128{l} && sq < 6 * u128{l};
      if (!ok && sandwich) first_bad = l;
      sandwich = sandwich && ok;
    }
    rec.check("sqrt(3l/5) < partial sum < sqrt(6l)", sandwich,
              sandwich ? "l <= " + std::to_string(max_l) : "fails at l = " + std::to_string(first_bad));

    bool scattering = true;
    for (std::uint64_t k = 0; 2 * k + 1 <= max_l; ++k) {
      scattering = scattering && rs_sign(2 * k) == rs_sign(k) && rs_sign(2 * k + 1) == ((k & 1) ? -1 : 1) * rs_sign(k);
    }
    rec.check("r_{2k} = r_k and r_{2k+1} = (-1)^k r_k", scattering);
  }

  bool sigma = true;
  for (unsigned n = 1; n <= std::min(max_n, 20u); ++n) {
    const auto summary = block_summary(n);
    const std::int64_t s = rs_partial_sum(std::uint64_t{1} << n);
    // sigma(1) = 2; the strict upper bound starts at n = 2
    sigma = sigma && static_cast<std::int64_t>(2 * summary.sigma) == (std::int64_t{1} << n) + s &&
            summary.sigma > (std::uint64_t{1} << (n - 1)) &&
            (n == 1 ? summary.sigma == 2 : summary.sigma < (std::uint64_t{1} << n));
  }
  rec.check("sigma(n) = 2^(n-1) + s(2^n)/2", sigma);

  double worst = 0.0;
  bool identity = true;
  for (unsigned n = 1; n <= std::min(max_n, kMaxDirectExponent); ++n) {
    const int samples = n <= 12 ? 1000 : std::max(10, 1000 >> (n - 12));
    for (int i = 0; i < samples; ++i) {
      const double r = block_sum_identity_residual(n, discrepancy::AlphaValue(rng.next_u128()));
      worst = std::max(worst, r);
      identity = identity && r < std::ldexp(1e-12, static_cast<int>(n));
    }
  }
  rec.check("block-sum identity residual < 2^n 1e-12", identity, "max residual " + std::to_string(worst));

  bool geometric = true;
  std::ostringstream values;
  for (unsigned n = 0; n <= std::min(max_n, 12u); ++n) {
    const auto check = geometric_l1_bound_check(n, 1e-6);
    geometric = geometric && check.holds();
    if (n == std::min(max_n, 12u)) values << "n=" << n << " value " << check.value << " <= " << check.bound;
  }
  rec.check("geometric L1 <= 2 + 2n", geometric, values.str());

  if (max_n >= 4) {
    double smallest = 1e300;
    for (unsigned n = 4; n <= std::min(max_n, 14u); ++n) smallest = std::min(smallest, rs_l1_ratio(n, 1e-6));
    rec.check("L1(Sigma(n)) / 2^(n/2) stays above 0.1", smallest > 0.1, "min ratio " + std::to_string(smallest));
  }
  return rec.take();
}

VerifySummary verify(Suite suite, std::uint64_t seed) {
  VerifySummary out;
  if (suite == Suite::energy || suite == Suite::all) out.merge(energy_suite(seed));
  if (suite == Suite::discrepancy || suite == Suite::all) out.merge(discrepancy_suite(seed));
  if (suite == Suite::expsum || suite == Suite::all) out.merge(expsum_suite(seed));
  if (suite == Suite::rs || suite == Suite::all) out.merge(rs_verify(12, 1000000, seed));
  return out;
}

}  // namespace addisc::harness
