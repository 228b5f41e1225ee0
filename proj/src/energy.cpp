#include "addisc/energy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>

#include <fftw3.h>

namespace addisc::energy {

namespace {

// Pairs materialized by difference_histogram (8 bytes each).
constexpr std::uint64_t kHistogramPairCap = std::uint64_t{1} << 27;

constexpr std::string_view kBackendNames[] = {"bruteforce", "histogram", "convolution"};

void require_strictly_increasing(std::span<const std::uint64_t> terms) {
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i] <= terms[i - 1]) throw InvalidArgument("energy input must be sorted and free of duplicates");
  }
}

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(double* p) const { fftw_free(p); }
};

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

// One plan pair per transform length, kept for the life of the process.
PlanPair plans_for(std::uint64_t length) {
  static std::map<std::uint64_t, PlanPair> cache;
  std::lock_guard lock(planner_mutex());
  if (auto it = cache.find(length); it != cache.end()) return it->second;
  const std::size_t bins = length / 2 + 1;
  std::unique_ptr<double, FftwFree> scratch(static_cast<double*>(fftw_malloc(sizeof(double) * 2 * bins)));
  if (!scratch) throw BudgetExceeded("cannot allocate convolution buffer of length " + std::to_string(length));
  auto* spectrum = reinterpret_cast<fftw_complex*>(scratch.get());
  const int len = static_cast<int>(length);
  const PlanPair plans{fftw_plan_dft_r2c_1d(len, scratch.get(), spectrum, FFTW_ESTIMATE),
                       fftw_plan_dft_c2r_1d(len, spectrum, scratch.get(), FFTW_ESTIMATE)};
  if (!plans.forward || !plans.backward) throw NumericalFailure("FFTW planning failed");
  cache.emplace(length, plans);
  return plans;
}

u128 square(std::uint64_t x) { return static_cast<u128>(x) * x; }

// ---- representation counting ------------------------------------------------

std::optional<i128> eval_checked(const std::vector<std::int64_t>& c, i128 x) {
  i128 acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    if (__builtin_mul_overflow(acc, x, &acc)) return std::nullopt;
    if (__builtin_add_overflow(acc, static_cast<i128>(*it), &acc)) return std::nullopt;
  }
  return acc;
}

using RealPoly = std::vector<long double>;

long double eval_real(const RealPoly& p, long double x) {
  long double acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

RealPoly derivative(const RealPoly& p) {
  RealPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long double>(k));
  return d;
}

int sign_of(long double v) { return (v > 0) - (v < 0); }

// Approximate real roots of p in [lo, hi], plus the critical points that split
// the interval into monotone pieces. Every integer root lies within 1 of a
// returned point.
void root_candidates(const RealPoly& p, long double lo, long double hi, std::vector<long double>& out) {
  if (p.size() <= 1) return;
  std::vector<long double> cuts{lo};
  if (p.size() > 2) {
    std::vector<long double> crit;
    root_candidates(derivative(p), lo, hi, crit);
    std::sort(crit.begin(), crit.end());
    for (long double c : crit) {
      if (c > lo && c < hi) cuts.push_back(c);
    }
  }
  cuts.push_back(hi);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    long double a = cuts[i], b = cuts[i + 1];
    out.push_back(a);
    int sa = sign_of(eval_real(p, a));
    const int sb = sign_of(eval_real(p, b));
    if (sa == 0 || sb == 0 || sa == sb) continue;
    for (int iter = 0; iter < 200 && b - a > 1e-9L; ++iter) {
      const long double mid = (a + b) / 2;
      const int sm = sign_of(eval_real(p, mid));
      if (sm == 0) {
        a = b = mid;
        break;
      }
      if (sm == sa) {
        a = mid;
      } else {
        b = mid;
      }
    }
    out.push_back((a + b) / 2);
  }
  out.push_back(hi);
}

// Coefficients of (f(x) - f(x - t)) / t, i.e. q(x, x - t).
RealPoly shifted_quotient(const std::vector<std::int64_t>& f, std::int64_t t) {
  const std::size_t d = f.size() - 1;
  RealPoly out(d, 0.0L);
  const long double lt = static_cast<long double>(t);
  for (std::size_t k = 1; k <= d; ++k) {
    // x^k - (x - t)^k = -sum_{j<k} C(k, j) x^j (-t)^{k-j}
    long double binom = 1;
    for (std::size_t j = 0; j < k; ++j) {
      const long double term = binom * std::pow(-lt, static_cast<long double>(k - j));
      out[j] -= static_cast<long double>(f[k]) * term / lt;
      binom = binom * static_cast<long double>(k - j) / static_cast<long double>(j + 1);
    }
  }
  return out;
}

std::vector<std::uint64_t> positive_divisors(std::uint64_t m) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t t = 1; t * t <= m; ++t) {
    if (m % t != 0) continue;
    small.push_back(t);
    if (t != m / t) large.push_back(m / t);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::vector<i128> tabulate(const IntegerPolynomial& f, std::uint64_t range_n) {
  std::vector<i128> values(range_n + 1);
  for (std::uint64_t x = 1; x <= range_n; ++x) {
    const auto v = eval_checked(f.coefficients, static_cast<i128>(x));
    if (!v) throw BudgetExceeded("polynomial value exceeds 128 bits");
    values[x] = *v;
  }
  return values;
}

}  // namespace

std::string_view backend_name(Backend backend) { return kBackendNames[static_cast<std::size_t>(backend)]; }

Backend backend_from_name(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kBackendNames); ++i) {
    if (kBackendNames[i] == name) return static_cast<Backend>(i);
  }
  throw InvalidArgument("unknown energy backend: " + std::string(name));
}

std::uint64_t DifferenceHistogram::at(std::uint64_t d) const {
  auto it = std::lower_bound(counts.begin(), counts.end(), d, [](const auto& e, std::uint64_t v) { return e.first < v; });
  return it != counts.end() && it->first == d ? it->second : 0;
}

DifferenceHistogram difference_histogram(std::span<const std::uint64_t> terms) {
  require_strictly_increasing(terms);
  const std::uint64_t n = terms.size();
  if (n > 0 && n * (n - 1) / 2 > kHistogramPairCap)
    throw BudgetExceeded("difference histogram of " + std::to_string(n) + " terms exceeds the pair budget");
  std::vector<std::uint64_t> diffs;
  diffs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) diffs.push_back(terms[i] - terms[j]);
  }
  std::sort(diffs.begin(), diffs.end());

  DifferenceHistogram hist;
  hist.n = n;
  if (n > 0) hist.counts.emplace_back(0, n);
  for (std::size_t i = 0; i < diffs.size();) {
    std::size_t j = i;
    while (j < diffs.size() && diffs[j] == diffs[i]) ++j;
    hist.counts.emplace_back(diffs[i], j - i);
    i = j;
  }
  return hist;
}

EnergyResult energy_bruteforce(std::span<const std::uint64_t> terms) {
  if (terms.size() > kBruteforceCap)
    throw BudgetExceeded("brute-force energy is capped at " + std::to_string(kBruteforceCap) + " terms");
  u128 count = 0;
  for (std::uint64_t x1 : terms)
    for (std::uint64_t x2 : terms)
      for (std::uint64_t x3 : terms)
        for (std::uint64_t x4 : terms) {
          // x1 - x2 = x3 - x4, rearranged to avoid signed arithmetic
          if (static_cast<u128>(x1) + x4 == static_cast<u128>(x3) + x2) ++count;
        }
  return {terms.size(), count, Backend::bruteforce};
}

EnergyResult energy_histogram(const DifferenceHistogram& hist) {
  u128 value = square(hist.at(0));
  for (const auto& [d, r] : hist.counts) {
    if (d != 0) value += 2 * square(r);
  }
  return {hist.n, value, Backend::histogram};
}

EnergyResult energy_convolution(std::span<const std::uint64_t> terms, std::uint64_t window_limit) {
  require_strictly_increasing(terms);
  if (terms.empty()) return {0, 0, Backend::convolution};
  const std::uint64_t max = terms.back();
  if (max > window_limit)
    throw BudgetExceeded("max term " + std::to_string(max) + " exceeds the convolution window " +
                         std::to_string(window_limit));
  const std::uint64_t length = std::bit_ceil(2 * (max + 1));
  const std::size_t complex_bins = length / 2 + 1;

  std::unique_ptr<double, FftwFree> buffer(static_cast<double*>(fftw_malloc(sizeof(double) * 2 * complex_bins)));
  if (!buffer) throw BudgetExceeded("cannot allocate convolution buffer of length " + std::to_string(length));
  double* real = buffer.get();
  auto* spectrum = reinterpret_cast<fftw_complex*>(real);

  const PlanPair plans = plans_for(length);

  std::fill(real, real + 2 * complex_bins, 0.0);
  for (std::uint64_t a : terms) real[a] = 1.0;
  fftw_execute_dft_r2c(plans.forward, real, spectrum);
  for (std::size_t k = 0; k < complex_bins; ++k) {
    const double re = spectrum[k][0], im = spectrum[k][1];
    spectrum[k][0] = re * re + im * im;
    spectrum[k][1] = 0.0;
  }
  fftw_execute_dft_c2r(plans.backward, spectrum, real);

  const double scale = 1.0 / static_cast<double>(length);
  u128 value = 0;
  for (std::uint64_t d = 0; d < length; ++d) {
    const double coefficient = real[d] * scale;
    const double rounded = std::nearbyint(coefficient);
    if (std::fabs(coefficient - rounded) >= 0.25 || rounded < 0)
      throw NumericalFailure("autocorrelation coefficient at lag " + std::to_string(d) + " not integral: " +
                             std::to_string(coefficient));
    if (d > max) continue;  // negative lags mirror the positive ones
    const auto r = static_cast<std::uint64_t>(rounded);
    value += d == 0 ? square(r) : 2 * square(r);
  }
  if (std::nearbyint(real[0] * scale) != static_cast<double>(terms.size()))
    throw NumericalFailure("autocorrelation at lag 0 does not equal |A|");
  return {terms.size(), value, Backend::convolution};
}

void IncrementalEnergy::push(std::uint64_t term) {
  if (!terms_.empty() && term <= terms_.back()) throw InvalidArgument("IncrementalEnergy needs increasing terms");
  const u128 n = terms_.size();
  value_ += 2 * n + 1;  // r(0): n -> n + 1
  for (std::uint64_t a : terms_) {
    const u128 r = positive_[term - a]++;
    value_ += 2 * (2 * r + 1);  // r(d) and r(-d): r -> r + 1
  }
  terms_.push_back(term);
}

EnergyProfile energy_profile(const sequences::IntegerSequence& seq, std::span<const std::size_t> checkpoints,
                             std::uint64_t window_limit) {
  EnergyProfile profile;
  std::size_t previous = 0;
  for (std::size_t n : checkpoints) {
    if (n == 0 || n <= previous) throw InvalidArgument("energy checkpoints must be positive and strictly increasing");
    previous = n;
    const auto prefix = seq.prefix(n);
    EnergyResult result;
    bool done = false;
    if (prefix.back() <= window_limit) {
      try {
        result = energy_convolution(prefix, window_limit);
        done = true;
      } catch (const NumericalFailure&) {
        // fall through to the exact histogram route
      }
    }
    if (!done) result = energy_histogram(difference_histogram(prefix));
    profile.checkpoints.push_back({n, result});
  }
  return profile;
}

harness::ExponentFit kappa_fit(const EnergyProfile& profile) {
  std::vector<harness::LogLogPoint> points;
  for (const auto& cp : profile.checkpoints)
    points.push_back({static_cast<double>(cp.n), static_cast<double>(cp.energy.value)});
  return harness::fit_loglog(points);
}

std::string profile_csv(const EnergyProfile& profile) {
  std::ostringstream out;
  out << "N,E,backend\n";
  for (const auto& cp : profile.checkpoints)
    out << cp.n << ',' << to_string(cp.energy.value) << ',' << backend_name(cp.energy.backend) << '\n';
  return out.str();
}

i128 IntegerPolynomial::operator()(i128 x) const {
  const auto v = eval_checked(coefficients, x);
  if (!v) throw BudgetExceeded("polynomial value exceeds 128 bits");
  return *v;
}

std::uint64_t representation_count(const IntegerPolynomial& f, std::uint64_t range_n, std::int64_t a,
                                   CountMethod method) {
  if (f.degree() < 2 || f.coefficients.back() == 0) throw InvalidArgument("representation_count needs degree >= 2");
  if (range_n == 0) throw InvalidArgument("range_n must be at least 1");
  const std::vector<i128> values = tabulate(f, range_n);
  for (std::uint64_t x = 1; x < range_n; ++x) {
    if (values[x + 1] <= values[x]) throw InvalidArgument("polynomial is not strictly increasing on [1, range_n]");
  }

  if (method == CountMethod::bruteforce) {
    std::uint64_t count = 0;
    for (std::uint64_t x = 1; x <= range_n; ++x)
      for (std::uint64_t y = 1; y <= range_n; ++y)
        if (values[x] - values[y] == a) ++count;
    return count;
  }

  if (a == 0) return range_n;

  // f(x) - f(y) = (x - y) q(x, y): t = x - y divides a, and x solves
  // q(x, x - t) = a / t.
  const std::uint64_t magnitude = a < 0 ? static_cast<std::uint64_t>(-(a + 1)) + 1 : static_cast<std::uint64_t>(a);
  const auto n = static_cast<std::int64_t>(range_n);
  std::uint64_t count = 0;
  for (std::uint64_t divisor : positive_divisors(magnitude)) {
    if (divisor >= range_n) break;  // |x - y| < range_n
    for (const std::int64_t t : {static_cast<std::int64_t>(divisor), -static_cast<std::int64_t>(divisor)}) {
      const std::int64_t lo = std::max<std::int64_t>(1, 1 + t);
      const std::int64_t hi = std::min<std::int64_t>(n, n + t);
      if (lo > hi) continue;
      RealPoly h = shifted_quotient(f.coefficients, t);
      h[0] -= static_cast<long double>(a / t);
      std::vector<long double> near;
      root_candidates(h, static_cast<long double>(lo), static_cast<long double>(hi), near);
      std::set<std::int64_t> roots;
      for (long double r : near) {
        const auto base = static_cast<std::int64_t>(std::floor(r));
        for (std::int64_t x = base - 1; x <= base + 2; ++x) {
          if (x < lo || x > hi) continue;
          if (values[static_cast<std::size_t>(x)] - values[static_cast<std::size_t>(x - t)] == a) roots.insert(x);
        }
      }
      count += roots.size();
    }
  }
  return count;
}

}  // namespace addisc::energy
