#include "addisc/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "addisc/rng.hpp"

namespace addisc::discrepancy {

namespace {

void check_checkpoints(std::span<const std::size_t> checkpoints, std::size_t available) {
  std::size_t previous = 0;
  for (std::size_t n : checkpoints) {
    if (n == 0 || n <= previous) throw InvalidArgument("checkpoints must be positive and strictly increasing");
    if (n > available)
      throw InvalidArgument("checkpoint " + std::to_string(n) + " exceeds the " + std::to_string(available) +
                            " available terms");
    previous = n;
  }
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

AlphaValue AlphaValue::from_rational(std::uint64_t p, std::uint64_t q) {
  if (q == 0 || p >= q) throw InvalidArgument("from_rational needs 0 <= p < q");
  // Two rounds of long division by q, 64 bits each.
  const u128 wide_q = q;
  const u128 first = static_cast<u128>(p) << 64;
  const u128 hi = first / wide_q;
  const u128 second = (first % wide_q) << 64;
  u128 lo = second / wide_q;
  const u128 rem = second % wide_q;
  if (2 * rem >= wide_q) ++lo;
  return AlphaValue((hi << 64) + lo);
}

AlphaValue AlphaValue::from_double(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("alpha must be finite");
  x -= std::floor(x);
  if (x >= 1.0) x = 0.0;
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent, mantissa in [0.5, 1)
  if (mantissa == 0.0) return AlphaValue(0);
  const auto bits = static_cast<std::uint64_t>(std::ldexp(mantissa, 53));  // exact
  const int shift = 128 - 53 + exponent;
  if (shift < 0) return AlphaValue(static_cast<u128>(bits) >> -shift);
  return AlphaValue(static_cast<u128>(bits) << shift);
}

AlphaValue AlphaValue::golden() {
  using boost::multiprecision::cpp_int;
  const cpp_int one = cpp_int(1) << 128;
  const cpp_int root = boost::multiprecision::sqrt(cpp_int(5) << 256);
  const cpp_int value = (root - one) / 2;
  u128 out = 0;
  for (int limb = 1; limb >= 0; --limb) {
    out = (out << 64) | static_cast<std::uint64_t>((value >> (64 * limb)) & cpp_int(~std::uint64_t{0}));
  }
  return AlphaValue(out);
}

double AlphaValue::to_double() const { return fixed_to_unit(numerator_); }

double fixed_to_unit(u128 fraction) {
  const double value = std::ldexp(static_cast<double>(fraction), -128);
  return value < 1.0 ? value : std::nextafter(1.0, 0.0);
}

std::vector<double> fractional_parts(std::span<const std::uint64_t> terms, AlphaValue alpha) {
  std::vector<double> out;
  out.reserve(terms.size());
  for (std::uint64_t a : terms) out.push_back(fixed_to_unit(fractional_part_fixed(a, alpha)));
  return out;
}

double star_discrepancy(std::span<const double> points) {
  if (points.empty()) throw InvalidArgument("star discrepancy of an empty point set");
  std::vector<double> sorted(points.begin(), points.end());
  for (double x : sorted) {
    if (!(x >= 0.0 && x < 1.0)) throw InvalidArgument("points must lie in [0, 1)");
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double x = sorted[i];
    worst = std::max({worst, static_cast<double>(i + 1) / n - x, x - static_cast<double>(i) / n});
  }
  return worst;
}

double star_discrepancy_candidates(std::span<const double> points) {
  if (points.empty()) throw InvalidArgument("star discrepancy of an empty point set");
  const double n = static_cast<double>(points.size());
  auto deviation = [&](double beta, bool closed) {
    std::size_t count = 0;
    for (double x : points) count += closed ? (x <= beta) : (x < beta);
    return std::fabs(static_cast<double>(count) / n - beta);
  };
  double worst = deviation(1.0, false);
  for (double beta : points) {
    if (beta > 0.0) worst = std::max(worst, deviation(beta, false));
    worst = std::max(worst, deviation(beta, true));  // beta -> x+
  }
  return worst;
}

DiscrepancyProfile discrepancy_profile(std::span<const std::uint64_t> terms, AlphaValue alpha,
                                       std::span<const std::size_t> checkpoints) {
  check_checkpoints(checkpoints, terms.size());
  DiscrepancyProfile profile{alpha, {}};
  if (checkpoints.empty()) return profile;
  const std::vector<double> points = fractional_parts(terms.first(checkpoints.back()), alpha);
  for (std::size_t n : checkpoints) {
    const double d = star_discrepancy(std::span<const double>(points).first(n));
    profile.checkpoints.push_back({n, d, static_cast<double>(n) * d});
  }
  return profile;
}

DiscrepancyProfile discrepancy_profile(const sequences::IntegerSequence& seq, AlphaValue alpha,
                                       std::span<const std::size_t> checkpoints) {
  return discrepancy_profile(std::span<const std::uint64_t>(seq.terms), alpha, checkpoints);
}

std::vector<AlphaValue> draw_alphas(std::uint64_t seed, std::size_t count, std::size_t* redraws) {
  SplitMix64 rng(seed);
  std::vector<AlphaValue> out;
  out.reserve(count);
  std::size_t rejected = 0;
  while (out.size() < count) {
    const u128 x = rng.next_u128();
    if (x == 0) {
      ++rejected;
      continue;
    }
    out.emplace_back(x);
  }
  if (redraws) *redraws = rejected;
  return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("quantile of empty data");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

MetricResult metric_experiment(const sequences::IntegerSequence& seq, std::size_t alpha_count, std::uint64_t seed,
                               std::span<const std::size_t> checkpoints) {
  if (alpha_count < 3) throw InvalidArgument("metric experiment needs at least 3 alpha samples");
  if (checkpoints.size() < 3) throw InvalidArgument("metric experiment needs at least 3 checkpoints");
  check_checkpoints(checkpoints, seq.size());

  MetricResult result;
  result.seed = seed;
  result.alphas = draw_alphas(seed, alpha_count, &result.redraws);

  // weighted[c][m]: N D_N^* at checkpoint c for alpha draw m
  std::vector<std::vector<double>> weighted(checkpoints.size(), std::vector<double>(alpha_count));
  for (std::size_t m = 0; m < alpha_count; ++m) {
    const auto profile = discrepancy_profile(seq, result.alphas[m], checkpoints);
    for (std::size_t c = 0; c < checkpoints.size(); ++c) weighted[c][m] = profile.checkpoints[c].weighted;
  }

  std::vector<harness::LogLogPoint> points;
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    auto& values = weighted[c];
    std::sort(values.begin(), values.end());
    const QuantileBand band{checkpoints[c], quantile_sorted(values, 0.5), quantile_sorted(values, 0.25),
                            quantile_sorted(values, 0.75)};
    result.bands.push_back(band);
    points.push_back({static_cast<double>(band.n), band.median});
  }
  result.fit = harness::fit_loglog(points);
  return result;
}

std::string median_csv(const MetricResult& result) {
  std::ostringstream out;
  out << "N,median_NDstar,q25,q75\n";
  for (const auto& b : result.bands)
    out << b.n << ',' << format_double(b.median) << ',' << format_double(b.q25) << ',' << format_double(b.q75) << '\n';
  return out.str();
}

std::string profile_csv(const DiscrepancyProfile& profile) {
  std::ostringstream out;
  out << "N,Dstar,NDstar\n";
  for (const auto& c : profile.checkpoints)
    out << c.n << ',' << format_double(c.dstar) << ',' << format_double(c.weighted) << '\n';
  return out.str();
}

}  // namespace addisc::discrepancy
