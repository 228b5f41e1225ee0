#include "addisc/sequences.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "addisc/rudinshapiro.hpp"

namespace addisc::sequences {

namespace {

using HighPrecision = boost::multiprecision::cpp_bin_float_100;

constexpr double kMaxU64AsDouble = 18446744073709551616.0;  // 2^64

constexpr std::string_view kFamilyNames[] = {
    "kronecker", "polynomial", "floor_power", "quasi_exponential",
    "rudin_shapiro", "thue_morse", "lacunary", "explicit_list",
};

// Exact floor of a positive real given a long double approximation and a
// high-precision evaluator. The fast path is trusted only below 2^24 and away
// from integers by at least 2^-30.
template <typename Precise>
std::uint64_t exact_floor(long double approx, Precise&& precise) {
  if (approx < 0x1p24L) {
    const long double nearest = std::nearbyint(approx);
    if (std::fabs(approx - nearest) >= 0x1p-30L) return static_cast<std::uint64_t>(std::floor(approx));
  }
  const HighPrecision v = precise();
  if (v >= HighPrecision(kMaxU64AsDouble)) throw BudgetExceeded("sequence term exceeds the 64-bit range");
  const HighPrecision nearest = boost::multiprecision::round(v);
  // Values within 1e-60 of an integer are integers (e.g. 4^1.5 = 8).
  const HighPrecision scale = v > 1 ? v : HighPrecision(1);
  const HighPrecision chosen =
      boost::multiprecision::abs(v - nearest) < HighPrecision("1e-60") * scale ? nearest : boost::multiprecision::floor(v);
  return chosen.convert_to<std::uint64_t>();
}

std::uint64_t quasi_exponential_term(std::uint64_t n, double gamma, double beta) {
  if (n == 1) return 1;
  const long double logn = std::log(static_cast<long double>(n));
  const long double exponent = static_cast<long double>(gamma) * std::pow(logn, static_cast<long double>(beta));
  if (exponent > 44.5L) throw BudgetExceeded("quasi_exponential term exceeds the 64-bit range");
  return exact_floor(std::exp(exponent), [&] {
    const HighPrecision hl = boost::multiprecision::log(HighPrecision(n));
    return boost::multiprecision::exp(HighPrecision(gamma) * boost::multiprecision::pow(hl, HighPrecision(beta)));
  });
}

// Checked Horner evaluation over 128 bits.
std::optional<i128> eval_checked(const std::vector<std::int64_t>& coefficients, i128 x) {
  i128 acc = 0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    if (__builtin_mul_overflow(acc, x, &acc)) return std::nullopt;
    if (__builtin_add_overflow(acc, static_cast<i128>(*it), &acc)) return std::nullopt;
  }
  return acc;
}

double cauchy_bound(const std::vector<long double>& coefficients) {
  const long double lead = coefficients.back();
  long double worst = 0;
  for (std::size_t i = 0; i + 1 < coefficients.size(); ++i) worst = std::max(worst, std::fabs(coefficients[i] / lead));
  return static_cast<double>(1 + worst);
}

// Coefficients of P(x + 1) - P(x).
std::vector<long double> forward_difference(const std::vector<std::int64_t>& p) {
  const std::size_t d = p.size() - 1;
  std::vector<long double> out(d, 0.0L);
  for (std::size_t k = 1; k <= d; ++k) {
    // (x+1)^k - x^k = sum_{j<k} C(k, j) x^j
    long double binom = 1;
    for (std::size_t j = 0; j < k; ++j) {
      out[j] += static_cast<long double>(p[k]) * binom;
      binom = binom * static_cast<long double>(k - j) / static_cast<long double>(j + 1);
    }
  }
  return out;
}

std::uint64_t polynomial_start(const std::vector<std::int64_t>& p) {
  std::vector<long double> lp(p.begin(), p.end());
  const double bound = std::max(cauchy_bound(lp), cauchy_bound(forward_difference(p)));
  constexpr double kScanLimit = 1e7;
  if (!(bound < kScanLimit)) throw InvalidArgument("polynomial coefficients too large to locate the monotone range");
  const auto top = static_cast<std::uint64_t>(std::ceil(bound)) + 1;
  for (std::uint64_t n = top; n >= 1; --n) {
    const auto here = eval_checked(p, static_cast<i128>(n));
    const auto next = eval_checked(p, static_cast<i128>(n + 1));
    if (!here || !next) throw BudgetExceeded("polynomial term exceeds the 128-bit range");
    if (*here < 0 || *next <= *here) return n + 1;
  }
  return 1;
}

void push_checked(std::vector<std::uint64_t>& out, i128 value) {
  if (value < 0 || value > static_cast<i128>(std::numeric_limits<std::uint64_t>::max()))
    throw BudgetExceeded("sequence term exceeds the 64-bit range");
  out.push_back(static_cast<std::uint64_t>(value));
}

template <typename Pred>
std::vector<std::uint64_t> index_set(std::size_t count, Pred keep) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t k = 0; out.size() < count; ++k) {
    if (keep(k)) out.push_back(k);
  }
  return out;
}

std::uint64_t lacunary_next(std::uint64_t a, double ratio) {
  const long double product = static_cast<long double>(ratio) * static_cast<long double>(a);
  if (product >= 0x1p64L) throw BudgetExceeded("lacunary term exceeds the 64-bit range");
  std::uint64_t next = static_cast<std::uint64_t>(std::ceil(product));
  if (static_cast<long double>(next) < product) ++next;
  if (a == std::numeric_limits<std::uint64_t>::max()) throw BudgetExceeded("lacunary term exceeds the 64-bit range");
  return std::max(a + 1, next);
}

template <typename T>
T require_param(const nlohmann::json& params, const char* key) {
  if (!params.contains(key)) throw InvalidArgument(std::string("missing parameter '") + key + "'");
  try {
    return params.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad parameter '") + key + "': " + e.what());
  }
}

}  // namespace

std::string_view family_name(Family family) { return kFamilyNames[static_cast<std::size_t>(family)]; }

Family family_from_name(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kFamilyNames); ++i) {
    if (kFamilyNames[i] == name) return static_cast<Family>(i);
  }
  throw InvalidArgument("unknown sequence family: " + std::string(name));
}

Family family_of(const SequenceSpec& spec) { return static_cast<Family>(spec.index()); }

void validate(const SequenceSpec& spec) {
  struct Visitor {
    void operator()(const Kronecker&) const {}
    void operator()(const RudinShapiro&) const {}
    void operator()(const ThueMorse&) const {}
    void operator()(const Polynomial& p) const {
      if (p.coefficients.size() < 2) throw InvalidArgument("polynomial must have degree >= 1");
      if (p.coefficients.size() > 17) throw InvalidArgument("polynomial degree above 16 is not supported");
      if (p.coefficients.back() <= 0) throw InvalidArgument("polynomial leading coefficient must be positive");
    }
    void operator()(const FloorPower& f) const {
      if (!std::isfinite(f.c) || !(f.c > 1.0)) throw InvalidArgument("floor_power requires c > 1");
    }
    void operator()(const QuasiExponential& q) const {
      if (!std::isfinite(q.gamma) || !(q.gamma > 0.0)) throw InvalidArgument("quasi_exponential requires gamma > 0");
      if (!(q.beta > 1.0 && q.beta <= 2.0)) throw InvalidArgument("quasi_exponential requires 1 < beta <= 2");
    }
    void operator()(const Lacunary& l) const {
      if (!std::isfinite(l.ratio) || !(l.ratio > 1.0)) throw InvalidArgument("lacunary requires ratio > 1");
    }
    void operator()(const ExplicitList& e) const {
      if (e.terms.empty()) throw InvalidArgument("explicit_list needs at least one term");
      for (std::size_t i = 1; i < e.terms.size(); ++i) {
        if (e.terms[i] <= e.terms[i - 1]) throw InvalidArgument("explicit_list terms must be strictly increasing");
      }
    }
  };
  std::visit(Visitor{}, spec);
}

nlohmann::json spec_to_json(const SequenceSpec& spec) {
  nlohmann::json params = nlohmann::json::object();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Polynomial>) params["coefficients"] = s.coefficients;
        if constexpr (std::is_same_v<T, FloorPower>) params["c"] = s.c;
        if constexpr (std::is_same_v<T, QuasiExponential>) {
          params["gamma"] = s.gamma;
          params["beta"] = s.beta;
        }
        if constexpr (std::is_same_v<T, Lacunary>) params["ratio"] = s.ratio;
        if constexpr (std::is_same_v<T, ExplicitList>) params["terms"] = s.terms;
      },
      spec);
  return {{"family", std::string(family_name(family_of(spec)))}, {"params", params}};
}

SequenceSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw InvalidArgument("sequence spec must be an object with a string 'family'");
  const nlohmann::json params = j.contains("params") ? j.at("params") : nlohmann::json::object();
  if (!params.is_object()) throw InvalidArgument("sequence spec 'params' must be an object");
  SequenceSpec spec;
  switch (family_from_name(j.at("family").get<std::string>())) {
    case Family::kronecker: spec = Kronecker{}; break;
    case Family::polynomial: spec = Polynomial{require_param<std::vector<std::int64_t>>(params, "coefficients")}; break;
    case Family::floor_power: spec = FloorPower{require_param<double>(params, "c")}; break;
    case Family::quasi_exponential:
      spec = QuasiExponential{require_param<double>(params, "gamma"), require_param<double>(params, "beta")};
      break;
    case Family::rudin_shapiro: spec = RudinShapiro{}; break;
    case Family::thue_morse: spec = ThueMorse{}; break;
    case Family::lacunary: spec = Lacunary{require_param<double>(params, "ratio")}; break;
    case Family::explicit_list: spec = ExplicitList{require_param<std::vector<std::uint64_t>>(params, "terms")}; break;
  }
  validate(spec);
  return spec;
}

std::span<const std::uint64_t> IntegerSequence::prefix(std::size_t n) const {
  if (n > terms.size())
    throw InvalidArgument("prefix of length " + std::to_string(n) + " exceeds the generated " +
                          std::to_string(terms.size()) + " terms");
  return std::span<const std::uint64_t>(terms).first(n);
}

std::uint64_t floor_power_term(std::uint64_t n, double c) {
  if (n == 0) throw InvalidArgument("floor_power_term needs n >= 1");
  if (c == std::floor(c) && c <= 64.0) {
    u128 acc = 1;
    for (int i = 0; i < static_cast<int>(c); ++i) {
      acc *= n;
      if (acc > std::numeric_limits<std::uint64_t>::max()) throw BudgetExceeded("floor_power term exceeds the 64-bit range");
    }
    return static_cast<std::uint64_t>(acc);
  }
  const long double approx = std::pow(static_cast<long double>(n), static_cast<long double>(c));
  if (approx >= 0x1p64L * 1.0001L) throw BudgetExceeded("floor_power term exceeds the 64-bit range");
  return exact_floor(approx, [&] { return boost::multiprecision::pow(HighPrecision(n), HighPrecision(c)); });
}

IntegerSequence generate(const SequenceSpec& spec, std::size_t count) {
  if (count == 0) throw InvalidArgument("count must be at least 1");
  validate(spec);
  IntegerSequence seq{spec, {}, 1, 0};
  auto& out = seq.terms;
  out.reserve(count);

  struct Visitor {
    IntegerSequence& seq;
    std::size_t count;

    void operator()(const Kronecker&) const {
      for (std::uint64_t n = 1; n <= count; ++n) seq.terms.push_back(n);
    }
    void operator()(const Polynomial& p) const {
      const std::uint64_t n0 = polynomial_start(p.coefficients);
      seq.first_index = n0;
      for (std::uint64_t k = 0; k < count; ++k) {
        const auto value = eval_checked(p.coefficients, static_cast<i128>(n0 + k));
        if (!value) throw BudgetExceeded("polynomial term exceeds the 128-bit range");
        push_checked(seq.terms, *value);
      }
    }
    void operator()(const FloorPower& f) const {
      for (std::uint64_t n = 1; n <= count; ++n) seq.terms.push_back(floor_power_term(n, f.c));
    }
    void operator()(const QuasiExponential& q) const {
      for (std::uint64_t n = 1; seq.terms.size() < count; ++n) {
        const std::uint64_t value = quasi_exponential_term(n, q.gamma, q.beta);
        if (!seq.terms.empty() && value <= seq.terms.back()) {
          ++seq.skipped;
          continue;
        }
        seq.terms.push_back(value);
      }
    }
    void operator()(const RudinShapiro&) const {
      seq.first_index = 0;
      seq.terms = index_set(count, [](std::uint64_t k) { return rudinshapiro::rs_sign(k) == 1; });
    }
    void operator()(const ThueMorse&) const {
      seq.first_index = 0;
      seq.terms = index_set(count, [](std::uint64_t k) { return (std::popcount(k) & 1) == 0; });
    }
    void operator()(const Lacunary& l) const {
      std::uint64_t a = 1;
      seq.terms.push_back(a);
      while (seq.terms.size() < count) {
        a = lacunary_next(a, l.ratio);
        seq.terms.push_back(a);
      }
    }
    void operator()(const ExplicitList& e) const {
      if (count > e.terms.size())
        throw InvalidArgument("explicit_list has only " + std::to_string(e.terms.size()) + " terms");
      seq.terms.assign(e.terms.begin(), e.terms.begin() + static_cast<std::ptrdiff_t>(count));
    }
  };
  std::visit(Visitor{seq, count}, spec);
  return seq;
}

bool is_convex(std::span<const std::uint64_t> terms) {
  if (terms.size() < 3) throw InvalidArgument("is_convex needs at least 3 terms");
  for (std::size_t i = 2; i < terms.size(); ++i) {
    const i128 prev_gap = static_cast<i128>(terms[i - 1]) - static_cast<i128>(terms[i - 2]);
    const i128 gap = static_cast<i128>(terms[i]) - static_cast<i128>(terms[i - 1]);
    if (gap <= prev_gap) return false;
  }
  return true;
}

double growth_gamma(std::span<const std::uint64_t> terms) {
  if (terms.size() < 2) throw InvalidArgument("growth_gamma needs at least 2 terms");
  double best = 0.0;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i] == 0) continue;
    const double logn = std::log(static_cast<double>(i + 1));
    best = std::max(best, std::log(static_cast<double>(terms[i])) / (logn * logn));
  }
  return best;
}

double predicted_tau(const SequenceSpec& spec, std::optional<double> kappa) {
  if (kappa) {
    if (!(*kappa >= 2.0 && *kappa <= 3.0)) throw InvalidArgument("kappa must lie in [2, 3]");
    return (3.0 - *kappa) / 2.0;
  }
  switch (family_of(spec)) {
    case Family::kronecker: return 0.0;
    case Family::polynomial: return std::get<Polynomial>(spec).coefficients.size() >= 3 ? 0.5 : 0.0;
    case Family::floor_power: {
      const double c = std::get<FloorPower>(spec).c;
      if (c < 1.5) return (c - 1.0) / 2.0;
      if (c < 2.0) return 0.25;
      return 7.0 / 26.0;
    }
    case Family::quasi_exponential: return 7.0 / 26.0;
    case Family::rudin_shapiro: return 0.5;
    case Family::thue_morse: return 0.4033;
    case Family::lacunary: return 0.5;
    case Family::explicit_list: break;
  }
  throw InvalidArgument("no predicted exponent for family '" + std::string(family_name(family_of(spec))) +
                        "'; supply kappa");
}

}  // namespace addisc::sequences
