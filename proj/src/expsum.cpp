#include "addisc/expsum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>

#include "addisc/energy.hpp"

namespace addisc::expsum {

namespace {

constexpr std::size_t kLeaf = 8;
constexpr std::size_t kBlock = 4096;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <typename T>
T tree_sum(std::span<const T> values) {
  if (values.size() <= kLeaf) {
    T acc{};
    for (const T& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return tree_sum(values.first(half)) + tree_sum(values.subspan(half));
}

std::complex<double> unit_phase(u128 fraction) {
  // Top 64 bits carry the phase to 2^-64, well past double resolution.
  const double turns = std::ldexp(static_cast<double>(static_cast<std::uint64_t>(fraction >> 64)), -64);
  const double angle = 2.0 * std::numbers::pi * turns;
  return {std::cos(angle), std::sin(angle)};
}

std::uint64_t max_term(std::span<const std::uint64_t> terms) {
  return terms.empty() ? 0 : *std::max_element(terms.begin(), terms.end());
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

double pairwise_sum(std::span<const double> values) { return tree_sum(values); }

std::complex<double> pairwise_sum(std::span<const std::complex<double>> values) { return tree_sum(values); }

std::complex<double> exp_sum(std::span<const std::uint64_t> terms, discrepancy::AlphaValue alpha) {
  std::vector<std::complex<double>> phases;
  phases.reserve(terms.size());
  for (std::uint64_t a : terms) phases.push_back(unit_phase(discrepancy::fractional_part_fixed(a, alpha)));
  return pairwise_sum(phases);
}

std::complex<double> exp_sum(std::span<const std::uint64_t> terms, double alpha) {
  return exp_sum(terms, discrepancy::AlphaValue::from_double(alpha));
}

namespace {

// Owns the FFTW buffer holding S at the midpoint nodes.
class MidpointGrid {
 public:
  MidpointGrid(std::span<const std::uint64_t> terms, std::uint64_t panels) : panels_(panels) {
    if (!std::has_single_bit(panels)) throw InvalidArgument("panel count must be a power of two");
    if (!terms.empty() && max_term(terms) >= panels) throw InvalidArgument("panel count must exceed every term");
    if (panels > (std::uint64_t{1} << 30)) throw BudgetExceeded("panel count above 2^30");

    // S((2j+1)/(2M)) = sum_a [e^{pi i a / M}] e^{2 pi i a j / M}
    buffer_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * panels)));
    if (!buffer_) throw BudgetExceeded("cannot allocate " + std::to_string(panels) + " panels");
    fftw_complex* raw = buffer_.get();
    std::fill_n(&raw[0][0], 2 * panels, 0.0);
    const double m = static_cast<double>(panels);
    for (std::uint64_t a : terms) {
      const double angle = std::numbers::pi * (static_cast<double>(a) / m);
      raw[a][0] += std::cos(angle);
      raw[a][1] += std::sin(angle);
    }
    fftw_plan plan;
    {
      std::lock_guard lock(planner_mutex());
      plan = fftw_plan_dft_1d(static_cast<int>(panels), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!plan) throw NumericalFailure("FFTW planning failed");
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  // fftw_complex and std::complex<double> share their layout.
  std::span<const std::complex<double>> values() const {
    return {reinterpret_cast<const std::complex<double>*>(buffer_.get()), panels_};
  }

 private:
  struct Free {
    void operator()(fftw_complex* p) const { fftw_free(p); }
  };
  std::uint64_t panels_;
  std::unique_ptr<fftw_complex, Free> buffer_;
};

}  // namespace

std::vector<std::complex<double>> midpoint_values(std::span<const std::uint64_t> terms, std::uint64_t panels) {
  const MidpointGrid grid(terms, panels);
  const auto values = grid.values();
  return {values.begin(), values.end()};
}

ExpSumEstimate l1_norm(std::span<const std::uint64_t> terms, double rel_tol, std::uint64_t panel_cap) {
  if (!(rel_tol >= 1e-8)) throw InvalidArgument("rel_tol must be at least 1e-8");
  if (terms.empty()) throw InvalidArgument("l1_norm needs at least one term");
  const std::uint64_t top = max_term(terms);
  if (top > (std::uint64_t{1} << 40)) throw BudgetExceeded("max term too large for the panel grid");
  std::uint64_t panels = std::bit_ceil(std::max<std::uint64_t>(kMinPanels, 8 * top));

  ExpSumEstimate est;
  est.n_terms = terms.size();
  bool have_previous = false;
  while (true) {
    if (panels > panel_cap)
      throw BudgetExceeded("quadrature did not reach rel_tol " + format_double(rel_tol) + " within " +
                           std::to_string(panel_cap) + " panels");
    const MidpointGrid grid(terms, panels);
    const auto values = grid.values();
    std::vector<double> l1_blocks, l4_blocks;
    std::vector<double> mag(kBlock), mag4(kBlock);
    for (std::size_t start = 0; start < values.size(); start += kBlock) {
      const std::size_t len = std::min(kBlock, values.size() - start);
      for (std::size_t i = 0; i < len; ++i) {
        const double r = std::abs(values[start + i]);
        mag[i] = r;
        mag4[i] = (r * r) * (r * r);
      }
      l1_blocks.push_back(pairwise_sum(std::span<const double>(mag).first(len)));
      l4_blocks.push_back(pairwise_sum(std::span<const double>(mag4).first(len)));
    }
    const double m = static_cast<double>(panels);
    const double l1 = pairwise_sum(l1_blocks) / m;
    const double fourth = pairwise_sum(l4_blocks) / m;
    if (have_previous) {
      const double change = std::fabs(l1 - est.l1) / std::max(l1, 1e-300);
      est.l1 = l1;
      est.fourth_moment = fourth;
      est.panels = panels;
      est.rel_error_bound = change;
      if (change < rel_tol) return est;
    } else {
      est.l1 = l1;
      est.fourth_moment = fourth;
      est.panels = panels;
      have_previous = true;
    }
    panels *= 2;
  }
}

ExpSumEstimate l1_norm(const sequences::IntegerSequence& seq, std::size_t n, double rel_tol,
                       std::uint64_t panel_cap) {
  return l1_norm(seq.prefix(n), rel_tol, panel_cap);
}

double fourth_moment_check(std::span<const std::uint64_t> terms, double rel_tol, std::uint64_t panel_cap) {
  const ExpSumEstimate est = l1_norm(terms, rel_tol, panel_cap);
  std::vector<std::uint64_t> sorted(terms.begin(), terms.end());
  std::sort(sorted.begin(), sorted.end());
  const auto exact = static_cast<double>(sorted.back() <= energy::kDefaultWindowLimit
                                             ? energy::energy_convolution(sorted).value
                                             : energy::energy_histogram(energy::difference_histogram(sorted)).value);
  return std::fabs(est.fourth_moment - exact) / exact;
}

double holder_lower_bound(u128 energy, std::size_t n) {
  const u128 wide = n;
  if (energy < wide * wide) throw InvalidArgument("energy below N^2 is inconsistent with distinct terms");
  const long double cube = static_cast<long double>(n) * n * n;
  return static_cast<double>(std::sqrt(cube / static_cast<long double>(energy)));
}

std::string holder_csv(std::span<const HolderRow> rows) {
  std::ostringstream out;
  out << "N,I,fourth_moment,holder_bound,panels\n";
  for (const auto& r : rows)
    out << r.n << ',' << format_double(r.l1) << ',' << format_double(r.fourth_moment) << ','
        << format_double(r.holder_bound) << ',' << r.panels << '\n';
  return out.str();
}

}  // namespace addisc::expsum
