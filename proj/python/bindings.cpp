#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "addisc/discrepancy.hpp"
#include "addisc/energy.hpp"
#include "addisc/expsum.hpp"
#include "addisc/harness.hpp"
#include "addisc/rudinshapiro.hpp"
#include "addisc/sequences.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace addisc;

namespace {

// 128-bit values cross the boundary as Python ints via their decimal text.
py::int_ to_py(u128 v) { return py::int_(py::str(to_string(v))); }

u128 from_py(const py::int_& v) {
  const std::string text = py::str(v);
  if (!text.empty() && text[0] == '-') throw InvalidArgument("expected a nonnegative integer");
  return parse_u128(text);
}

py::object json_to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json py_to_json(const py::object& o) {
  return nlohmann::json::parse(py::str(py::module_::import("json").attr("dumps")(o)).cast<std::string>());
}

sequences::SequenceSpec spec_arg(const py::object& spec) { return sequences::spec_from_json(py_to_json(spec)); }

discrepancy::AlphaValue alpha_arg(const py::object& alpha) {
  if (py::isinstance<py::int_>(alpha)) return discrepancy::AlphaValue(from_py(alpha));
  if (py::isinstance<py::str>(alpha)) {
    if (alpha.cast<std::string>() == "golden") return discrepancy::AlphaValue::golden();
    throw InvalidArgument("alpha strings other than 'golden' are not accepted");
  }
  return discrepancy::AlphaValue::from_double(alpha.cast<double>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Additive energy, metric discrepancy and exponential sums of integer sequences";
  m.attr("__version__") = kVersion;

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<InvalidArgument> invalid(m, "InvalidArgument", PyExc_ValueError);
  static py::exception<BudgetExceeded> budget(m, "BudgetExceeded", error.ptr());
  static py::exception<NumericalFailure> numerical(m, "NumericalFailure", error.ptr());
  static py::exception<VerificationFailure> verification(m, "VerificationFailure", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidArgument& e) {
      py::set_error(invalid, e.what());
    } catch (const BudgetExceeded& e) {
      py::set_error(budget, e.what());
    } catch (const NumericalFailure& e) {
      py::set_error(numerical, e.what());
    } catch (const VerificationFailure& e) {
      py::set_error(verification, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  // sequences
  m.def(
      "generate",
      [](const py::object& spec, std::size_t count) {
        const auto seq = sequences::generate(spec_arg(spec), count);
        return py::dict("terms"_a = seq.terms, "first_index"_a = seq.first_index, "skipped"_a = seq.skipped);
      },
      "spec"_a, "count"_a, "First `count` terms of the sequence described by a spec dict.");
  m.def(
      "normalize_spec", [](const py::object& spec) { return json_to_py(sequences::spec_to_json(spec_arg(spec))); },
      "spec"_a);
  m.def(
      "predicted_tau",
      [](const py::object& spec, std::optional<double> kappa) { return sequences::predicted_tau(spec_arg(spec), kappa); },
      "spec"_a, "kappa"_a = py::none());
  m.def("is_convex", [](std::vector<std::uint64_t> terms) { return sequences::is_convex(terms); }, "terms"_a);

  // energy
  m.def("energy_bruteforce", [](std::vector<std::uint64_t> t) { return to_py(energy::energy_bruteforce(t).value); },
        "terms"_a);
  m.def(
      "energy_histogram",
      [](std::vector<std::uint64_t> t) { return to_py(energy::energy_histogram(energy::difference_histogram(t)).value); },
      "terms"_a);
  m.def(
      "energy_convolution",
      [](std::vector<std::uint64_t> t, std::uint64_t window) { return to_py(energy::energy_convolution(t, window).value); },
      "terms"_a, "window_limit"_a = energy::kDefaultWindowLimit);
  m.def(
      "difference_histogram",
      [](std::vector<std::uint64_t> t) {
        py::dict out;
        for (const auto& [d, r] : energy::difference_histogram(t).counts) out[py::int_(d)] = r;
        return out;
      },
      "terms"_a, "r(d) for d >= 0.");
  m.def(
      "representation_count",
      [](std::vector<std::int64_t> coefficients, std::uint64_t range_n, std::int64_t a, const std::string& method) {
        const auto how = method == "divisor"      ? energy::CountMethod::divisor
                         : method == "bruteforce" ? energy::CountMethod::bruteforce
                                                  : throw InvalidArgument("method must be 'divisor' or 'bruteforce'");
        return energy::representation_count({coefficients}, range_n, a, how);
      },
      "coefficients"_a, "range_n"_a, "a"_a, "method"_a = "divisor");

  // discrepancy
  m.def("golden_numerator", [] { return to_py(discrepancy::AlphaValue::golden().numerator()); });
  m.def(
      "fractional_parts",
      [](std::vector<std::uint64_t> t, const py::object& alpha) { return discrepancy::fractional_parts(t, alpha_arg(alpha)); },
      "terms"_a, "alpha"_a, "alpha: float in [0, 1), 128-bit numerator int, or 'golden'.");
  m.def("star_discrepancy", [](std::vector<double> p) { return discrepancy::star_discrepancy(p); }, "points"_a);
  m.def("draw_alphas", [](std::uint64_t seed, std::size_t count) {
    py::list out;
    for (const auto& a : discrepancy::draw_alphas(seed, count)) out.append(to_py(a.numerator()));
    return out;
  }, "seed"_a, "count"_a);
  m.def(
      "metric_experiment",
      [](const py::object& spec, std::size_t alphas, std::uint64_t seed, std::vector<std::size_t> checkpoints) {
        const auto seq = sequences::generate(spec_arg(spec), checkpoints.empty() ? 1 : checkpoints.back());
        const auto r = discrepancy::metric_experiment(seq, alphas, seed, checkpoints);
        py::list bands;
        for (const auto& b : r.bands)
          bands.append(py::dict("N"_a = b.n, "median_NDstar"_a = b.median, "q25"_a = b.q25, "q75"_a = b.q75));
        return py::dict("bands"_a = bands, "tau_hat"_a = r.fit.slope, "r_squared"_a = r.fit.r_squared,
                        "redraws"_a = r.redraws);
      },
      "spec"_a, "alphas"_a, "seed"_a, "checkpoints"_a);

  // expsum
  m.def(
      "exp_sum", [](std::vector<std::uint64_t> t, const py::object& alpha) { return expsum::exp_sum(t, alpha_arg(alpha)); },
      "terms"_a, "alpha"_a);
  m.def(
      "l1_norm",
      [](std::vector<std::uint64_t> t, double rel_tol, std::uint64_t cap) {
        const auto e = expsum::l1_norm(t, rel_tol, cap);
        return py::dict("I"_a = e.l1, "fourth_moment"_a = e.fourth_moment, "panels"_a = e.panels,
                        "rel_error_bound"_a = e.rel_error_bound);
      },
      "terms"_a, "rel_tol"_a = 1e-6, "panel_cap"_a = expsum::kDefaultPanelCap);
  m.def("holder_lower_bound", [](const py::int_& e, std::size_t n) { return expsum::holder_lower_bound(from_py(e), n); },
        "energy"_a, "n"_a);

  // rudinshapiro
  m.def("rs_sign", [](std::uint64_t k) { return rudinshapiro::rs_sign(k); }, "k"_a);
  m.def("rs_partial_sum", &rudinshapiro::rs_partial_sum, "l"_a);
  m.def("rs_polynomial_eval",
        [](unsigned n, const py::object& alpha) { return rudinshapiro::rs_polynomial_eval(n, alpha_arg(alpha)); }, "n"_a,
        "alpha"_a);
  m.def("block_sum_identity_residual",
        [](unsigned n, const py::object& alpha) { return rudinshapiro::block_sum_identity_residual(n, alpha_arg(alpha)); },
        "n"_a, "alpha"_a);

  // harness
  m.def(
      "run_experiment",
      [](const py::object& config) {
        const auto cfg = harness::config_from_json(py_to_json(config));
        harness::ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = harness::run_experiment(cfg);
        }
        return json_to_py(harness::report_to_json(report));
      },
      "config"_a, "Config dict as embedded in report['config']; returns the report dict.");
  m.def("default_config", [] { return json_to_py(harness::config_to_json(harness::ExperimentConfig{})); });
  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed) {
        harness::VerifySummary s;
        {
          const auto which = harness::suite_from_name(suite);
          py::gil_scoped_release release;
          s = harness::verify(which, seed);
        }
        return json_to_py(s.to_json());
      },
      "suite"_a = "all", "seed"_a = 1);
  m.def(
      "rs_verify",
      [](unsigned max_n, std::uint64_t max_l, std::uint64_t seed) {
        harness::VerifySummary s;
        {
          py::gil_scoped_release release;
          s = harness::rs_verify(max_n, max_l, seed);
        }
        return json_to_py(s.to_json());
      },
      "max_n"_a = 12, "max_l"_a = 1000000, "seed"_a = 1);
}
