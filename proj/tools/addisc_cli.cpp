// addisc command-line tool.
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "addisc/discrepancy.hpp"
#include "addisc/energy.hpp"
#include "addisc/expsum.hpp"
#include "addisc/harness.hpp"
#include "addisc/rudinshapiro.hpp"
#include "addisc/sequences.hpp"

namespace {

using namespace addisc;
using nlohmann::json;

enum Exit { kOk = 0, kVerification = 1, kUsage = 2, kBudget = 3 };

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  std::string checkpoints;
  std::size_t alphas = 50;
  std::optional<double> tol;

  std::vector<std::size_t> checkpoint_list() const {
    return checkpoints.empty() ? harness::default_checkpoints() : harness::parse_checkpoints(checkpoints);
  }
  bool json() const { return format == "json"; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("malformed " + what + ": " + e.what());
  }
}

// Inline JSON, @file, or a bare family name for parameterless families.
sequences::SequenceSpec parse_spec(const std::string& text) {
  if (text.empty()) throw InvalidArgument("--spec is required");
  if (text[0] == '@') return sequences::spec_from_json(parse_json(read_file(text.substr(1)), "spec file"));
  if (text[0] == '{') return sequences::spec_from_json(parse_json(text, "spec"));
  return sequences::spec_from_json(json{{"family", text}, {"params", json::object()}});
}

// golden | p/q | 0x<128-bit numerator> | decimal in [0, 1)
discrepancy::AlphaValue parse_alpha(const std::string& text) {
  if (text == "golden") return discrepancy::AlphaValue::golden();
  if (text.rfind("0x", 0) == 0) return discrepancy::AlphaValue(parse_u128(text));
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const u128 p = parse_u128(text.substr(0, slash)), q = parse_u128(text.substr(slash + 1));
    if (q == 0 || p >= q || q > UINT64_MAX) throw InvalidArgument("alpha p/q needs 0 <= p < q < 2^64");
    return discrepancy::AlphaValue::from_rational(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(q));
  }
  std::size_t used = 0;
  double x;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse alpha: " + text);
  }
  if (used != text.size() || !(x >= 0.0 && x < 1.0)) throw InvalidArgument("alpha must lie in [0, 1): " + text);
  return discrepancy::AlphaValue::from_double(x);
}

// Writes to --out/<name> when --out is set, stdout otherwise.
void emit(const Globals& g, const std::string& name, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(g.out);
  const auto path = std::filesystem::path(g.out) / name;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path.string());
  file << text;
  std::cerr << "wrote " << path.string() << "\n";
}

int cmd_generate(const Globals& g, const std::string& spec_text, std::size_t count) {
  const auto seq = sequences::generate(parse_spec(spec_text), count);
  std::string text;
  if (g.json()) {
    text = json{{"spec", sequences::spec_to_json(seq.spec)},
                {"first_index", seq.first_index},
                {"skipped", seq.skipped},
                {"terms", seq.terms}}
               .dump() +
           "\n";
  } else {
    std::ostringstream out;
    out << "k,a_k\n";
    for (std::size_t k = 0; k < seq.size(); ++k) out << k + 1 << ',' << seq.terms[k] << '\n';
    text = out.str();
  }
  emit(g, g.json() ? "sequence.json" : "sequence.csv", text);
  return kOk;
}

int cmd_energy(const Globals& g, const std::string& spec_text, const std::string& backend, std::uint64_t window) {
  const auto checkpoints = g.checkpoint_list();
  const auto seq = sequences::generate(parse_spec(spec_text), checkpoints.back());
  energy::EnergyProfile profile;
  if (backend == "auto") {
    profile = energy::energy_profile(seq, checkpoints, window);
  } else {
    const auto b = energy::backend_from_name(backend);
    for (std::size_t n : checkpoints) {
      const auto prefix = seq.prefix(n);
      energy::EnergyResult r;
      switch (b) {
        case energy::Backend::bruteforce: r = energy::energy_bruteforce(prefix); break;
        case energy::Backend::histogram: r = energy::energy_histogram(energy::difference_histogram(prefix)); break;
        case energy::Backend::convolution: r = energy::energy_convolution(prefix, window); break;
      }
      profile.checkpoints.push_back({n, r});
    }
  }
  std::string text;
  if (g.json()) {
    json rows = json::array();
    for (const auto& cp : profile.checkpoints)
      rows.push_back({{"N", cp.n}, {"E", to_string(cp.energy.value)}, {"backend", energy::backend_name(cp.energy.backend)}});
    json doc = {{"spec", sequences::spec_to_json(seq.spec)}, {"checkpoints", rows}};
    if (profile.checkpoints.size() >= 3) {
      const auto fit = energy::kappa_fit(profile);
      doc["kappa_fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
    }
    text = doc.dump(2) + "\n";
  } else {
    text = energy::profile_csv(profile);
  }
  emit(g, g.json() ? "energy.json" : "energy.csv", text);
  return kOk;
}

json bands_json(const discrepancy::MetricResult& m) {
  json bands = json::array();
  for (const auto& b : m.bands) bands.push_back({{"N", b.n}, {"median_NDstar", b.median}, {"q25", b.q25}, {"q75", b.q75}});
  return bands;
}

int cmd_discrepancy(const Globals& g, const std::string& spec_text, const std::string& alpha_text) {
  const auto checkpoints = g.checkpoint_list();
  const auto seq = sequences::generate(parse_spec(spec_text), checkpoints.back());
  if (!alpha_text.empty()) {
    const auto profile = discrepancy::discrepancy_profile(seq, parse_alpha(alpha_text), checkpoints);
    std::string text;
    if (g.json()) {
      json rows = json::array();
      for (const auto& cp : profile.checkpoints) rows.push_back({{"N", cp.n}, {"Dstar", cp.dstar}, {"NDstar", cp.weighted}});
      text = json{{"spec", sequences::spec_to_json(seq.spec)}, {"alpha_numerator", to_hex(profile.alpha.numerator())},
                  {"checkpoints", rows}}
                 .dump(2) +
             "\n";
    } else {
      text = discrepancy::profile_csv(profile);
    }
    emit(g, g.json() ? "discrepancy.json" : "discrepancy.csv", text);
    return kOk;
  }
  const auto m = discrepancy::metric_experiment(seq, g.alphas, g.seed, checkpoints);
  std::string text;
  if (g.json()) {
    text = json{{"spec", sequences::spec_to_json(seq.spec)},
                {"seed", g.seed},
                {"alphas", g.alphas},
                {"redraws", m.redraws},
                {"bands", bands_json(m)},
                {"tau_fit", {{"slope", m.fit.slope}, {"intercept", m.fit.intercept}, {"r_squared", m.fit.r_squared}}}}
               .dump(2) +
           "\n";
  } else {
    text = discrepancy::median_csv(m);
  }
  emit(g, g.json() ? "median.json" : "median.csv", text);
  return kOk;
}

int cmd_expsum(const Globals& g, const std::string& spec_text, std::uint64_t panel_cap) {
  const auto checkpoints = g.checkpoint_list();
  const double tol = g.tol.value_or(1e-4);
  const auto seq = sequences::generate(parse_spec(spec_text), checkpoints.back());
  std::vector<expsum::HolderRow> rows;
  for (std::size_t n : checkpoints) {
    const auto prefix = seq.prefix(n);
    const auto est = expsum::l1_norm(prefix, tol, panel_cap);
    const auto e = prefix.back() <= energy::kDefaultWindowLimit
                       ? energy::energy_convolution(prefix)
                       : energy::energy_histogram(energy::difference_histogram(prefix));
    rows.push_back({n, est.l1, est.fourth_moment, expsum::holder_lower_bound(e.value, n), est.panels});
  }
  std::string text;
  if (g.json()) {
    json out = json::array();
    for (const auto& r : rows)
      out.push_back({{"N", r.n}, {"I", r.l1}, {"fourth_moment", r.fourth_moment}, {"holder_bound", r.holder_bound},
                     {"panels", r.panels}, {"holds", r.holds()}});
    text = json{{"spec", sequences::spec_to_json(seq.spec)}, {"tol", tol}, {"rows", out}}.dump(2) + "\n";
  } else {
    text = expsum::holder_csv(rows);
  }
  emit(g, g.json() ? "holder.json" : "holder.csv", text);
  for (const auto& r : rows)
    if (!r.holds()) return kVerification;
  return kOk;
}

int report_summary(const Globals& g, const harness::VerifySummary& summary, const std::string& name) {
  if (g.json()) {
    emit(g, name + ".json", summary.to_json().dump(2) + "\n");
  } else {
    std::ostringstream out;
    for (const auto& c : summary.checks) {
      out << (c.passed ? "PASS" : "FAIL") << "  [" << c.suite << "] " << c.name;
      if (!c.detail.empty()) out << "  (" << c.detail << ")";
      out << '\n';
    }
    out << (summary.passed() ? "all checks passed" : "verification FAILED") << '\n';
    emit(g, name + ".txt", out.str());
  }
  return summary.passed() ? kOk : kVerification;
}

int cmd_experiment(const Globals& g, const std::string& spec_text, const std::string& from_report) {
  harness::ExperimentConfig config;
  if (!from_report.empty()) {
    config = harness::config_from_report(parse_json(read_file(from_report), "report"));
  } else {
    config.spec = parse_spec(spec_text);
    config.seed = g.seed;
    config.alphas = g.alphas;
    config.checkpoints = g.checkpoint_list();
    if (g.tol) config.holder_tol = *g.tol;
  }
  const auto report = harness::run_experiment(config);
  if (g.out.empty()) {
    std::cout << harness::report_to_json(report).dump(2) << "\n";
  } else {
    harness::write_artifacts(report, g.out);
    std::cerr << "wrote report.json, energy.csv, median.csv, holder.csv to " << g.out << "\n";
  }
  return report.holder_ok() ? kOk : kVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Additive energy, metric discrepancy and exponential sums of integer sequences"};
  app.set_version_flag("--version", std::string(addisc::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "seed for the alpha stream");
  app.add_option("--out", g.out, "output directory (default: stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--checkpoints", g.checkpoints, "comma list, e.g. 256,512,2^12 (default 2^8..2^15)");
  app.add_option("--alphas", g.alphas, "number of random alphas M")->check(CLI::Range(3, 1000000));
  app.add_option("--tol", g.tol, "relative tolerance for L1 quadrature")->check(CLI::PositiveNumber);

  std::string spec, alpha, backend = "auto", suite = "all", from_report;
  std::size_t count = 0;
  std::uint64_t window = addisc::energy::kDefaultWindowLimit;
  std::uint64_t panel_cap = addisc::expsum::kDefaultPanelCap;
  unsigned max_n = 12;
  std::uint64_t max_l = 1000000;

  auto* gen = app.add_subcommand("generate", "print the first terms of a sequence");
  gen->add_option("--spec", spec, "sequence spec: JSON, @file or family name")->required();
  gen->add_option("--count", count, "number of terms")->required()->check(CLI::PositiveNumber);

  auto* en = app.add_subcommand("energy", "additive energy at checkpoints");
  en->add_option("--spec", spec, "sequence spec")->required();
  en->add_option("--backend", backend, "auto, bruteforce, histogram or convolution")
      ->check(CLI::IsMember({"auto", "bruteforce", "histogram", "convolution"}));
  en->add_option("--window", window, "convolution window limit");

  auto* disc = app.add_subcommand("discrepancy", "star discrepancy for one alpha, or metric quantiles");
  disc->add_option("--spec", spec, "sequence spec")->required();
  disc->add_option("--alpha", alpha, "golden, p/q, 0x<numerator> or decimal; omit for the metric experiment");

  auto* es = app.add_subcommand("expsum", "L1 norm of exponential sums and the Hoelder bound");
  es->add_option("--spec", spec, "sequence spec")->required();
  es->add_option("--panel-cap", panel_cap, "maximum quadrature panels");

  auto* rs = app.add_subcommand("rs-verify", "Rudin-Shapiro identities and bounds");
  rs->add_option("--max-n", max_n, "largest block exponent n")->check(CLI::Range(1u, addisc::rudinshapiro::kMaxDirectExponent));
  rs->add_option("--max-l", max_l, "largest partial-sum length l")->check(CLI::Range(std::uint64_t{0}, std::uint64_t{100000000}));

  auto* ex = app.add_subcommand("experiment", "full energy / discrepancy / Hoelder experiment");
  auto* spec_opt = ex->add_option("--spec", spec, "sequence spec");
  auto* rep_opt = ex->add_option("--from-report", from_report, "rerun the config embedded in a report.json");
  spec_opt->excludes(rep_opt);

  auto* ver = app.add_subcommand("verify", "invariant suites");
  ver->add_option("--suite", suite, "energy, discrepancy, expsum, rs or all")
      ->check(CLI::IsMember({"energy", "discrepancy", "expsum", "rs", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_generate(g, spec, count);
    if (*en) return cmd_energy(g, spec, backend, window);
    if (*disc) return cmd_discrepancy(g, spec, alpha);
    if (*es) return cmd_expsum(g, spec, panel_cap);
    if (*rs) return report_summary(g, addisc::harness::rs_verify(max_n, max_l, g.seed), "rs-verify");
    if (*ex) {
      if (spec.empty() && from_report.empty()) throw addisc::InvalidArgument("experiment needs --spec or --from-report");
      return cmd_experiment(g, spec, from_report);
    }
    if (*ver) return report_summary(g, addisc::harness::verify(addisc::harness::suite_from_name(suite), g.seed), "verify");
  } catch (const addisc::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const addisc::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const addisc::VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerification;
  } catch (const std::bad_alloc&) {
    std::cerr << "out of memory\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerification;
  }
  return kUsage;
}
