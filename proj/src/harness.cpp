#include "addisc/harness.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

namespace addisc::harness {

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json fit_to_json(const ExponentFit& fit) {
  return {{"slope", fit.slope},   {"intercept", fit.intercept}, {"r_squared", fit.r_squared},
          {"n_min", fit.n_min},   {"n_max", fit.n_max},         {"points", fit.points}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::uint64_t starting_panels(std::uint64_t max_term) {
  return std::bit_ceil(std::max<std::uint64_t>(expsum::kMinPanels, 8 * max_term));
}

}  // namespace

std::vector<std::size_t> default_checkpoints() {
  std::vector<std::size_t> out;
  for (int k = 8; k <= 15; ++k) out.push_back(std::size_t{1} << k);
  return out;
}

std::vector<std::size_t> parse_checkpoints(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string token(text.substr(pos, comma - pos));
    token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char c) { return std::isspace(c); }),
                token.end());
    if (token.empty()) throw InvalidArgument("empty checkpoint entry");
    std::size_t value;
    if (const auto caret = token.find('^'); caret != std::string::npos) {
      if (token.substr(0, caret) != "2") throw InvalidArgument("only powers of 2 are accepted: " + token);
      const auto exponent = static_cast<unsigned>(parse_u128(token.substr(caret + 1)));
      if (exponent > 40) throw InvalidArgument("checkpoint exponent too large: " + token);
      value = std::size_t{1} << exponent;
    } else {
      const u128 parsed = parse_u128(token);
      if (parsed > (u128{1} << 40)) throw InvalidArgument("checkpoint too large: " + token);
      value = static_cast<std::size_t>(parsed);
    }
    if (value == 0 || (!out.empty() && value <= out.back()))
      throw InvalidArgument("checkpoints must be positive and strictly increasing");
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

bool ExperimentReport::holder_ok() const {
  return std::all_of(holder.begin(), holder.end(), [](const expsum::HolderRow& r) { return r.holds(); });
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.checkpoints.size() < 3) throw InvalidArgument("an experiment needs at least 3 checkpoints");
  ExperimentReport report;
  report.config = config;
  report.started_at = utc_now();

  const auto seq = sequences::generate(config.spec, config.checkpoints.back());
  report.generated_terms = seq.size();
  report.first_index = seq.first_index;
  report.skipped = seq.skipped;
  if (seq.size() >= 2) report.growth_gamma = sequences::growth_gamma(seq.terms);
  if (seq.size() >= 3) report.convex = sequences::is_convex(seq.terms);

  std::vector<std::size_t> energy_points;
  for (std::size_t n : config.checkpoints) {
    if (seq.terms[n - 1] <= config.energy_window || n <= config.histogram_cap) energy_points.push_back(n);
  }
  report.energy = energy::energy_profile(seq, energy_points, config.energy_window);
  if (report.energy.checkpoints.size() >= 3) report.kappa_fit = energy::kappa_fit(report.energy);

  report.metric = discrepancy::metric_experiment(seq, config.alphas, config.seed, config.checkpoints);
  try {
    report.predicted_tau = sequences::predicted_tau(config.spec);
  } catch (const InvalidArgument&) {
    report.predicted_tau.reset();
  }

  for (const auto& cp : report.energy.checkpoints) {
    const auto prefix = seq.prefix(cp.n);
    if (starting_panels(prefix.back()) * 8 > config.panel_cap) {
      report.holder_skipped.push_back(cp.n);
      continue;
    }
    const auto est = expsum::l1_norm(prefix, config.holder_tol, config.panel_cap);
    report.holder.push_back(
        {cp.n, est.l1, est.fourth_moment, expsum::holder_lower_bound(cp.energy.value, cp.n), est.panels});
  }

  report.finished_at = utc_now();
  return report;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  return {{"spec", sequences::spec_to_json(config.spec)},
          {"seed", config.seed},
          {"alphas", config.alphas},
          {"checkpoints", config.checkpoints},
          {"energy_window", config.energy_window},
          {"histogram_cap", config.histogram_cap},
          {"holder_tol", config.holder_tol},
          {"panel_cap", config.panel_cap}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig config;
    config.spec = sequences::spec_from_json(j.at("spec"));
    config.seed = j.at("seed").get<std::uint64_t>();
    config.alphas = j.at("alphas").get<std::size_t>();
    config.checkpoints = j.at("checkpoints").get<std::vector<std::size_t>>();
    config.energy_window = j.value("energy_window", config.energy_window);
    config.histogram_cap = j.value("histogram_cap", config.histogram_cap);
    config.holder_tol = j.value("holder_tol", config.holder_tol);
    config.panel_cap = j.value("panel_cap", config.panel_cap);
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed experiment config: ") + e.what());
  }
}

nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json energy_rows = nlohmann::json::array();
  for (const auto& cp : report.energy.checkpoints)
    energy_rows.push_back(
        {{"N", cp.n}, {"E", to_string(cp.energy.value)}, {"backend", energy::backend_name(cp.energy.backend)}});

  nlohmann::json bands = nlohmann::json::array();
  for (const auto& b : report.metric.bands)
    bands.push_back({{"N", b.n}, {"median_NDstar", b.median}, {"q25", b.q25}, {"q75", b.q75}});

  nlohmann::json alphas = nlohmann::json::array();
  for (const auto& a : report.metric.alphas) alphas.push_back(to_hex(a.numerator()));

  nlohmann::json holder = nlohmann::json::array();
  for (const auto& r : report.holder)
    holder.push_back({{"N", r.n},
                      {"I", r.l1},
                      {"fourth_moment", r.fourth_moment},
                      {"holder_bound", r.holder_bound},
                      {"panels", r.panels},
                      {"holds", r.holds()}});

  nlohmann::json out = {
      {"schema_version", kSchemaVersion},
      {"tool", {{"name", "addisc"}, {"version", kVersion}}},
      {"config", config_to_json(report.config)},
      {"sequence",
       {{"generated_terms", report.generated_terms},
        {"first_index", report.first_index},
        {"skipped", report.skipped},
        {"growth_gamma", report.growth_gamma},
        {"convex", report.convex ? nlohmann::json(*report.convex) : nlohmann::json()}}},
      {"energy", {{"checkpoints", energy_rows}}},
      {"kappa_fit", report.kappa_fit ? fit_to_json(*report.kappa_fit) : nlohmann::json()},
      {"discrepancy",
       {{"alpha_numerators", alphas}, {"redraws", report.metric.redraws}, {"bands", bands}}},
      {"tau_fit", fit_to_json(report.metric.fit)},
      {"predicted_tau", report.predicted_tau ? nlohmann::json(*report.predicted_tau) : nlohmann::json()},
      {"energy_implied_tau",
       report.kappa_fit ? nlohmann::json((3.0 - report.kappa_fit->slope) / 2.0) : nlohmann::json()},
      {"holder", {{"rows", holder}, {"skipped_N", report.holder_skipped}, {"all_hold", report.holder_ok()}}},
      {"timestamps", {{"started", report.started_at}, {"finished", report.finished_at}}},
  };
  return out;
}

ExperimentConfig config_from_report(const nlohmann::json& report) {
  if (!report.contains("schema_version") || report.at("schema_version").get<int>() != kSchemaVersion)
    throw InvalidArgument("unsupported report schema version");
  return config_from_json(report.at("config"));
}

nlohmann::json reproducible_part(nlohmann::json report) {
  report.erase("timestamps");
  return report;
}

void write_artifacts(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", report_to_json(report).dump(2) + "\n");
  write_text(dir / "energy.csv", energy::profile_csv(report.energy));
  write_text(dir / "median.csv", discrepancy::median_csv(report.metric));
  write_text(dir / "holder.csv", expsum::holder_csv(report.holder));
}

}  // namespace addisc::harness
