#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "addisc/discrepancy.hpp"
#include "addisc/energy.hpp"
#include "addisc/expsum.hpp"
#include "addisc/fit.hpp"
#include "addisc/sequences.hpp"

namespace addisc::harness {

inline constexpr int kSchemaVersion = 1;

// N = 2^8, 2^9, ..., 2^15.
std::vector<std::size_t> default_checkpoints();

// Parses "256,512,2^12". Entries must be positive and strictly increasing.
std::vector<std::size_t> parse_checkpoints(std::string_view text);

struct ExperimentConfig {
  sequences::SequenceSpec spec = sequences::Kronecker{};
  std::uint64_t seed = 1;
  std::size_t alphas = 50;
  std::vector<std::size_t> checkpoints = default_checkpoints();
  // Energy is computed at checkpoints whose max term fits this convolution
  // window, or whose size is at most histogram_cap.
  std::uint64_t energy_window = std::uint64_t{1} << 24;
  std::size_t histogram_cap = std::size_t{1} << 13;
  // Hoelder checks run where the starting panel count leaves three doublings
  // of headroom below panel_cap.
  double holder_tol = 1e-4;
  std::uint64_t panel_cap = std::uint64_t{1} << 22;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::size_t generated_terms = 0;
  std::uint64_t first_index = 1;
  std::uint64_t skipped = 0;
  double growth_gamma = 0.0;
  std::optional<bool> convex;

  energy::EnergyProfile energy;
  std::optional<ExponentFit> kappa_fit;

  discrepancy::MetricResult metric;
  std::optional<double> predicted_tau;

  std::vector<expsum::HolderRow> holder;
  std::vector<std::size_t> holder_skipped;

  std::string started_at;
  std::string finished_at;

  double tau_hat() const { return metric.fit.slope; }
  std::optional<double> kappa_hat() const {
    return kappa_fit ? std::optional<double>(kappa_fit->slope) : std::nullopt;
  }
  bool holder_ok() const;
};

// Deterministic in config; errors propagate and nothing partial is returned.
ExperimentReport run_experiment(const ExperimentConfig& config);

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ExperimentReport& report);
// Rebuilds the config embedded in a report.
ExperimentConfig config_from_report(const nlohmann::json& report);
// Report JSON without its timestamps: the part reruns must reproduce.
nlohmann::json reproducible_part(nlohmann::json report);

// report.json, energy.csv, median.csv, holder.csv
void write_artifacts(const ExperimentReport& report, const std::filesystem::path& dir);

enum class Suite { energy, discrepancy, expsum, rs, all };

Suite suite_from_name(std::string_view name);

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifySummary {
  std::vector<CheckResult> checks;

  bool passed() const;
  void merge(const VerifySummary& other);
  nlohmann::json to_json() const;
};

VerifySummary verify(Suite suite, std::uint64_t seed = 1);

// Identity and bound checks for the Rudin-Shapiro construction.
VerifySummary rs_verify(unsigned max_n, std::uint64_t max_l, std::uint64_t seed = 1);

}  // namespace addisc::harness
