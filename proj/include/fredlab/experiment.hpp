#pragma once

// Config-driven runners behind the CLI: schema-validated JSON configs,
// deterministic report assembly (timestamps live in a sidecar file), CSV
// emission, and the sweep gates.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fredlab/models.hpp"
#include "fredlab/symbolic.hpp"

namespace fredlab::experiment {

using ordered_json = nlohmann::ordered_json;

struct SurgeryOptions {
  surgery::CChoice c_choice = surgery::CChoice::FromX;
  int t_grid = 11;
};

// Exactly one of `sites` (refinement sweep; model.sites comes from here) or
// `patterns` (boundary-sign sweep; model mass profiles come from here).
struct SweepSpec {
  std::vector<int> sites;
  std::vector<std::array<std::string, 2>> patterns;

  bool refinement() const { return !sites.empty(); }
};

struct OutputOptions {
  std::string directory = "out";
  bool json = true;
  bool csv = true;
};

struct ExperimentConfig {
  std::string mode;  // "verify" | "experiment" | "sweep"
  std::uint64_t seed = 1;
  models::DomainWallConfig model;
  SurgeryOptions surgery;
  SweepSpec sweep;
  OutputOptions output;
  // Normalized echo of the effective config (defaults materialized); embedded
  // verbatim in reports so a report pins its inputs.
  ordered_json echo;
};

// Strict parse: unknown keys anywhere are rejected (ConfigError), as are
// out-of-range values.  Nothing is computed here beyond validation.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const ordered_json& j);

// CLI overrides; also rewrites the echo so reports stay truthful.
void override_output_dir(ExperimentConfig& cfg, const std::string& dir);
void override_seed(ExperimentConfig& cfg, std::uint64_t seed);
void override_format(ExperimentConfig& cfg, const std::string& format);  // "json"|"csv"

struct RunOutcome {
  int exit_code = 0;                    // 0 ok, 1 contract violation
  std::vector<std::string> violations;  // human-readable gate failures
  ordered_json report;                  // what was written (sans sidecar)
};

// Single pair: defect reports, indices + residual, homotopy trace rows,
// endpoint residual.  Writes report.json / homotopy_trace.csv / report.meta.json
// under output.directory.  Exit 0 iff residual is 0, the endpoint residual is
// <= 1e-12, the index trace is constant and consistent with its endpoints,
// indices match the kernel-count oracle, and the bulk spectrum stays above
// thresholds.bulk_floor.
RunOutcome run_experiment(const ExperimentConfig& cfg);

// Refinement sweep (rows by N, gates: residual 0, monitored defects monotone
// nonincreasing, oracle match, bulk floor) or pattern sweep (rows by boundary
// signs, gates: residual 0, oracle match, bulk floor).  Writes sweep.csv /
// sweep_report.json / sweep.meta.json.
RunOutcome run_sweep(const ExperimentConfig& cfg);

ordered_json certificate_json(const symbolic::Certificate& cert);
ordered_json index_json(const index::IndexResult& r);
ordered_json profile_json(const CompactnessProfile& p, int keep = 8);
ordered_json defects_json(const DefectReport& r);

void write_text_file(const std::string& path, const std::string& body);

}  // namespace fredlab::experiment
