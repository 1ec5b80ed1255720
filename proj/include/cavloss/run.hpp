#pragma once

#include "cavloss/loss.hpp"
#include "cavloss/scenario.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cavloss {

inline constexpr const char* kToolVersion = "1.0.0";

/// Everything one subcommand produces: the flat JSON summary (also printed to
/// stdout), the CSV body, and the output basenames derived from the scenario
/// hash.
struct RunArtifacts {
    nlohmann::json summary;
    std::string csv;
    std::string csv_filename;
    std::string json_filename;
};

/// Monte Carlo emission study (also carries the downstream loss columns,
/// so the emission and loss subcommands share one CSV schema).
RunArtifacts run_emission(const Scenario& scenario);

/// Full suppression pipeline; same rows, loss-centric summary.
RunArtifacts run_loss(const Scenario& scenario);

/// One-parameter sweep; one aggregate CSV row per value. Valid parameter
/// keys: detuning (MHz), N_A, n_A, reflectivity_r, trap_depth (MHz), n_pairs.
RunArtifacts run_sweep(const Scenario& scenario, const std::string& parameter,
                       const std::vector<double>& values);

/// Mode table diagnostic: per-mode solid angle, clip loss and enhancement.
RunArtifacts run_modes(const Scenario& scenario);

/// Writes the CSV and JSON files into outdir (created if missing).
/// Returns the two full paths.
std::pair<std::string, std::string> write_artifacts(const RunArtifacts& artifacts,
                                                    const std::string& outdir);

} // namespace cavloss
