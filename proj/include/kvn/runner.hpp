#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kvn/boundary.hpp"
#include "kvn/config.hpp"
#include "kvn/kappa.hpp"
#include "kvn/spectral.hpp"

namespace kvn {

inline constexpr const char* kToolVersion = "kvn 1.0.0";

struct ObservableRow {
    double time = 0.0, norm = 0.0, mean_q = 0.0, mean_p = 0.0, mean_h = 0.0;
};

struct OracleRow {
    double time = 0.0, l1 = 0.0, linf = 0.0, budget = 0.0, out_of_range = 0.0;
};

struct WallRow {
    double time = 0.0;
    WallReport report;
};

struct BandRow {
    int n = 1;
    double kappa = 0.0, energy = 0.0;
};

struct RunReport {
    std::string tool_version = kToolVersion;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::vector<std::string> overrides;
    std::vector<ObservableRow> observables;
    std::vector<WallRow> walls;
    std::vector<OracleRow> oracle;
    std::vector<BandRow> bands;
    std::vector<QuantumLevel> quantum;
    std::optional<TwoSlitReport> two_slit;
    std::optional<ContractionResult> contraction;
    double max_wall_current = 0.0;
    double max_parity_asymmetry = 0.0;
    double max_norm_drift = 0.0;
    std::optional<double> gravity_route_mismatch;
    std::vector<std::string> failures;  // physics checks that did not hold
    std::vector<std::string> files;
    double wall_clock_seconds = 0.0;

    bool physics_ok() const { return failures.empty(); }
};

// Runs the scenario and writes report.txt, the CSV files and manifest.txt into
// config.output_dir (created if needed).
RunReport run_scenario(const ScenarioConfig& config);

}  // namespace kvn
