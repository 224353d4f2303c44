#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kvn/error.hpp"

namespace kvn {

enum class ScenarioName { Free, Box, Gravity, TwoSlit, KappaDial, Spectrum };

const char* to_string(ScenarioName s);

// Effective run description. Every key has a documented default per scenario;
// `entries` holds the resolved key = value text in a fixed order for the echo.
struct ScenarioConfig {
    ScenarioName scenario = ScenarioName::Free;

    double hbar = 1.0;
    double mass = 1.0;
    std::uint64_t seed = 1;
    std::size_t n_samples = 1000000;
    std::string output_dir = "kvn_output";

    // grid
    double q_min = 0.0, q_max = 1.0;
    std::size_t n_q = 256;
    double dual_min = -2.0, dual_max = 2.0;
    std::size_t n_dual = 256;

    // initial Gaussian (density standard deviations)
    double q0 = 0.5, p0 = 1.0, sigma_q = 0.1, sigma_p = 0.1;

    std::vector<double> times;

    // physics
    double length = 1.0;
    double g = 1.0;
    std::string backend = "characteristics";
    int n_images = 8;
    double tail_tol = 1e-8;
    std::string potential = "quartic";
    std::vector<double> kappas;
    std::string protocol = "coherent";
    double dt = 1e-3;
    double t_final = 1.0;
    double slit_separation = 1.0, slit_width = 0.05, momentum_spread = 0.3;
    int n_max = 3;
    double kappa_min = 0.0, kappa_max = 1.0;
    std::size_t n_kappa = 11;

    // Overrides applied from the command line, echoed in the report.
    std::vector<std::string> overrides;

    // Resolved key = value lines in canonical order.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

// Flat key = value text with '#' comments and a single [scenario-name] section
// header. Unknown keys, malformed numbers and missing headers raise ConfigError
// naming the line.
ScenarioConfig parse_config(const std::string& text);

// Keys accepted for a scenario (global keys included).
std::vector<std::string> allowed_keys(ScenarioName s);

}  // namespace kvn
