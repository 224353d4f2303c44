#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "kvn/potential.hpp"
#include "kvn/state.hpp"

namespace kvn {

struct Sample {
    double q = 0.0;
    double p = 0.0;
    double weight = 0.0;
};

struct ClassicalEnsemble {
    std::vector<Sample> samples;
    double time = 0.0;
    std::uint64_t seed = 0;
};

// Counter-based uniform variate in [0, 1): SplitMix64 finalizer of
// (seed, index, stream). Independent of call order.
double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t stream);

// Equal-weight samples of a density given at the nodes of a (q, p) grid. A node
// owns the cell of half-widths dq/2, dp/2 around it (clipped at walls); cells are
// picked with probability density * cell area and filled uniformly.
ClassicalEnsemble sample_ensemble(const RealField& density, std::size_t n_samples, std::uint64_t seed);

namespace scenario {
struct Free {};
struct Box {
    double length = 1.0;
};
struct Gravity {
    double g = 1.0;  // V = m g q
};
struct Potential {
    PotentialSpec potential;
};
}  // namespace scenario

using ScenarioKind = std::variant<scenario::Free, scenario::Box, scenario::Gravity, scenario::Potential>;

// Free, Box and Gravity are exact maps; Potential uses kick-drift-kick leapfrog with
// step dt (the last step is shortened to land on t).
ClassicalEnsemble integrate_hamilton(const ClassicalEnsemble& ensemble, double t,
                                     const ScenarioKind& scenario, std::optional<double> dt = std::nullopt,
                                     const UnitSystem& units = {});

struct DensityEstimate {
    RealField field;                // probability density at the nodes
    double out_of_range_fraction = 0.0;
    double bandwidth_q = 0.0;       // Gaussian smoothing widths (0 = plain histogram)
    double bandwidth_p = 0.0;
};

// Histogram on the node-centered cells of `grid`, divided by the cell areas so the
// field integrates to the in-range mass. Optional separable Gaussian smoothing.
DensityEstimate density_estimate(const ClassicalEnsemble& ensemble, const GridSpec& grid,
                                 double bandwidth_q = 0.0, double bandwidth_p = 0.0);

struct DensityComparison {
    double l1 = 0.0;
    double linf = 0.0;
    bool linf_absolute = false;  // max|b| was zero, linf is max|a - b|
};

DensityComparison compare_densities(const RealField& a, const RealField& b);

// Expected-L1 budget of a histogram of n samples drawn from the density `reference`:
//   sum_c sd_c + 5 sqrt(sum_c sd_c^2) + sum_c bias_c,
// sd_c = sqrt(p_c (1 - p_c) / n), bias_c = cell-averaging error from second
// differences of the reference, (h^2 / 24)|f''| A_c per axis.
double monte_carlo_budget(const RealField& reference, std::size_t n_samples);

// Phase-space Gaussian density with covariance [[sq^2, c], [c, sp^2]].
struct PhaseSpaceGaussian {
    double q0 = 0.0;
    double p0 = 0.0;
    double sigma_q = 1.0;
    double sigma_p = 1.0;
    double correlation = 0.0;

    double operator()(double q, double p) const;
};

// Liouville density at time t on the grid by the method of characteristics: each
// node is integrated backward with leapfrog (step dt) and the initial density is
// evaluated at the foot point.
RealField liouville_pullback(const GridSpec& grid, const PhaseSpaceGaussian& initial,
                             const PotentialSpec& potential, double t, double dt);

}  // namespace kvn
