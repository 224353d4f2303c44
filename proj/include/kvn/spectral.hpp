#pragma once

#include <optional>
#include <vector>

#include "kvn/state.hpp"

namespace kvn {

struct BandMode {
    int n = 1;
    double kappa = 0.0;
    double energy = 0.0;  // (hbar^2/m)(n pi / L) kappa
};

struct QuantumLevel {
    int n = 1;
    double energy = 0.0;  // n^2 pi^2 hbar^2 / (2 m L^2)
};

double dispersion(double k, double kappa, const UnitSystem& units = {});
double band_energy(int n, double kappa, double length, const UnitSystem& units = {});
BandMode make_band_mode_label(int n, double kappa, double length, const UnitSystem& units = {});

// cos(n pi q / L + kappa Q) on a walled grid spanning [0, L], unit norm.
// kappa must lie on the lattice 2 pi / (n_dual dQ) and below the dual Nyquist
// wavenumber so the mode is periodic on the Q grid.
KvnState band_mode(int n, double kappa, const GridSpec& grid);

// Discrete generator -(hbar^2/m) d_q d_Q (spectral, Nyquist mode zeroed) applied
// to a (q, Q) state; returned on the same grid.
KvnState apply_generator(const KvnState& state);

struct GeneratorResidual {
    double residual = 0.0;  // ||L psi - E psi|| / ||psi||
    double rayleigh = 0.0;  // Re <psi, L psi> / <psi, psi>
};

GeneratorResidual generator_residual(const KvnState& state,
                                     std::optional<double> energy_guess = std::nullopt);

std::vector<QuantumLevel> quantum_box_levels(int n_max, double length, const UnitSystem& units = {});

struct SweepRow {
    double kappa = 0.0;
    double energy = 0.0;
};

std::vector<SweepRow> energy_sweep(int n, const std::vector<double>& kappas, double length,
                                   const UnitSystem& units = {});

// Largest |E_{i+1} - E_i| over consecutive rows.
double max_adjacent_gap(const std::vector<SweepRow>& table);

}  // namespace kvn
