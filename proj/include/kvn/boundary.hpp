#pragma once

#include <functional>
#include <vector>

#include "kvn/billiard.hpp"
#include "kvn/state.hpp"

namespace kvn {

struct Currents {
    RealField j_q;  // (hbar/m) Im(psi* d_Q psi)
    RealField j_Q;  // (hbar/m) Im(psi* d_q psi)
};

// Spectral currents of a (q, Q) state. On walled grids the derivatives are taken
// on the unfolded circle.
Currents currents(const KvnState& state);

using Evolver = std::function<KvnState(const KvnState&, double)>;

struct ContinuityResult {
    double residual = 0.0;       // at dt_probe
    double residual_half = 0.0;  // at dt_probe / 2
    // Residual drops by more than 2x when the probe is halved: the value is
    // limited by the time difference, not by the flow.
    bool dt_limited = false;
};

// max |(rho(t+dt) - rho(t-dt)) / 2dt + d_q J_q + d_Q J_Q| over the grid, divided
// by max(max|d_t rho|, max|div J|, rho_max hbar (2 pi / l_q)(2 pi / l_Q) / m).
// `evolver` advances states in the representation it is given.
ContinuityResult continuity_residual(const KvnState& state, double dt_probe, const Evolver& evolver);

enum class Wall { Left, Right };

struct WallReport {
    Wall wall = Wall::Left;
    double max_parity_asymmetry = 0.0;  // max_Q |psi(q_w,Q) - psi(q_w,-Q)| / max|psi|
    double max_wall_current = 0.0;      // max_Q |J_q(q_w,Q)| / J
    double net_wall_flux = 0.0;         // |int J_q(q_w,Q) dQ| / (J l_Q)
};
// J = max(max|J_q|, (hbar/m) max|psi|^2 2 pi / l_Q); the second term only matters
// for states whose current vanishes identically.

std::vector<WallReport> qparity_check(const KvnState& state, double length);

// int dQ [psi1* d_Q psi2 - (d_Q psi1)* psi2] at q = L minus the same at q = 0.
cplx boundary_form(const KvnState& psi1, const KvnState& psi2, double length);

// (q_w, p) -> (q_w, -p) for every supplied sample.
std::vector<PhasePoint> reflect_specular(const std::vector<PhasePoint>& samples, double q_wall);

}  // namespace kvn
