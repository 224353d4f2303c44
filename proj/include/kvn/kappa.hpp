#pragma once

#include <string>
#include <vector>

#include "kvn/grid.hpp"
#include "kvn/oracle.hpp"
#include "kvn/potential.hpp"

namespace kvn {

// Schroedinger wavefunction on a periodic q axis at effective Planck constant
// kappa * hbar.
struct WaveFunction1D {
    Axis q;
    std::vector<cplx> amplitudes;
    double kappa = 1.0;
    UnitSystem units;
    double time = 0.0;

    double effective_hbar() const { return kappa * units.hbar; }
    void validate() const;
    double norm() const;
};

// Gaussian with density standard deviation sigma_q, mean momentum p0 and
// position-momentum covariance `correlation` (0 gives minimum uncertainty).
WaveFunction1D gaussian_wavefunction(const Axis& q, double q0, double p0, double sigma_q, double kappa,
                                     double correlation = 0.0, const UnitSystem& units = {});

// Strang split-step for i kh d_t Psi = [-(kh)^2/(2m) d_q^2 + V] Psi, kh = kappa hbar.
WaveFunction1D evolve_schrodinger_kappa(const WaveFunction1D& psi, const PotentialSpec& potential, double dt,
                                        std::size_t n_steps);

struct WignerField {
    Axis q;
    Axis p;
    std::vector<double> values;  // q-major
    double kappa = 1.0;

    double operator()(std::size_t i, std::size_t j) const { return values[i * p.n + j]; }
    double integral() const;
};

// p axis conjugate to the y sum (spacing 2 dq): [-pi kh / (2 dq), pi kh / (2 dq)) with n points.
Axis wigner_momentum_axis(const WaveFunction1D& psi, std::size_t n);

// W(q, p) = (2 pi kh)^{-1} sum_y 2dq Psi*(q + y/2) Psi(q - y/2) e^{i p y / kh},
// y = 2 s dq, amplitudes outside the grid taken as zero. Integrates to |Psi|^2.
// Requires max|p| <= pi kh / (2 dq).
WignerField wigner_kappa(const WaveFunction1D& psi, const Axis& p_axis);

// Max |i kh d_t rho - (H_u - H_v) rho| over (u, v) for rho(u, v) = Psi(u) Psi*(v),
// d_t by central difference over +-dt_probe, divided by max |H_u rho|.
double two_point_residual(const WaveFunction1D& psi, const PotentialSpec& potential, double dt_probe);

enum class ContractionProtocol { CoherentScaling, FixedMoments };

struct ContractionSetup {
    Axis q{-6.0, 6.0, 768, false};
    Axis p{-4.0, 4.0, 256, false};
    double dt = 1e-3;
    ContractionProtocol protocol = ContractionProtocol::CoherentScaling;
    bool check_convergence = true;  // rerun at doubled q resolution and halved dt
    double probe_dt = 1e-4;         // two_point_residual probe
};

struct ContractionRow {
    double kappa = 0.0;
    double sigma_q = 0.0;
    double sigma_p = 0.0;
    double l1 = 0.0;
    double l1_refined = 0.0;  // equals l1 when convergence is not checked
    double two_point = 0.0;
};

struct ContractionResult {
    std::vector<ContractionRow> rows;
    bool converged = true;  // every |l1 - l1_refined| < 0.1 * smallest adjacent L1 gap
    bool monotone = true;   // strictly decreasing along the (decreasing) kappa list
    bool passed = true;
    std::string message;
};

// For each kappa: Wigner function of the kappa-evolved Gaussian at t_final versus
// the Liouville pullback of the matching phase-space Gaussian, L1 over the (q, p)
// grid. CoherentScaling scales both widths by sqrt(kappa / kappa_ref) with
// kappa_ref = 2 sigma_q sigma_p / hbar (minimum uncertainty at every kappa);
// FixedMoments keeps the widths and adds the q-p correlation that makes the pure
// state match them.
ContractionResult contraction_experiment(const PotentialSpec& potential, const std::vector<double>& kappas,
                                         double t_final, const PhaseSpaceGaussian& initial,
                                         const ContractionSetup& setup = {}, const UnitSystem& units = {});

struct TwoSlitSetup {
    Axis kvn_q{-8.0, 8.0, 2048, false};
    Axis kvn_p{-3.0, 3.0, 128, false};
    Axis quantum_q{-64.0, 64.0, 4096, false};
    std::size_t quantum_steps = 8;
    bool single_slit = false;  // control: one branch only
};

struct TwoSlitProbe {
    double time = 0.0;
    double kvn_cross_term = 0.0;
    double quantum_visibility = 0.0;
    bool quantum_has_fringes = false;
};

struct TwoSlitReport {
    double kvn_cross_term_max = 0.0;
    double quantum_fringe_visibility = 0.0;  // at t_final
    bool quantum_has_fringes = false;
    std::vector<TwoSlitProbe> probes;        // t_final x {1/4, 1/2, 3/4, 1}
};

// Local maximum nearest the density's mean and the shallower of its adjacent
// local minima: (max - min) / (max + min). Maxima below 1e-3 of the peak are
// ignored (tail ripples); no local minimum gives 0 and has_fringes = false.
struct Visibility {
    double value = 0.0;
    bool has_fringes = false;
};
Visibility fringe_visibility(const Axis& q, const std::vector<double>& density);

TwoSlitReport two_slit_compare(double slit_separation, double slit_width, double momentum_spread,
                               double t_final, const TwoSlitSetup& setup = {}, const UnitSystem& units = {});

}  // namespace kvn
