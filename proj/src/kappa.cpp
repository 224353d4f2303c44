#include "kvn/kappa.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kvn/error.hpp"
#include "kvn/evolution.hpp"
#include "kvn/fft.hpp"

namespace kvn {

namespace {

constexpr double kPi = std::numbers::pi;

void require_open(const Axis& q, const char* who) {
    if (q.closed) throw Error(std::string(who) + ": q axis must be periodic");
}

double max_abs(const std::vector<cplx>& a) {
    double m = 0.0;
    for (const cplx& v : a) m = std::max(m, std::abs(v));
    return m;
}

// Largest |k| whose Fourier amplitude exceeds 1e-8 of the peak.
double occupied_wavenumber(const WaveFunction1D& psi) {
    std::vector<cplx> a = psi.amplitudes;
    fft::transform(a, fft::Direction::Forward);
    const auto k = fft::wavenumbers(a.size(), psi.q.spacing());
    const double thr = 1e-8 * max_abs(a);
    double kmax = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m)
        if (std::abs(a[m]) > thr) kmax = std::max(kmax, std::abs(k[m]));
    return kmax;
}

// -(kh)^2/(2m) Psi'' + V Psi, kinetic part spectral.
std::vector<cplx> apply_hamiltonian(const WaveFunction1D& psi, const PotentialSpec& v) {
    const double kh = psi.effective_hbar();
    const double m = psi.units.mass;
    std::vector<cplx> a = psi.amplitudes;
    fft::transform(a, fft::Direction::Forward);
    const auto k = fft::wavenumbers(a.size(), psi.q.spacing());
    const double inv = 1.0 / static_cast<double>(a.size());
    for (std::size_t m2 = 0; m2 < a.size(); ++m2) a[m2] *= kh * kh * k[m2] * k[m2] / (2.0 * m) * inv;
    fft::transform(a, fft::Direction::Backward);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += v.v(psi.q.at(i)) * psi.amplitudes[i];
    return a;
}

WaveFunction1D conjugated(WaveFunction1D psi) {
    for (cplx& v : psi.amplitudes) v = std::conj(v);
    return psi;
}

}  // namespace

void WaveFunction1D::validate() const {
    require_open(q, "wavefunction");
    if (amplitudes.size() != q.n) throw Error("wavefunction: amplitude count does not match the q axis");
    if (!(kappa > 0.0)) throw Error("wavefunction: kappa must be positive");
    units.validate();
    for (const cplx& v : amplitudes)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error("wavefunction: non-finite amplitude");
}

double WaveFunction1D::norm() const {
    double s = 0.0;
    for (const cplx& v : amplitudes) s += std::norm(v);
    return std::sqrt(s * q.spacing());
}

WaveFunction1D gaussian_wavefunction(const Axis& q, double q0, double p0, double sigma_q, double kappa,
                                     double correlation, const UnitSystem& units) {
    WaveFunction1D psi{q, std::vector<cplx>(q.n), kappa, units, 0.0};
    if (!(sigma_q > 0.0)) throw Error("gaussian_wavefunction: sigma_q must be positive");
    const double kh = psi.effective_hbar();
    const double beta = correlation / (2.0 * kh * sigma_q * sigma_q);
    for (std::size_t i = 0; i < q.n; ++i) {
        const double x = q.at(i) - q0;
        psi.amplitudes[i] = std::polar(std::exp(-x * x / (4.0 * sigma_q * sigma_q)), beta * x * x + p0 * x / kh);
    }
    psi.validate();
    const double n = psi.norm();
    if (!(n > 0.0)) throw Error("gaussian_wavefunction: zero norm on grid");
    for (cplx& v : psi.amplitudes) v /= n;
    return psi;
}

WaveFunction1D evolve_schrodinger_kappa(const WaveFunction1D& psi, const PotentialSpec& v, double dt,
                                        std::size_t n_steps) {
    psi.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("evolve_schrodinger_kappa: dt must be positive");
    if (n_steps == 0) return psi;
    const double kh = psi.effective_hbar();
    const double m = psi.units.mass;
    const std::size_t n = psi.q.n;
    const double dq = psi.q.spacing();

    std::vector<double> pot(n);
    double fmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        pot[i] = v.v(psi.q.at(i));
        fmax = std::max(fmax, std::abs(v.v_prime(psi.q.at(i))));
    }
    if (fmax * dq * dt / kh > 0.5 * kPi)
        throw Error("evolve_schrodinger_kappa: potential phase unresolved per step (reduce dt)");
    const auto k = fft::wavenumbers(n, dq);
    const double dk = k[1];
    if (kh * occupied_wavenumber(psi) * dk * dt / m > 0.5 * kPi)
        throw Error("evolve_schrodinger_kappa: kinetic phase unresolved per step (reduce dt)");

    std::vector<cplx> half(n), full(n), kin(n);
    for (std::size_t i = 0; i < n; ++i) {
        half[i] = std::polar(1.0, -pot[i] * 0.5 * dt / kh);
        full[i] = half[i] * half[i];
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) kin[i] = std::polar(inv, -kh * k[i] * k[i] * dt / (2.0 * m));

    WaveFunction1D out = psi;
    auto& a = out.amplitudes;
    for (std::size_t s = 0; s < n_steps; ++s) {
        const auto& kick = s == 0 ? half : full;
        for (std::size_t i = 0; i < n; ++i) a[i] *= kick[i];
        fft::transform(a, fft::Direction::Forward);
        for (std::size_t i = 0; i < n; ++i) a[i] *= kin[i];
        fft::transform(a, fft::Direction::Backward);
    }
    for (std::size_t i = 0; i < n; ++i) a[i] *= half[i];
    for (const cplx& x : a)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw Error("evolve_schrodinger_kappa: non-finite amplitude");
    out.time = psi.time + dt * static_cast<double>(n_steps);
    return out;
}

double WignerField::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * q.spacing() * p.spacing();
}

Axis wigner_momentum_axis(const WaveFunction1D& psi, std::size_t n) {
    const double half = kPi * psi.effective_hbar() / (2.0 * psi.q.spacing());
    return {-half, half, n, false};
}

WignerField wigner_kappa(const WaveFunction1D& psi, const Axis& p) {
    psi.validate();
    if (p.closed || p.n < 1) throw Error("wigner_kappa: p axis must be open");
    const double kh = psi.effective_hbar();
    const double dq = psi.q.spacing();
    const double limit = kPi * kh / (2.0 * dq) * (1.0 + 1e-12);
    if (std::max(std::abs(p.min), std::abs(p.max)) > limit)
        throw Error("wigner_kappa: p axis exceeds the range resolved by the q grid at this kappa");

    // W = c [F_0 + 2 sum_{s>0} Re(F_s e^{i p y_s / kh})], F_s(q_i) = Psi*(q_i + s dq) Psi(q_i - s dq).
    const auto n = static_cast<Eigen::Index>(psi.q.n);
    const auto np = static_cast<Eigen::Index>(p.n);
    Eigen::MatrixXd fr = Eigen::MatrixXd::Zero(n, n), fi = Eigen::MatrixXd::Zero(n, n);
    const auto& a = psi.amplitudes;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index s = 0; s < n; ++s) {
            if (i + s >= n || i - s < 0) break;
            const cplx f = std::conj(a[i + s]) * a[i - s];
            const double w = s == 0 ? 1.0 : 2.0;
            fr(i, s) = w * f.real();
            fi(i, s) = w * f.imag();
        }
    }
    Eigen::MatrixXd cs(n, np), sn(n, np);
    for (Eigen::Index s = 0; s < n; ++s) {
        const double y = 2.0 * static_cast<double>(s) * dq;
        for (Eigen::Index j = 0; j < np; ++j) {
            const double ph = p.at(static_cast<std::size_t>(j)) * y / kh;
            cs(s, j) = std::cos(ph);
            sn(s, j) = std::sin(ph);
        }
    }
    const double c = 2.0 * dq / (2.0 * kPi * kh);
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w = c * (fr * cs - fi * sn);
    return {psi.q, p, std::vector<double>(w.data(), w.data() + w.size()), psi.kappa};
}

double two_point_residual(const WaveFunction1D& psi, const PotentialSpec& v, double dt) {
    psi.validate();
    if (!(dt > 0.0)) throw Error("two_point_residual: dt_probe must be positive");
    if (max_abs(psi.amplitudes) == 0.0) return 0.0;
    const double kh = psi.effective_hbar();
    const auto plus = evolve_schrodinger_kappa(psi, v, dt, 1).amplitudes;
    // Backward step by time reversal: Psi(-dt) = conj(U(dt) conj(Psi)) for real V.
    const auto minus = conjugated(evolve_schrodinger_kappa(conjugated(psi), v, dt, 1)).amplitudes;
    const auto h = apply_hamiltonian(psi, v);
    const auto& a = psi.amplitudes;
    const std::size_t n = a.size();
    const cplx ic(0.0, kh / (2.0 * dt));
    double worst = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t w = 0; w < n; ++w) {
            const cplx lhs = ic * (plus[u] * std::conj(plus[w]) - minus[u] * std::conj(minus[w]));
            const cplx rhs = h[u] * std::conj(a[w]) - a[u] * std::conj(h[w]);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst / (max_abs(h) * max_abs(a));
}

namespace {

struct ContractionRun {
    double l1 = 0.0;
    double two_point = 0.0;
};

ContractionRun contraction_run(const PotentialSpec& v, double kappa, double t, const PhaseSpaceGaussian& f0,
                               const Axis& q, const Axis& p, double dt, double probe_dt, const UnitSystem& u) {
    const auto psi0 = gaussian_wavefunction(q, f0.q0, f0.p0, f0.sigma_q, kappa, f0.correlation, u);
    const auto steps = static_cast<std::size_t>(std::llround(t / dt));
    if (std::abs(static_cast<double>(steps) * dt - t) > 1e-9 * t)
        throw Error("contraction_experiment: t_final must be a multiple of dt");
    const auto psi = evolve_schrodinger_kappa(psi0, v, dt, steps);
    const auto w = wigner_kappa(psi, p);
    const GridSpec grid = GridSpec::periodic(q.min, q.max, q.n, p.min, p.max, p.n, u);
    const RealField f = liouville_pullback(grid, f0, v, t, dt);
    double l1 = 0.0;
    for (std::size_t k = 0; k < f.values.size(); ++k) l1 += std::abs(w.values[k] - f.values[k]);
    l1 *= q.spacing() * p.spacing();
    const double tp = std::max(two_point_residual(psi0, v, probe_dt), two_point_residual(psi, v, probe_dt));
    return {l1, tp};
}

}  // namespace

ContractionResult contraction_experiment(const PotentialSpec& v, const std::vector<double>& kappas, double t,
                                         const PhaseSpaceGaussian& init, const ContractionSetup& setup,
                                         const UnitSystem& u) {
    if (kappas.empty()) throw Error("contraction_experiment: empty kappa list");
    for (std::size_t i = 0; i < kappas.size(); ++i) {
        if (!(kappas[i] > 0.0)) throw Error("contraction_experiment: kappa values must be positive");
        if (i > 0 && !(kappas[i] < kappas[i - 1]))
            throw Error("contraction_experiment: kappa values must be strictly decreasing");
    }
    if (!(t > 0.0)) throw Error("contraction_experiment: t_final must be positive");
    const double hbar = u.hbar;
    const double kappa_ref = 2.0 * init.sigma_q * init.sigma_p / hbar;

    ContractionResult res;
    for (double kappa : kappas) {
        PhaseSpaceGaussian f0 = init;
        if (setup.protocol == ContractionProtocol::CoherentScaling) {
            const double s = std::sqrt(kappa / kappa_ref);
            f0.sigma_q = init.sigma_q * s;
            f0.sigma_p = init.sigma_p * s;
            f0.correlation = 0.0;
        } else {
            const double floor = 0.5 * kappa * hbar;
            const double prod = init.sigma_q * init.sigma_p;
            if (prod < floor) {
                std::ostringstream msg;
                msg << "contraction_experiment: sigma_q sigma_p = " << prod << " is below kappa hbar / 2 = " << floor;
                throw Error(msg.str());
            }
            f0.correlation = std::sqrt(prod * prod - floor * floor);
        }
        const auto base = contraction_run(v, kappa, t, f0, setup.q, setup.p, setup.dt, setup.probe_dt, u);
        ContractionRow row{kappa, f0.sigma_q, f0.sigma_p, base.l1, base.l1, base.two_point};
        if (setup.check_convergence) {
            const Axis fine{setup.q.min, setup.q.max, 2 * setup.q.n, false};
            row.l1_refined = contraction_run(v, kappa, t, f0, fine, setup.p, 0.5 * setup.dt, setup.probe_dt, u).l1;
        }
        res.rows.push_back(row);
    }

    std::ostringstream msg;
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < res.rows.size(); ++i) {
        const double gap = res.rows[i - 1].l1 - res.rows[i].l1;
        if (!(gap > 0.0)) res.monotone = false;
        min_gap = std::min(min_gap, std::abs(gap));
    }
    if (setup.check_convergence && res.rows.size() > 1) {
        for (const auto& r : res.rows)
            if (!(std::abs(r.l1 - r.l1_refined) < 0.1 * min_gap)) res.converged = false;
    }
    if (!res.monotone) msg << "L1 distance is not strictly decreasing in kappa. ";
    if (!res.converged) msg << "L1 distances are not grid-converged at the kappa-to-kappa gap scale. ";
    res.passed = res.monotone && res.converged;
    res.message = msg.str();
    return res;
}

Visibility fringe_visibility(const Axis& q, const std::vector<double>& rho) {
    const std::size_t n = rho.size();
    if (n < 3) return {};
    double peak = 0.0, mass = 0.0, first = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        peak = std::max(peak, rho[i]);
        mass += rho[i];
        first += rho[i] * q.at(i);
    }
    if (!(peak > 0.0)) return {};
    const double mean = first / mass;
    const double floor = 1e-3 * peak;

    // Local maximum nearest the mean.
    std::size_t best = n;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (rho[i] < floor || rho[i] < rho[i - 1] || rho[i] < rho[i + 1]) continue;
        if (best == n || std::abs(q.at(i) - mean) < std::abs(q.at(best) - mean)) best = i;
    }
    if (best == n) return {};

    // Walk downhill to the adjacent local minimum; it counts only if the density
    // rises again to a local maximum above the floor (not a ripple in the tail).
    auto walk = [&](long step) -> double {
        const long last = static_cast<long>(n) - 1;
        long i = static_cast<long>(best);
        while (i + step >= 0 && i + step <= last && rho[i + step] <= rho[i]) i += step;
        if (i + step < 0 || i + step > last) return -1.0;
        const double low = rho[i];
        while (i + step >= 0 && i + step <= last && rho[i + step] >= rho[i]) i += step;
        return rho[i] >= floor ? low : -1.0;
    };
    const double left = walk(-1), right = walk(+1);
    const double lo = std::max(left, right);
    if (lo < 0.0) return {};
    const double hi = rho[best];
    return {(hi - lo) / (hi + lo), true};
}

TwoSlitReport two_slit_compare(double d, double width, double spread, double t_final, const TwoSlitSetup& setup,
                               const UnitSystem& u) {
    if (!(width > 0.0) || !(spread > 0.0) || !(t_final > 0.0))
        throw Error("two_slit_compare: widths and t_final must be positive");
    if (!setup.single_slit && !(d >= 12.0 * width))
        throw Error("two_slit_compare: slits overlap (separation must be at least 12 slit widths)");

    const GridSpec grid = GridSpec::periodic(setup.kvn_q.min, setup.kvn_q.max, setup.kvn_q.n, setup.kvn_p.min,
                                             setup.kvn_p.max, setup.kvn_p.n, u);
    const double q1 = setup.single_slit ? 0.0 : -0.5 * d;
    const KvnState a = make_gaussian_state(grid, Representation::PositionMomentum, {q1, 0.0, width, spread});
    const KvnState b = setup.single_slit
                           ? KvnState::zeros(grid, Representation::PositionMomentum)
                           : make_gaussian_state(grid, Representation::PositionMomentum, {0.5 * d, 0.0, width, spread});
    const KvnState ab(grid, a.rep(), [&] {
        auto s = a.copy_amplitudes();
        for (std::size_t k = 0; k < s.size(); ++k) s[k] += b.amplitudes()[k];
        return s;
    }());
    auto marginal = [&](const KvnState& s) {
        std::vector<double> rho(grid.rows(), 0.0);
        for (std::size_t i = 0; i < grid.rows(); ++i)
            for (std::size_t j = 0; j < grid.cols(); ++j) rho[i] += std::norm(s(i, j)) * grid.d_dual();
        return rho;
    };

    const auto psi1 = gaussian_wavefunction(setup.quantum_q, q1, 0.0, width, 1.0, 0.0, u);
    WaveFunction1D psi = psi1;
    if (!setup.single_slit) {
        const auto psi2 = gaussian_wavefunction(setup.quantum_q, 0.5 * d, 0.0, width, 1.0, 0.0, u);
        for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) psi.amplitudes[i] += psi2.amplitudes[i];
        const double n = psi.norm();
        for (cplx& v : psi.amplitudes) v /= n;
    }

    TwoSlitReport rep;
    for (double frac : {0.25, 0.5, 0.75, 1.0}) {
        const double t = frac * t_final;
        const auto r1 = marginal(evolve_free_spectral(a, t));
        const auto r2 = marginal(evolve_free_spectral(b, t));
        const auto r12 = marginal(evolve_free_spectral(ab, t));
        TwoSlitProbe probe{t, 0.0, 0.0, false};
        for (std::size_t i = 0; i < r1.size(); ++i)
            probe.kvn_cross_term = std::max(probe.kvn_cross_term, std::abs(r12[i] - r1[i] - r2[i]));

        const auto evolved = evolve_schrodinger_kappa(psi, PotentialSpec::zero(), t / setup.quantum_steps,
                                                      setup.quantum_steps);
        std::vector<double> rho(evolved.amplitudes.size());
        for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(evolved.amplitudes[i]);
        const Visibility vis = fringe_visibility(setup.quantum_q, rho);
        probe.quantum_visibility = vis.value;
        probe.quantum_has_fringes = vis.has_fringes;
        rep.kvn_cross_term_max = std::max(rep.kvn_cross_term_max, probe.kvn_cross_term);
        rep.probes.push_back(probe);
    }
    rep.quantum_fringe_visibility = rep.probes.back().quantum_visibility;
    rep.quantum_has_fringes = rep.probes.back().quantum_has_fringes;
    return rep;
}

}  // namespace kvn
