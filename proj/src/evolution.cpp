#include "kvn/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kvn/error.hpp"
#include "kvn/kernels.hpp"
#include "kvn/spectral_ops.hpp"
#include "kvn/transform.hpp"

namespace kvn {

void ImageSumPolicy::validate() const {
    if (n_images < 1) throw Error("image sum: n_images must be >= 1");
    if (!(tail_tol >= 0.0)) throw Error("image sum: tail_tol must be nonnegative");
}

namespace {

double max_abs(std::span<const cplx> a) {
    double m = 0.0;
    for (const cplx& v : a) m = std::max(m, std::abs(v));
    return m;
}

void require_finite_time(double t, const char* who) {
    if (!std::isfinite(t)) throw Error(std::string(who) + ": non-finite time");
}

void require_periodic(const GridSpec& g, const char* who) {
    if (g.walled())
        throw Error(std::string(who) + ": walled grid (use evolve_box for the confined flow)");
}

// Resolution guard: the outermost dual lines on both sides must carry negligible amplitude.
void require_dual_resolved(const KvnState& s, const char* who) {
    const GridSpec& g = s.grid();
    const double thr = 1e-6 * max_abs(s.amplitudes());
    const std::size_t last = g.cols() - 1;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        if (std::max({std::abs(s(i, 0)), std::abs(s(i, 1)), std::abs(s(i, last))}) > thr) {
            std::ostringstream msg;
            msg << who << ": unresolved state, amplitude reaches the dual-axis edge";
            throw Error(msg.str());
        }
    }
}

KvnState momentum_shear(const KvnState& s, double t, double offset, const char* who) {
    const GridSpec& g = s.grid();
    const double m = g.units().mass;
    auto shift = [&](std::size_t j) { return g.dual().at(j) * t / m + offset; };
    if (ops::shift_wraps(g, s.amplitudes(), shift))
        throw Error(std::string(who) + ": transported support wraps around the q axis");
    return KvnState(g, s.rep(), ops::shift_q(g, s.amplitudes(), shift), s.time() + t);
}

KvnState dual_free_phase(const KvnState& s, double t) {
    const GridSpec& g = s.grid();
    const double c = g.units().hbar * t / g.units().mass;
    auto a = ops::double_multiplier(
        g, s.amplitudes(), [c](double k, double kap) { return std::polar(1.0, -c * k * kap); },
        ops::Nyquist::Keep);
    return KvnState(g, s.rep(), std::move(a), s.time() + t);
}

}  // namespace

void require_wall_parity(const KvnState& s, double tol, const char* who) {
    const GridSpec& g = s.grid();
    if (!g.walled()) throw Error(std::string(who) + ": grid is not wall-aligned");
    const double scale = max_abs(s.amplitudes());
    const std::size_t n = g.cols();
    for (std::size_t i : {std::size_t{0}, g.rows() - 1}) {
        for (std::size_t j = 1; j < n; ++j) {
            if (std::abs(s(i, j) - s(i, ops::reversed(j, n))) > tol * scale) {
                std::ostringstream msg;
                msg << who << ": state violates the wall parity condition at q = " << g.q().at(i);
                throw Error(msg.str());
            }
        }
    }
}

KvnState evolve_free_spectral(const KvnState& s, double t) {
    require_finite_time(t, "evolve_free_spectral");
    require_periodic(s.grid(), "evolve_free_spectral");
    if (t == 0.0) return s;
    if (s.rep() == Representation::PositionMomentum)
        return momentum_shear(s, t, 0.0, "evolve_free_spectral");
    const KvnState in_p = to_momentum(s);
    const GridSpec& g = in_p.grid();
    const double m = g.units().mass;
    if (ops::shift_wraps(g, in_p.amplitudes(), [&](std::size_t j) { return g.dual().at(j) * t / m; }))
        throw Error("evolve_free_spectral: transported support wraps around the q axis");
    return dual_free_phase(s, t);
}

KvnState evolve_box(const KvnState& s, double t, double length, BoxBackend backend,
                    const ImageSumPolicy& policy) {
    require_finite_time(t, "evolve_box");
    const GridSpec& g = s.grid();
    if (s.rep() != Representation::PositionMomentum)
        throw Error("evolve_box: state must be in the position-momentum representation");
    if (!g.walled() || std::abs(g.q().min) > 1e-12 * length ||
        std::abs(g.q().max - length) > 1e-12 * length)
        throw Error("evolve_box: q grid must be wall-aligned and span exactly [0, L]");
    if (!g.dual_symmetric()) throw Error("evolve_box: momentum grid must be symmetric");
    require_dual_resolved(s, "evolve_box");
    require_wall_parity(s, 1e-8, "evolve_box");
    if (t == 0.0) return s;
    if (backend == BoxBackend::Characteristics) {
        const double m = g.units().mass;
        auto a = ops::shift_q(g, s.amplitudes(), [&](std::size_t j) { return g.dual().at(j) * t / m; });
        return KvnState(g, s.rep(), std::move(a), s.time() + t);
    }
    const auto prop = propagate_box_kernel(to_dual(s), t, policy);
    return to_momentum(prop.state);
}

KvnState evolve_gravity(const KvnState& s, double t, double grav) {
    require_finite_time(t, "evolve_gravity");
    require_periodic(s.grid(), "evolve_gravity");
    if (!std::isfinite(grav)) throw Error("evolve_gravity: non-finite g");
    if (t == 0.0) return s;
    const double m = s.grid().units().mass;
    const double hbar = s.grid().units().hbar;
    const double fall = 0.5 * grav * t * t;
    if (s.rep() == Representation::PositionMomentum) {
        // Psi(q, p, t) = Psi0(q - p t / m - g t^2 / 2, p + m g t)
        const GridSpec& g = s.grid();
        const double kick = -m * grav * t;
        if (ops::dual_shift_wraps(g, s.amplitudes(), kick))
            throw Error("evolve_gravity: momentum shift leaves the dual grid");
        KvnState kicked(g, s.rep(), ops::shift_dual(g, s.amplitudes(), kick), s.time());
        return momentum_shear(kicked, t, fall, "evolve_gravity");
    }
    // psi(q, Q, t) = exp(-i m g Q t / hbar) psi_free(q + g t^2 / 2, Q, t)
    const KvnState in_p = to_momentum(s);
    const GridSpec& gp = in_p.grid();
    const double kick = -m * grav * t;
    if (ops::dual_shift_wraps(gp, in_p.amplitudes(), kick))
        throw Error("evolve_gravity: momentum shift leaves the dual grid");
    if (ops::shift_wraps(gp, in_p.amplitudes(),
                         [&](std::size_t j) { return (gp.dual().at(j) + kick) * t / m + fall; }))
        throw Error("evolve_gravity: transported support wraps around the q axis");
    const KvnState free = dual_free_phase(s, t);
    const GridSpec& g = s.grid();
    auto a = ops::shift_q(g, free.amplitudes(), [fall](std::size_t) { return -fall; });
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            a[g.index(i, j)] *= std::polar(1.0, -m * grav * g.dual().at(j) * t / hbar);
    return KvnState(g, s.rep(), std::move(a), s.time() + t);
}

KvnState evolve_splitstep(const KvnState& s, const PotentialSpec& potential, double dt,
                          std::size_t n_steps) {
    if (s.rep() != Representation::PositionDual)
        throw Error("evolve_splitstep: state must be in the position-dual representation");
    require_periodic(s.grid(), "evolve_splitstep");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("evolve_splitstep: dt must be positive");
    if (!potential.v_prime) throw Error("evolve_splitstep: potential has no derivative");
    const GridSpec& g = s.grid();
    const double hbar = g.units().hbar;
    const double c = hbar * dt / g.units().mass;

    std::vector<double> force(g.rows());
    double fmax = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        force[i] = potential.v_prime(g.q().at(i));
        if (!std::isfinite(force[i])) throw Error("evolve_splitstep: non-finite V'");
        fmax = std::max(fmax, std::abs(force[i]));
    }
    if (fmax * g.d_dual() * dt / hbar > 0.5 * std::numbers::pi)
        throw Error("evolve_splitstep: V'(q) Q phase unresolved per step (reduce dt)");

    // exp(-i V'(q) Q tau / hbar) for tau = dt / 2 and dt.
    auto kick_table = [&](double tau) {
        std::vector<cplx> k(g.size());
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j)
                k[g.index(i, j)] = std::polar(1.0, -force[i] * g.dual().at(j) * tau / hbar);
        return k;
    };
    const auto half = kick_table(0.5 * dt);
    const auto full = kick_table(dt);
    auto kinetic = [c](double k, double kap) { return std::polar(1.0, -c * k * kap); };

    std::vector<cplx> a = s.copy_amplitudes();
    if (n_steps == 0) return s;
    for (std::size_t n = 0; n < n_steps; ++n) {
        const auto& kick = n == 0 ? half : full;
        for (std::size_t k = 0; k < a.size(); ++k) a[k] *= kick[k];
        a = ops::double_multiplier(g, a, kinetic, ops::Nyquist::Keep);
        for (const cplx& v : a)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw Error("evolve_splitstep: non-finite amplitude");
    }
    for (std::size_t k = 0; k < a.size(); ++k) a[k] *= half[k];
    return KvnState(g, s.rep(), std::move(a), s.time() + dt * static_cast<double>(n_steps));
}

}  // namespace kvn
