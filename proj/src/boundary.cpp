#include "kvn/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kvn/error.hpp"
#include "kvn/spectral_ops.hpp"
#include "kvn/transform.hpp"

namespace kvn {

namespace {

void require_dual(const KvnState& s, const char* who) {
    if (s.rep() != Representation::PositionDual)
        throw Error(std::string(who) + ": state must be in the position-dual representation");
}

void require_wall_aligned(const GridSpec& g, double length, const char* who) {
    const double tol = 1e-12 * length;
    if (!g.walled() || std::abs(g.q().min) > tol || std::abs(g.q().max - length) > tol)
        throw Error(std::string(who) + ": grid is not wall-aligned to [0, L]");
}

struct CircleFields {
    GridSpec grid;
    std::vector<cplx> psi, dq, dQ;
};

CircleFields circle_fields(const KvnState& s) {
    const GridSpec cg = ops::circle_grid(s.grid());
    auto psi = ops::unfold(s.grid(), s.amplitudes());
    auto dq = ops::d_q(cg, psi);
    auto dQ = ops::d_dual(cg, psi);
    return {cg, std::move(psi), std::move(dq), std::move(dQ)};
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

Currents currents(const KvnState& s) {
    require_dual(s, "currents");
    const GridSpec& g = s.grid();
    const double c = g.units().hbar / g.units().mass;
    const auto f = circle_fields(s);
    Currents out{{g, std::vector<double>(g.size())}, {g, std::vector<double>(g.size())}};
    for (std::size_t k = 0; k < g.size(); ++k) {
        out.j_q.values[k] = c * (std::conj(f.psi[k]) * f.dQ[k]).imag();
        out.j_Q.values[k] = c * (std::conj(f.psi[k]) * f.dq[k]).imag();
    }
    return out;
}

ContinuityResult continuity_residual(const KvnState& s, double dt, const Evolver& evolver) {
    if (!(dt > 0.0)) throw Error("continuity_residual: dt_probe must be positive");
    const KvnState dual = to_representation(s, Representation::PositionDual);
    const GridSpec& g = dual.grid();
    const double c = g.units().hbar / g.units().mass;

    // Divergence of the currents on the circle, then restricted to the physical rows.
    const auto f = circle_fields(dual);
    const std::size_t n = f.psi.size();
    std::vector<cplx> jq(n), jQ(n);
    for (std::size_t k = 0; k < n; ++k) {
        jq[k] = c * (std::conj(f.psi[k]) * f.dQ[k]).imag();
        jQ[k] = c * (std::conj(f.psi[k]) * f.dq[k]).imag();
    }
    const auto djq = ops::d_q(f.grid, jq);
    const auto djQ = ops::d_dual(f.grid, jQ);
    std::vector<double> div(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) div[k] = djq[k].real() + djQ[k].real();

    double rho_max = 0.0;
    for (const cplx& v : dual.amplitudes()) rho_max = std::max(rho_max, std::norm(v));
    if (rho_max == 0.0) return {};
    const double two_pi = 2.0 * std::numbers::pi;
    const double floor =
        rho_max * g.units().hbar * (two_pi / g.q().extent()) * (two_pi / g.dual().extent()) /
        g.units().mass;

    auto at_probe = [&](double h) {
        const auto plus = to_representation(evolver(s, h), Representation::PositionDual);
        const auto minus = to_representation(evolver(s, -h), Representation::PositionDual);
        std::vector<double> dt_rho(g.size());
        for (std::size_t k = 0; k < g.size(); ++k)
            dt_rho[k] = (std::norm(plus.amplitudes()[k]) - std::norm(minus.amplitudes()[k])) / (2.0 * h);
        double worst = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) worst = std::max(worst, std::abs(dt_rho[k] + div[k]));
        const double scale = std::max({max_abs(dt_rho), max_abs(div), floor});
        return worst / scale;
    };
    ContinuityResult r;
    r.residual = at_probe(dt);
    r.residual_half = at_probe(0.5 * dt);
    r.dt_limited = r.residual > 2.0 * r.residual_half && r.residual > 1e-12;
    return r;
}

std::vector<WallReport> qparity_check(const KvnState& s, double length) {
    require_dual(s, "qparity_check");
    const GridSpec& g = s.grid();
    require_wall_aligned(g, length, "qparity_check");
    double psi_max = 0.0;
    for (const cplx& v : s.amplitudes()) psi_max = std::max(psi_max, std::abs(v));
    const Currents cur = currents(s);
    // Current scale with a floor, so fields whose J_q vanishes identically report 0.
    const double j_floor = g.units().hbar / g.units().mass * psi_max * psi_max * 2.0 * std::numbers::pi /
                           g.dual().extent();
    const double j_max = std::max(max_abs(cur.j_q.values), j_floor);
    const std::size_t n = g.cols();

    std::vector<WallReport> out;
    for (Wall w : {Wall::Left, Wall::Right}) {
        const std::size_t i = w == Wall::Left ? 0 : g.rows() - 1;
        WallReport rep{w, 0.0, 0.0, 0.0};
        double flux = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j > 0) {
                const double asym = std::abs(s(i, j) - s(i, ops::reversed(j, n)));
                rep.max_parity_asymmetry = std::max(rep.max_parity_asymmetry, asym);
            }
            const double jq = cur.j_q(i, j);
            rep.max_wall_current = std::max(rep.max_wall_current, std::abs(jq));
            flux += jq * g.d_dual();
        }
        if (psi_max > 0.0) rep.max_parity_asymmetry /= psi_max;
        if (j_max > 0.0) {
            rep.max_wall_current /= j_max;
            rep.net_wall_flux = std::abs(flux) / (j_max * g.dual().extent());
        }
        out.push_back(rep);
    }
    return out;
}

cplx boundary_form(const KvnState& a, const KvnState& b, double length) {
    require_dual(a, "boundary_form");
    require_dual(b, "boundary_form");
    if (!(a.grid() == b.grid())) throw Error("boundary_form: grid mismatch");
    const GridSpec& g = a.grid();
    require_wall_aligned(g, length, "boundary_form");
    const auto da = ops::d_dual(g, a.amplitudes());
    const auto db = ops::d_dual(g, b.amplitudes());
    auto at_row = [&](std::size_t i) {
        cplx sum = 0.0;
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const std::size_t k = g.index(i, j);
            sum += std::conj(a.amplitudes()[k]) * db[k] - std::conj(da[k]) * b.amplitudes()[k];
        }
        return sum * g.d_dual();
    };
    return at_row(g.rows() - 1) - at_row(0);
}

std::vector<PhasePoint> reflect_specular(const std::vector<PhasePoint>& samples,
                                         [[maybe_unused]] double q_wall) {
    std::vector<PhasePoint> out;
    out.reserve(samples.size());
    for (const PhasePoint& s : samples) out.push_back({s.q, s.p == 0.0 ? 0.0 : -s.p});
    return out;
}

}  // namespace kvn
