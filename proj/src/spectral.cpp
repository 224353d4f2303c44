#include "kvn/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kvn/error.hpp"
#include "kvn/spectral_ops.hpp"

namespace kvn {

namespace {

constexpr double kPi = std::numbers::pi;

void require_mode_index(int n) {
    if (n < 1) throw Error("band mode index n must be >= 1");
}

}  // namespace

double dispersion(double k, double kappa, const UnitSystem& u) {
    return u.hbar * u.hbar / u.mass * k * kappa;
}

double band_energy(int n, double kappa, double length, const UnitSystem& u) {
    require_mode_index(n);
    if (!(length > 0.0)) throw Error("band_energy: L must be positive");
    return dispersion(n * kPi / length, kappa, u);
}

BandMode make_band_mode_label(int n, double kappa, double length, const UnitSystem& u) {
    return {n, kappa, band_energy(n, kappa, length, u)};
}

KvnState band_mode(int n, double kappa, const GridSpec& g) {
    require_mode_index(n);
    if (!g.walled()) throw Error("band_mode: grid must be wall-aligned");
    const double length = g.q().extent();
    const double lattice = 2.0 * kPi / g.dual().extent();
    const double nyquist = kPi / g.d_dual();
    if (!(std::abs(kappa) < nyquist)) {
        std::ostringstream msg;
        msg << "band_mode: |kappa| = " << std::abs(kappa) << " is not below the dual Nyquist wavenumber "
            << nyquist;
        throw Error(msg.str());
    }
    const double steps = kappa / lattice;
    if (std::abs(steps - std::round(steps)) > 1e-9) {
        std::ostringstream msg;
        msg << "band_mode: kappa = " << kappa << " is not a multiple of the dual lattice spacing "
            << lattice;
        throw Error(msg.str());
    }
    if (static_cast<std::size_t>(n) >= g.q().n) throw Error("band_mode: n beyond the q resolution");
    const double k = n * kPi / length;
    std::vector<cplx> a(g.size());
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            a[g.index(i, j)] = std::cos(k * (g.q().at(i) - g.q().min) + kappa * g.dual().at(j));
    KvnState s(g, Representation::PositionDual, std::move(a));
    return s.scaled(1.0 / norm(s));
}

KvnState apply_generator(const KvnState& s) {
    if (s.rep() != Representation::PositionDual)
        throw Error("apply_generator: state must be in the position-dual representation");
    const GridSpec& g = s.grid();
    const double c = g.units().hbar * g.units().hbar / g.units().mass;
    // -(hbar^2/m)(ik)(i kappa) = (hbar^2/m) k kappa
    auto a = ops::double_multiplier(
        g, s.amplitudes(), [c](double k, double kap) { return cplx(c * k * kap); }, ops::Nyquist::Zero);
    return KvnState(g, s.rep(), std::move(a), s.time());
}

GeneratorResidual generator_residual(const KvnState& s, std::optional<double> energy_guess) {
    const KvnState ls = apply_generator(s);
    const double nn = inner(s, s).real();
    if (nn == 0.0) return {};
    const double rayleigh = inner(s, ls).real() / nn;
    const double e = energy_guess.value_or(rayleigh);
    const KvnState diff(s.grid(), s.rep(), [&] {
        auto d = ls.copy_amplitudes();
        for (std::size_t k = 0; k < d.size(); ++k) d[k] -= e * s.amplitudes()[k];
        return d;
    }());
    return {norm(diff) / std::sqrt(nn), rayleigh};
}

std::vector<QuantumLevel> quantum_box_levels(int n_max, double length, const UnitSystem& u) {
    if (n_max < 1) throw Error("quantum_box_levels: n_max must be >= 1");
    if (!(length > 0.0)) throw Error("quantum_box_levels: L must be positive");
    std::vector<QuantumLevel> out;
    const double base = kPi * kPi * u.hbar * u.hbar / (2.0 * u.mass * length * length);
    for (int n = 1; n <= n_max; ++n) out.push_back({n, static_cast<double>(n) * n * base});
    return out;
}

std::vector<SweepRow> energy_sweep(int n, const std::vector<double>& kappas, double length,
                                   const UnitSystem& u) {
    std::vector<SweepRow> out;
    out.reserve(kappas.size());
    for (double k : kappas) {
        if (!std::isfinite(k)) throw Error("energy_sweep: non-finite kappa");
        out.push_back({k, band_energy(n, k, length, u)});
    }
    return out;
}

double max_adjacent_gap(const std::vector<SweepRow>& t) {
    double gap = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) gap = std::max(gap, std::abs(t[i].energy - t[i - 1].energy));
    return gap;
}

}  // namespace kvn
