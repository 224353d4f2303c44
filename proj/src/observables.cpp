#include "kvn/observables.hpp"

#include <cmath>

#include "kvn/error.hpp"
#include "kvn/spectral_ops.hpp"

namespace kvn {

namespace {

Expectation make(const KvnState& s, double value) {
    const double n = norm(s);
    if (!std::isfinite(value)) throw Error("expectation: non-finite result");
    return {value, n, std::abs(n - 1.0) <= 1e-6};
}

// sum_ij w_i f(i, j)
template <class F>
double quadrature(const GridSpec& g, F f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.cols(); ++j) row += f(i, j);
        sum += g.weight(i) * row;
    }
    return sum;
}

// <psi| A psi> for A diagonal in the dual Fourier basis with symbol m(kappa).
double dual_symbol_expectation(const KvnState& s, const std::function<cplx(double)>& m) {
    const GridSpec& g = s.grid();
    const auto a = s.amplitudes();
    const auto b = ops::dual_multiplier(g, a, m, ops::Nyquist::Keep);
    return quadrature(g, [&](std::size_t i, std::size_t j) {
        return (std::conj(a[g.index(i, j)]) * b[g.index(i, j)]).real();
    });
}

}  // namespace

Expectation expectation_position(const KvnState& s) {
    const GridSpec& g = s.grid();
    return make(s, quadrature(g, [&](std::size_t i, std::size_t j) {
                    return g.q().at(i) * std::norm(s(i, j));
                }));
}

Expectation expectation_momentum(const KvnState& s) {
    const GridSpec& g = s.grid();
    const double hbar = g.units().hbar;
    if (s.rep() == Representation::PositionMomentum) {
        return make(s, quadrature(g, [&](std::size_t i, std::size_t j) {
                        return g.dual().at(j) * std::norm(s(i, j));
                    }));
    }
    // -i hbar d/dQ has symbol hbar * kappa.
    return make(s, dual_symbol_expectation(s, [hbar](double kap) { return cplx(hbar * kap); }));
}

Expectation expectation_hamiltonian(const KvnState& s, const PotentialSpec& potential) {
    const GridSpec& g = s.grid();
    const double m = g.units().mass;
    const double hbar = g.units().hbar;
    const double pot = quadrature(g, [&](std::size_t i, std::size_t j) {
        return potential.v(g.q().at(i)) * std::norm(s(i, j));
    });
    double kin = 0.0;
    if (s.rep() == Representation::PositionMomentum) {
        kin = quadrature(g, [&](std::size_t i, std::size_t j) {
            const double p = g.dual().at(j);
            return p * p / (2.0 * m) * std::norm(s(i, j));
        });
    } else {
        kin = dual_symbol_expectation(s, [&](double kap) {
            const double p = hbar * kap;
            return cplx(p * p / (2.0 * m));
        });
    }
    return make(s, kin + pot);
}

}  // namespace kvn
