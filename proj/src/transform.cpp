#include "kvn/transform.hpp"

#include <cmath>
#include <numbers>

#include "kvn/error.hpp"

namespace kvn {

namespace {

constexpr double kPi = std::numbers::pi;

// One kernel for both directions. sign = +1 maps p -> Q, sign = -1 maps Q -> p.
std::vector<cplx> partial_fourier(const KvnState& state, int sign) {
    const GridSpec& g = state.grid();
    const std::size_t rows = g.rows();
    const std::size_t n = g.cols();
    const double step = g.d_dual();
    std::vector<cplx> a = state.copy_amplitudes();
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 1; j < n; j += 2) a[g.index(i, j)] = -a[g.index(i, j)];
    fft::along_cols(a, rows, n, sign > 0 ? fft::Direction::Backward : fft::Direction::Forward);
    const double c = step / std::sqrt(2.0 * kPi * g.units().hbar);
    const double half_turns = static_cast<double>(n % 4) * 0.5 * kPi;
    const cplx global = std::polar(c, sign * half_turns);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < n; ++k)
            a[g.index(i, k)] *= (k % 2 == 0) ? global : -global;
    return a;
}

void check_symmetric(const GridSpec& g, const char* who) {
    if (!g.dual_symmetric()) throw Error(std::string(who) + ": dual grid must be symmetric about 0");
}

}  // namespace

GridSpec conjugate_grid(const GridSpec& grid) {
    const double n = static_cast<double>(grid.cols());
    const double step = 2.0 * kPi * grid.units().hbar / (n * grid.d_dual());
    const double half = 0.5 * n * step;
    return grid.with_dual(-half, half);
}

KvnState to_dual(const KvnState& state) {
    if (state.rep() != Representation::PositionMomentum)
        throw Error("to_dual: state is not in the position-momentum representation");
    check_symmetric(state.grid(), "to_dual");
    return KvnState(conjugate_grid(state.grid()), Representation::PositionDual,
                    partial_fourier(state, +1), state.time());
}

KvnState to_momentum(const KvnState& state) {
    if (state.rep() != Representation::PositionDual)
        throw Error("to_momentum: state is not in the position-dual representation");
    check_symmetric(state.grid(), "to_momentum");
    return KvnState(conjugate_grid(state.grid()), Representation::PositionMomentum,
                    partial_fourier(state, -1), state.time());
}

KvnState to_representation(const KvnState& state, Representation rep) {
    if (state.rep() == rep) return state;
    return rep == Representation::PositionDual ? to_dual(state) : to_momentum(state);
}

}  // namespace kvn
