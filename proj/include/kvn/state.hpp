#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "kvn/fft.hpp"
#include "kvn/grid.hpp"

namespace kvn {

enum class Representation { PositionMomentum, PositionDual };

const char* to_string(Representation rep);

// Complex KvN amplitude on a (q, dual) grid. Immutable once constructed; every
// operation returns a fresh state.
class KvnState {
public:
    KvnState(GridSpec grid, Representation rep, std::vector<cplx> amplitudes, double time = 0.0);

    static KvnState zeros(const GridSpec& grid, Representation rep, double time = 0.0);

    const GridSpec& grid() const { return grid_; }
    Representation rep() const { return rep_; }
    double time() const { return time_; }
    std::span<const cplx> amplitudes() const { return amplitudes_; }
    std::vector<cplx> copy_amplitudes() const { return amplitudes_; }
    cplx operator()(std::size_t i, std::size_t j) const { return amplitudes_[grid_.index(i, j)]; }

    KvnState scaled(cplx factor) const;
    KvnState with_time(double time) const;

private:
    GridSpec grid_;
    Representation rep_;
    std::vector<cplx> amplitudes_;
    double time_;
};

// Real scalar field on a grid (densities, currents, Wigner values).
struct RealField {
    GridSpec grid;
    std::vector<double> values;

    double operator()(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
    // Quadrature of the field with the grid's weights.
    double integral() const;
};

struct MadelungFields {
    GridSpec grid;
    std::vector<double> density;
    std::vector<cplx> phase_factor;     // unit modulus where defined, 0 elsewhere
    std::vector<std::uint8_t> defined;  // 1 where |psi|^2 exceeds the mask threshold
};

// Product Gaussian. Widths are standard deviations of |psi|^2 along each axis.
struct GaussianSpec {
    double center_q = 0.0;
    double center_dual = 0.0;
    double width_q = 0.1;
    double width_dual = 0.1;
};

KvnState make_gaussian_state(const GridSpec& grid, Representation rep, const GaussianSpec& g,
                             bool normalize = true);

double norm(const KvnState& state);
cplx inner(const KvnState& a, const KvnState& b);

// |psi|^2 as a field on the state's grid.
RealField density(const KvnState& state);

inline constexpr double kMadelungMask = 1e-12;

MadelungFields madelung_split(const KvnState& state, double mask = kMadelungMask);

}  // namespace kvn
