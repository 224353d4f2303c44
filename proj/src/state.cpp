#include "kvn/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kvn/error.hpp"

namespace kvn {

const char* to_string(Representation rep) {
    return rep == Representation::PositionMomentum ? "position-momentum" : "position-dual";
}

KvnState::KvnState(GridSpec grid, Representation rep, std::vector<cplx> amplitudes, double time)
    : grid_(std::move(grid)), rep_(rep), amplitudes_(std::move(amplitudes)), time_(time) {
    if (amplitudes_.size() != grid_.size()) {
        std::ostringstream msg;
        msg << "state: amplitude count " << amplitudes_.size() << " does not match grid "
            << grid_.rows() << "x" << grid_.cols();
        throw Error(msg.str());
    }
    for (const cplx& a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw Error("state: non-finite amplitude");
    }
    if (!std::isfinite(time_)) throw Error("state: non-finite time");
}

KvnState KvnState::zeros(const GridSpec& grid, Representation rep, double time) {
    return KvnState(grid, rep, std::vector<cplx>(grid.size()), time);
}

KvnState KvnState::scaled(cplx factor) const {
    auto a = amplitudes_;
    for (auto& v : a) v *= factor;
    return KvnState(grid_, rep_, std::move(a), time_);
}

KvnState KvnState::with_time(double time) const {
    return KvnState(grid_, rep_, amplitudes_, time);
}

double RealField::integral() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < grid.cols(); ++j) row += values[grid.index(i, j)];
        sum += grid.weight(i) * row;
    }
    return sum;
}

KvnState make_gaussian_state(const GridSpec& grid, Representation rep, const GaussianSpec& g,
                             bool normalize) {
    const Axis& qa = grid.q();
    const Axis& da = grid.dual();
    if (!(g.width_q > 0.0) || !(g.width_dual > 0.0))
        throw Error("gaussian: widths must be positive");
    const double q_hi = qa.closed ? qa.max : qa.max - qa.spacing();
    const double d_hi = da.max - da.spacing();
    if (g.center_q < qa.min || g.center_q > q_hi || g.center_dual < da.min || g.center_dual > d_hi)
        throw Error("gaussian: center outside grid");
    if (g.width_q < 3.0 * qa.spacing() || g.width_dual < 3.0 * da.spacing())
        throw Error("gaussian: width under-resolved (needs at least 3 grid spacings)");

    std::vector<cplx> a(grid.size());
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        const double xq = (qa.at(i) - g.center_q) / g.width_q;
        const double fq = std::exp(-0.25 * xq * xq);
        for (std::size_t j = 0; j < grid.cols(); ++j) {
            const double xd = (da.at(j) - g.center_dual) / g.width_dual;
            a[grid.index(i, j)] = fq * std::exp(-0.25 * xd * xd);
        }
    }
    KvnState state(grid, rep, std::move(a));
    if (!normalize) return state;
    const double n = norm(state);
    if (!(n > 0.0)) throw Error("gaussian: zero norm on grid");
    return state.scaled(1.0 / n);
}

double norm(const KvnState& state) {
    const GridSpec& g = state.grid();
    double sum = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.cols(); ++j) row += std::norm(state(i, j));
        sum += g.weight(i) * row;
    }
    if (!std::isfinite(sum)) throw Error("norm: non-finite result");
    return std::sqrt(sum);
}

cplx inner(const KvnState& a, const KvnState& b) {
    if (!(a.grid() == b.grid())) throw Error("inner: grid mismatch");
    if (a.rep() != b.rep()) throw Error("inner: representation mismatch");
    const GridSpec& g = a.grid();
    cplx sum = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        cplx row = 0.0;
        for (std::size_t j = 0; j < g.cols(); ++j) row += std::conj(a(i, j)) * b(i, j);
        sum += g.weight(i) * row;
    }
    return sum;
}

RealField density(const KvnState& state) {
    RealField f{state.grid(), std::vector<double>(state.grid().size())};
    auto amps = state.amplitudes();
    std::transform(amps.begin(), amps.end(), f.values.begin(),
                   [](const cplx& v) { return std::norm(v); });
    return f;
}

MadelungFields madelung_split(const KvnState& state, double mask) {
    if (state.rep() != Representation::PositionMomentum)
        throw Error("madelung_split: state must be in the position-momentum representation");
    MadelungFields m{state.grid(), density(state).values, {}, {}};
    const double peak = m.density.empty() ? 0.0 : *std::max_element(m.density.begin(), m.density.end());
    const double threshold = mask * peak;
    auto amps = state.amplitudes();
    m.phase_factor.resize(amps.size());
    m.defined.resize(amps.size());
    for (std::size_t k = 0; k < amps.size(); ++k) {
        if (peak > 0.0 && m.density[k] > threshold) {
            m.phase_factor[k] = amps[k] / std::abs(amps[k]);
            m.defined[k] = 1;
        }
    }
    return m;
}

}  // namespace kvn
