#include "kvn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kvn/error.hpp"

namespace kvn {

void UnitSystem::validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw Error("unit system: hbar must be positive");
    if (!(mass > 0.0) || !std::isfinite(mass)) throw Error("unit system: mass must be positive");
}

std::size_t Axis::nearest(double x) const {
    const double r = std::round((x - min) / spacing());
    const double hi = static_cast<double>(points() - 1);
    return static_cast<std::size_t>(std::clamp(r, 0.0, hi));
}

bool Axis::operator==(const Axis& o) const {
    if (n != o.n || closed != o.closed) return false;
    const double tol = 1e-12 * std::max(extent(), o.extent());
    return std::abs(min - o.min) <= tol && std::abs(max - o.max) <= tol;
}

namespace {

void check_axis(const Axis& a, const char* name) {
    std::ostringstream msg;
    if (!(a.max > a.min) || !std::isfinite(a.min) || !std::isfinite(a.max)) {
        msg << "grid: " << name << " axis needs max > min";
        throw Error(msg.str());
    }
    if (a.n < 8 || a.n % 2 != 0) {
        msg << "grid: " << name << " axis needs an even point count >= 8 (got " << a.n << ")";
        throw Error(msg.str());
    }
}

}  // namespace

GridSpec::GridSpec(Axis q, Axis dual, UnitSystem units)
    : q_(q), dual_(dual), units_(units) {
    units_.validate();
    check_axis(q_, "q");
    check_axis(dual_, "dual");
}

GridSpec GridSpec::periodic(double q_min, double q_max, std::size_t n_q, double dual_min,
                            double dual_max, std::size_t n_dual, UnitSystem units) {
    return GridSpec({q_min, q_max, n_q, false}, {dual_min, dual_max, n_dual, false}, units);
}

GridSpec GridSpec::walled(double q_min, double q_max, std::size_t n_q, double dual_min,
                          double dual_max, std::size_t n_dual, UnitSystem units) {
    return GridSpec({q_min, q_max, n_q, true}, {dual_min, dual_max, n_dual, false}, units);
}

GridSpec GridSpec::box(double length, std::size_t n_q, double dual_half_width,
                       std::size_t n_dual, UnitSystem units) {
    return walled(0.0, length, n_q, -dual_half_width, dual_half_width, n_dual, units);
}

bool GridSpec::dual_symmetric() const {
    return std::abs(dual_.min + dual_.max) <= 1e-12 * dual_.extent();
}

GridSpec GridSpec::with_dual(double dual_min, double dual_max) const {
    Axis d = dual_;
    d.min = dual_min;
    d.max = dual_max;
    return GridSpec(q_, d, units_);
}

}  // namespace kvn
