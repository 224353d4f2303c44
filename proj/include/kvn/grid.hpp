#pragma once

#include <cstddef>

namespace kvn {

struct UnitSystem {
    double hbar = 1.0;
    double mass = 1.0;

    void validate() const;
    bool operator==(const UnitSystem&) const = default;
};

// Uniform 1-D axis with spacing (max - min) / n.
// An open axis holds n nodes on [min, max) and is treated as periodic by the
// spectral operators. A closed axis holds n + 1 nodes on [min, max] so both end
// points are nodes; quadrature over it uses trapezoid weights.
struct Axis {
    double min = 0.0;
    double max = 1.0;
    std::size_t n = 0;
    bool closed = false;

    double spacing() const { return (max - min) / static_cast<double>(n); }
    double extent() const { return max - min; }
    std::size_t points() const { return closed ? n + 1 : n; }
    double at(std::size_t i) const { return min + static_cast<double>(i) * spacing(); }
    double weight(std::size_t i) const {
        return (closed && (i == 0 || i == n)) ? 0.5 : 1.0;
    }
    // Nearest node index of x, clamped to the axis.
    std::size_t nearest(double x) const;

    // Equal point counts and end points within 1e-12 of the extent, so grids
    // that went through a transform round trip still compare equal.
    bool operator==(const Axis& o) const;
};

enum class QBoundary { Periodic, Walled };

// Rectangular (q, dual) grid plus unit system. The dual axis holds p in the
// position-momentum representation and Q in the position-dual one; it is
// always open. Amplitude arrays are row-major with the q index outermost.
class GridSpec {
public:
    static GridSpec periodic(double q_min, double q_max, std::size_t n_q,
                             double dual_min, double dual_max, std::size_t n_dual,
                             UnitSystem units = {});
    // Wall-aligned grid: q nodes at q_min, q_min + dq, ..., q_max.
    static GridSpec walled(double q_min, double q_max, std::size_t n_q,
                           double dual_min, double dual_max, std::size_t n_dual,
                           UnitSystem units = {});
    // Box [0, length] with a dual axis symmetric about zero.
    static GridSpec box(double length, std::size_t n_q, double dual_half_width,
                        std::size_t n_dual, UnitSystem units = {});

    const Axis& q() const { return q_; }
    const Axis& dual() const { return dual_; }
    const UnitSystem& units() const { return units_; }
    QBoundary q_boundary() const { return q_.closed ? QBoundary::Walled : QBoundary::Periodic; }
    bool walled() const { return q_.closed; }

    double dq() const { return q_.spacing(); }
    double d_dual() const { return dual_.spacing(); }
    double cell_measure() const { return dq() * d_dual(); }
    std::size_t rows() const { return q_.points(); }
    std::size_t cols() const { return dual_.n; }
    std::size_t size() const { return rows() * cols(); }
    std::size_t index(std::size_t i, std::size_t j) const { return i * cols() + j; }
    // Quadrature weight of node (i, j) including the cell measure.
    double weight(std::size_t i) const { return q_.weight(i) * cell_measure(); }

    bool dual_symmetric() const;
    GridSpec with_dual(double dual_min, double dual_max) const;

    bool operator==(const GridSpec&) const = default;

private:
    GridSpec(Axis q, Axis dual, UnitSystem units);

    Axis q_;
    Axis dual_;
    UnitSystem units_;
};

}  // namespace kvn
