#include "kvn/billiard.hpp"

#include <cmath>

namespace kvn {

PhasePoint billiard_fold(double x, double p, double length) {
    const double period = 2.0 * length;
    double y = std::fmod(x, period);
    if (y < 0.0) y += period;
    if (y <= length) return {y, p};
    return {period - y, -p};
}

PhasePoint billiard_flow(PhasePoint start, double t, double length, double mass) {
    return billiard_fold(start.q + start.p * t / mass, start.p, length);
}

}  // namespace kvn
