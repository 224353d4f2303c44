#include "kvn/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kvn/error.hpp"

namespace kvn {

PotentialSpec PotentialSpec::zero() {
    return {"zero", [](double) { return 0.0; }, [](double) { return 0.0; }};
}

PotentialSpec PotentialSpec::harmonic(double mass, double omega) {
    const double k = mass * omega * omega;
    return {"harmonic", [k](double q) { return 0.5 * k * q * q; }, [k](double q) { return k * q; }};
}

PotentialSpec PotentialSpec::quartic(double c) {
    return {"quartic", [c](double q) { return c * q * q * q * q; },
            [c](double q) { return 4.0 * c * q * q * q; }};
}

PotentialSpec PotentialSpec::linear(double slope) {
    return {"linear", [slope](double q) { return slope * q; }, [slope](double) { return slope; }};
}

void PotentialSpec::validate(double lo, double hi) const {
    if (!v || !v_prime) throw Error("potential: v and v_prime must both be set");
    if (!(hi > lo)) throw Error("potential: empty validation interval");
    const double h = 1e-5 * std::max(1.0, hi - lo);
    for (int s = 0; s < 16; ++s) {
        // Fixed low-discrepancy points keep the check deterministic.
        const double frac = std::fmod(0.5 + s * 0.6180339887498949, 1.0);
        const double q = lo + frac * (hi - lo);
        const double fd = (v(q + h) - v(q - h)) / (2.0 * h);
        const double an = v_prime(q);
        if (!std::isfinite(an) || std::abs(fd - an) > 1e-6 * std::max(1.0, std::abs(an))) {
            std::ostringstream msg;
            msg << "potential '" << name << "': v_prime(" << q << ") = " << an
                << " disagrees with the difference quotient " << fd;
            throw Error(msg.str());
        }
    }
}

}  // namespace kvn
