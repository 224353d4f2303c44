#pragma once

#include <functional>
#include <string>

namespace kvn {

// Potential V(q) with its analytic derivative.
struct PotentialSpec {
    std::string name;
    std::function<double(double)> v;
    std::function<double(double)> v_prime;

    static PotentialSpec zero();
    static PotentialSpec harmonic(double mass, double omega);  // m w^2 q^2 / 2
    static PotentialSpec quartic(double coefficient);          // c q^4
    static PotentialSpec linear(double slope);                 // slope * q

    // Central-difference spot checks of v_prime at 16 points in [lo, hi];
    // throws when a derivative disagrees by more than 1e-6 (relative to max(1, |V'|)).
    void validate(double lo, double hi) const;
};

}  // namespace kvn
