#pragma once

#include "kvn/potential.hpp"
#include "kvn/state.hpp"

namespace kvn {

// Expectation values are plain quadratures (not divided by the norm). `normalized`
// is false when the norm deviates from 1 by more than 1e-6.
struct Expectation {
    double value = 0.0;
    double norm = 0.0;
    bool normalized = true;
};

Expectation expectation_position(const KvnState& state);
// In (q, Q) the momentum acts as -i hbar d/dQ (spectral).
Expectation expectation_momentum(const KvnState& state);
// Classical energy observable p^2 / 2m + V(q).
Expectation expectation_hamiltonian(const KvnState& state, const PotentialSpec& potential);

}  // namespace kvn
