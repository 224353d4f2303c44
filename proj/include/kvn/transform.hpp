#pragma once

#include "kvn/state.hpp"

namespace kvn {

// Grid of the conjugate representation. The dual spacing satisfies
// dQ * dp = 2 pi hbar / n_dual and both axes are symmetric about zero.
GridSpec conjugate_grid(const GridSpec& grid);

// Partial Fourier transform in the momentum variable,
//   psi(q, Q) = (2 pi hbar)^{-1/2} \int e^{i Q p / hbar} Psi(q, p) dp,
// evaluated exactly on the symmetric grids (offset phases included), and its inverse.
KvnState to_dual(const KvnState& state);
KvnState to_momentum(const KvnState& state);

// Representation-agnostic helpers.
KvnState to_representation(const KvnState& state, Representation rep);

}  // namespace kvn
