#pragma once

#include <cstddef>

#include "kvn/potential.hpp"
#include "kvn/state.hpp"

namespace kvn {

// Symmetric truncation |n| <= n_images of the image sum.
struct ImageSumPolicy {
    int n_images = 8;
    double tail_tol = 1e-8;

    void validate() const;
};

enum class BoxBackend { Characteristics, ImageKernel };

// Free flow on a periodic grid. (q, p): per-p-line shift by p t / m.
// (q, Q): double-Fourier phase exp(-i hbar k kappa t / m). Moving amplitude across
// the ends of the q axis is an error.
KvnState evolve_free_spectral(const KvnState& state, double t);

// Elastic-wall box [0, L] on a walled grid. Input and output are (q, p) states.
KvnState evolve_box(const KvnState& state, double t, double length,
                    BoxBackend backend = BoxBackend::Characteristics,
                    const ImageSumPolicy& policy = {});

// Uniform field, V = m g q.
KvnState evolve_gravity(const KvnState& state, double t, double g);

// Strang splitting of the (q, Q) generator -(hbar^2/m) d_q d_Q + V'(q) Q.
KvnState evolve_splitstep(const KvnState& state, const PotentialSpec& potential, double dt,
                          std::size_t n_steps);

// Throws unless psi(q_w, x) = psi(q_w, -x) at both wall rows within tol * max|psi|.
void require_wall_parity(const KvnState& state, double tol, const char* who);

}  // namespace kvn
