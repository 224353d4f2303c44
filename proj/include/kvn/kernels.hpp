#pragma once

#include "kvn/evolution.hpp"
#include "kvn/state.hpp"

namespace kvn {

// (m / (2 pi hbar |t|)) exp(i m (q - q')(Q - Q') / (hbar t)). Rejects t = 0.
cplx kernel_free(double t, double q, double Q, double qs, double Qs, const UnitSystem& units = {});

struct BoxKernelValue {
    cplx value;
    // |contribution of the two outermost shells| / |value|. The pointwise image
    // series does not converge absolutely, so this is reported, not enforced;
    // propagate_box_kernel enforces the tolerance on propagated states.
    double tail_estimate = 0.0;
};

// Symmetric truncation of sum_n [K0(q - 2nL, Q; q', Q') + K0(q - 2nL + 2q', Q; q', -Q')].
BoxKernelValue kernel_box(double t, double q, double Q, double qs, double Qs, double length,
                          const ImageSumPolicy& policy = {}, const UnitSystem& units = {});

struct KernelPropagation {
    KvnState state;
    double tail_estimate = 0.0;
};

// Quadrature of kernel_free against a (q, Q) state on a periodic grid. Source
// points outside the grid contribute nothing. Both propagators throw when the
// result reaches the ends of the dual axis (more than 1e-8 of its peak in the
// outer four columns), where the periodic Q quadrature wraps it around.
KernelPropagation propagate_free_kernel(const KvnState& state, double t);

// Quadrature of the image-sum kernel against a wall-aligned (q, Q) state on
// [0, L]. The tail estimate is the relative norm of the contribution from the two
// outermost retained image shells; exceeding policy.tail_tol is an error.
KernelPropagation propagate_box_kernel(const KvnState& state, double t,
                                       const ImageSumPolicy& policy = {});

}  // namespace kvn
