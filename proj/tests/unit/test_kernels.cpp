#include <doctest.h>

#include <cmath>

#include "kvn/error.hpp"
#include "kvn/evolution.hpp"
#include "kvn/kernels.hpp"
#include "kvn/transform.hpp"
#include "oracles.hpp"

using namespace kvn;
using Rep = Representation;

namespace {

double diff(const KvnState& a, const KvnState& b) {
    return oracle::max_abs_diff(a.copy_amplitudes(), b.copy_amplitudes());
}

KvnState box_state(double q0 = 0.5, double p0 = 1.0) {
    return to_dual(make_gaussian_state(GridSpec::box(1.0, 256, 2.0, 256), Rep::PositionMomentum,
                                       {q0, p0, 0.05, 0.1}));
}

}  // namespace

TEST_CASE("free kernel values") {
    const double pi = oracle::pi;
    CHECK(kernel_free(1.0, 0.3, 2.0, 0.3, -5.0) == cplx(1.0 / (2.0 * pi), 0.0));
    CHECK(kernel_free(2.0, 0.1, 1.5, -0.7, 1.5) == cplx(1.0 / (4.0 * pi), 0.0));
    const UnitSystem u{0.5, 3.0};
    CHECK(kernel_free(0.7, 1.0, 2.0, 1.0, 0.0, u) == cplx(3.0 / (2.0 * pi * 0.5 * 0.7), 0.0));

    const cplx v = kernel_free(1.0, pi, 1.0, 0.0, 0.0);
    CHECK(std::abs(v - cplx(-1.0 / (2.0 * pi), 0.0)) <= 1e-15);
    // backward kernel: conjugate phase, positive prefactor
    CHECK(std::abs(kernel_free(-1.0, 0.4, 1.1, 0.0, 0.0) - std::conj(kernel_free(1.0, 0.4, 1.1, 0.0, 0.0))) <= 1e-16);
    CHECK_THROWS_AS(kernel_free(0.0, 0.0, 0.0, 0.0, 0.0), Error);
}

TEST_CASE("free kernel quadrature matches spectral flow") {
    const auto g = GridSpec::periodic(-2.0, 6.0, 256, -3.0, 3.0, 128);
    const auto s = to_dual(make_gaussian_state(g, Rep::PositionMomentum, {0.5, 1.0, 0.15, 0.15}));
    for (double t : {1.0, -0.6, 0.1}) {
        const auto k = propagate_free_kernel(s, t);
        CHECK(diff(k.state, evolve_free_spectral(s, t)) <= 1e-6);
    }
    CHECK_THROWS_AS(propagate_free_kernel(s, 0.0), Error);
}

TEST_CASE("box kernel wall parity") {
    for (double Q : {0.3, 1.7, 12.5})
        for (double t : {0.2, 0.9}) {
            const auto a = kernel_box(t, 0.0, Q, 0.37, 2.1, 1.0);
            const auto b = kernel_box(t, 0.0, -Q, 0.37, 2.1, 1.0);
            CHECK(std::abs(a.value - b.value) <= 1e-12 * std::abs(a.value) + 1e-14);
        }
    // At q = L the direct image n pairs with the reflected image 1 - n, so a
    // symmetric truncation leaves unpaired terms; parity there holds after quadrature.
    CHECK_THROWS_AS(kernel_box(0.0, 0.5, 0.0, 0.5, 0.0, 1.0), Error);
    CHECK_THROWS_AS(kernel_box(0.3, 1.5, 0.0, 0.5, 0.0, 1.0), Error);
    CHECK_THROWS_AS(kernel_box(0.3, 0.5, 0.0, 0.5, 0.0, 1.0, {0, 1e-8}), Error);
}

TEST_CASE("box kernel term structure") {
    // n_images = 1 keeps the shells n = -1, 0, 1 of the two image families
    const double t = 0.3, q = 0.42, Q = 1.3, qs = 0.55, Qs = -0.8, L = 1.0;
    cplx expect = 0.0;
    for (int n = -1; n <= 1; ++n)
        expect += kernel_free(t, q - 2.0 * n * L, Q, qs, Qs) + kernel_free(t, q - 2.0 * n * L + 2.0 * qs, Q, qs, -Qs);
    CHECK(std::abs(kernel_box(t, q, Q, qs, Qs, L, {1, 1.0}).value - expect) <= 1e-14);
}

// Away from the walls and at short times the image copies carry no weight
// after quadrature: the confined propagation equals free flight.
TEST_CASE("box kernel reduces to free flight away from walls") {
    const auto s = box_state(0.5, 0.4);
    const auto k = propagate_box_kernel(s, 0.1);
    const auto free_flight = to_dual(evolve_box(to_momentum(s), 0.1, 1.0));
    CHECK(diff(k.state, free_flight) <= 1e-10);
    CHECK(k.tail_estimate <= 1e-8);
}

TEST_CASE("box kernel propagation") {
    const auto s = box_state();
    for (double t : {0.05, 0.25, 0.75, 2.0}) {
        const auto k = propagate_box_kernel(s, t);
        CHECK(std::abs(norm(k.state) - 1.0) <= 1e-8);
        CHECK(k.tail_estimate <= 1e-8);
        CHECK(diff(k.state, to_dual(evolve_box(to_momentum(s), t, 1.0))) <= 1e-5);
    }
    // too few shells for the flight length
    CHECK_THROWS_AS(propagate_box_kernel(s, 0.75, {1, 1e-8}), Error);
    CHECK_THROWS_AS(propagate_box_kernel(s, 0.0), Error);

    // narrow in q: after long flights each q slice is narrower in p than dp and
    // spreads past the ends of the Q axis
    const auto narrow = to_dual(make_gaussian_state(GridSpec::box(1.0, 256, 2.0, 256), Rep::PositionMomentum,
                                                    {0.5, 1.0, 0.03, 0.1}));
    CHECK_NOTHROW(propagate_box_kernel(narrow, 0.75));
    CHECK_THROWS_AS(propagate_box_kernel(narrow, 3.0), Error);
    CHECK_THROWS_AS(evolve_box(to_momentum(narrow), 3.0, 1.0, BoxBackend::ImageKernel), Error);
    CHECK_NOTHROW(evolve_box(to_momentum(narrow), 3.0, 1.0, BoxBackend::Characteristics));
}
