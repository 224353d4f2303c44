#include <doctest.h>

#include <cmath>
#include <numeric>

#include "kvn/error.hpp"
#include "kvn/evolution.hpp"
#include "kvn/oracle.hpp"
#include "oracles.hpp"

using namespace kvn;
using Rep = Representation;

namespace {

ClassicalEnsemble single(double q, double p) { return {{{q, p, 1.0}}, 0.0, 0}; }

}  // namespace

TEST_CASE("counter-based uniforms") {
    CHECK(uniform01(7, 3, 1) == uniform01(7, 3, 1));
    CHECK(uniform01(7, 3, 1) != uniform01(7, 3, 2));
    CHECK(uniform01(7, 3, 1) != uniform01(8, 3, 1));
    double mean = 0.0, lo = 1.0, hi = 0.0;
    for (std::uint64_t i = 0; i < 100000; ++i) {
        const double u = uniform01(1, i, 0);
        mean += u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(mean / 1e5 - 0.5) <= 5.0 * std::sqrt(1.0 / 12.0 / 1e5));
}

TEST_CASE("sampling") {
    const auto g = GridSpec::periodic(-2.0, 6.0, 128, -3.0, 3.0, 64);
    // all mass on one node
    RealField delta{g, std::vector<double>(g.size(), 0.0)};
    delta.values[g.index(40, 20)] = 1.0;
    const auto e = sample_ensemble(delta, 1000, 3);
    bool inside = true;
    for (const auto& s : e.samples)
        inside = inside && std::abs(s.q - g.q().at(40)) <= 0.5 * g.dq() && std::abs(s.p - g.dual().at(20)) <= 0.5 * g.d_dual();
    CHECK(inside);
    double w = 0.0;
    for (const auto& s : e.samples) w += s.weight;
    CHECK(std::abs(w - 1.0) <= 1e-12);

    // Gaussian means within 5 sigma / sqrt(n)
    const auto f = density(make_gaussian_state(g, Rep::PositionMomentum, {0.5, 1.0, 0.2, 0.3}));
    const std::size_t n = 100000;
    const auto ge = sample_ensemble(f, n, 11);
    double mq = 0.0, mp = 0.0;
    for (const auto& s : ge.samples) mq += s.q, mp += s.p;
    CHECK(std::abs(mq / n - 0.5) <= 5.0 * 0.2 / std::sqrt(double(n)));
    CHECK(std::abs(mp / n - 1.0) <= 5.0 * 0.3 / std::sqrt(double(n)));

    const auto again = sample_ensemble(f, n, 11);
    bool same = true;
    for (std::size_t k = 0; k < n; ++k)
        same = same && again.samples[k].q == ge.samples[k].q && again.samples[k].p == ge.samples[k].p;
    CHECK(same);
    CHECK(sample_ensemble(f, 10, 12).samples[0].q != ge.samples[0].q);

    CHECK_THROWS_AS(sample_ensemble(RealField{g, std::vector<double>(g.size(), 0.0)}, 10, 1), Error);
    CHECK_THROWS_AS(sample_ensemble(f, 0, 1), Error);
}

TEST_CASE("hamilton flows") {
    const auto b = integrate_hamilton(single(0.5, 1.0), 0.75, scenario::Box{1.0});
    CHECK(b.samples[0].q == doctest::Approx(0.75));
    CHECK(b.samples[0].p == doctest::Approx(-1.0));
    CHECK(b.time == 0.75);

    const auto gr = integrate_hamilton(single(0.5, 0.0), 0.4, scenario::Gravity{1.0});
    CHECK(gr.samples[0].q == doctest::Approx(0.42));
    CHECK(gr.samples[0].p == doctest::Approx(-0.4));

    const auto fr = integrate_hamilton(single(0.5, 2.0), 0.3, scenario::Free{}, std::nullopt, {1.0, 4.0});
    CHECK(fr.samples[0].q == doctest::Approx(0.65));

    const ScenarioKind osc = scenario::Potential{PotentialSpec::harmonic(1.0, 1.0)};
    ClassicalEnsemble ring;
    for (int k = 0; k < 8; ++k) ring.samples.push_back({std::cos(k * 0.8), std::sin(k * 0.8) * 1.3, 1.0 / 8});
    const auto back = integrate_hamilton(ring, 2.0 * oracle::pi, osc, 1e-3);
    double err = 0.0;
    for (std::size_t k = 0; k < 8; ++k)
        err = std::max({err, std::abs(back.samples[k].q - ring.samples[k].q), std::abs(back.samples[k].p - ring.samples[k].p)});
    CHECK(err <= 1e-6);

    CHECK_THROWS_AS(integrate_hamilton(ring, 1.0, osc), Error);
    CHECK_THROWS_AS(integrate_hamilton(single(1.5, 0.0), 1.0, scenario::Box{1.0}), Error);
}

TEST_CASE("box confinement and energy") {
    const auto g = GridSpec::box(1.0, 128, 4.0, 128);
    const auto f = density(make_gaussian_state(g, Rep::PositionMomentum, {0.5, 1.0, 0.1, 0.8}));
    const auto e = sample_ensemble(f, 20000, 5);
    for (double t : {0.3, 1.7, 25.0}) {
        const auto out = integrate_hamilton(e, t, scenario::Box{1.0});
        bool confined = true, energy = true;
        for (std::size_t k = 0; k < e.samples.size(); ++k) {
            confined = confined && out.samples[k].q >= 0.0 && out.samples[k].q <= 1.0;
            energy = energy && std::abs(out.samples[k].p) == std::abs(e.samples[k].p);
        }
        CHECK(confined);
        CHECK(energy);
    }
}

TEST_CASE("density estimate") {
    const auto g = GridSpec::periodic(0.0, 1.0, 16, 0.0, 1.0, 16);
    const auto one = density_estimate(single(0.26, 0.5), g);
    std::size_t nonzero = 0;
    for (double v : one.field.values) nonzero += v != 0.0;
    CHECK(nonzero == 1);
    CHECK(one.field.integral() == doctest::Approx(1.0));
    CHECK(one.out_of_range_fraction == 0.0);

    // uniform over the union of node cells
    ClassicalEnsemble u;
    const std::size_t n = 256000;
    const double h = g.dq();
    for (std::size_t k = 0; k < n; ++k)
        u.samples.push_back({-0.5 * h + uniform01(2, k, 0), -0.5 * h + uniform01(2, k, 1), 1.0 / n});
    const auto flat = density_estimate(u, g);
    double dev = 0.0;
    for (double v : flat.field.values) dev = std::max(dev, std::abs(v - 1.0));
    CHECK(dev <= 3.0 / std::sqrt(double(n) / g.size()) * 1.5);  // max over 256 cells
    CHECK(flat.field.integral() == doctest::Approx(1.0 - flat.out_of_range_fraction).epsilon(1e-12));

    // samples beyond the grid are counted, not binned
    auto shifted = u;
    for (auto& s : shifted.samples) s.q += 0.5;
    const auto part = density_estimate(shifted, g);
    CHECK(part.out_of_range_fraction == doctest::Approx(0.5).epsilon(0.01));
    CHECK(part.field.integral() == doctest::Approx(1.0 - part.out_of_range_fraction).epsilon(1e-12));

    const auto smooth = density_estimate(u, g, 0.1, 0.1);
    CHECK(smooth.bandwidth_q == 0.1);
}

TEST_CASE("density comparison") {
    const auto g = GridSpec::periodic(0.0, 1.0, 16, 0.0, 1.0, 16);
    RealField a{g, std::vector<double>(g.size(), 1.0)};
    const auto same = compare_densities(a, a);
    CHECK(same.l1 == 0.0);
    CHECK(same.linf == 0.0);
    RealField zero{g, std::vector<double>(g.size(), 0.0)};
    const auto z = compare_densities(a, zero);
    CHECK(z.linf_absolute);
    CHECK(z.linf == 1.0);
    CHECK(z.l1 == doctest::Approx(1.0));
    RealField other{GridSpec::periodic(0.0, 2.0, 16, 0.0, 1.0, 16), a.values};
    CHECK_THROWS_AS(compare_densities(a, other), Error);
}

TEST_CASE("ensemble against the KvN density within budget") {
    const auto g = GridSpec::periodic(-2.0, 6.0, 256, -3.0, 3.0, 128);
    const auto s = make_gaussian_state(g, Rep::PositionMomentum, {0.5, 1.0, 0.15, 0.2});
    const std::size_t n = 200000;
    const auto e = sample_ensemble(density(s), n, 1);
    for (double t : {0.25, 1.0}) {
        const auto ref = density(evolve_free_spectral(s, t));
        const auto est = density_estimate(integrate_hamilton(e, t, scenario::Free{}), g);
        const auto c = compare_densities(est.field, ref);
        const double budget = monte_carlo_budget(ref, n);
        MESSAGE("free t=" << t << " l1 " << c.l1 << " budget " << budget);
        CHECK(c.l1 <= budget);
        CHECK(c.l1 >= 0.3 * budget);  // the budget is not vacuous
    }
}

TEST_CASE("liouville pullback") {
    const auto g = GridSpec::periodic(-4.0, 4.0, 128, -4.0, 4.0, 128);
    const PhaseSpaceGaussian f0{1.0, 0.0, 0.3, 0.4, 0.05};
    const auto f = liouville_pullback(g, f0, PotentialSpec::harmonic(1.0, 1.0), 0.5 * oracle::pi, 1e-3);
    double err = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const double ref = f0(-g.dual().at(j), g.q().at(i));
            err = std::max(err, std::abs(f(i, j) - ref));
            peak = std::max(peak, ref);
        }
    CHECK(err <= 1e-5 * peak);
    CHECK(f.integral() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS((PhaseSpaceGaussian{0.0, 0.0, 0.1, 0.1, 0.2}(0.0, 0.0)), Error);
}
