#include <cmath>
#include <numbers>

#include "doctest.h"
#include "prw/lattice.hpp"

using namespace prw;

namespace {
LatticePMF srw() { return LatticePMF::from_points({{-1, 0.5}, {1, 0.5}}); }
LatticePMF lazy_jump() { // frozen oracle: {0: 1/4, +-1: 3/8}
    return LatticePMF::from_points({{-1, 0.375}, {0, 0.25}, {1, 0.375}});
}
} // namespace

TEST_CASE("lattice construction and accessors") {
    LatticePMF u = LatticePMF::uniform(-2, 5, 1.0);
    CHECK(u.lo() == -2);
    CHECK(u.hi() == 2);
    CHECK(u.mass_at(0) == doctest::Approx(0.2));
    CHECK(u.mass_at(3) == 0.0);
    CHECK(u.total_mass() == doctest::Approx(1.0));
    CHECK(u.mean() == doctest::Approx(0.0));
    CHECK(u.second_moment() == doctest::Approx(2.0));
    CHECK(u.is_symmetric());
    u.validate();

    CHECK_THROWS_AS(LatticePMF(0, {0.6, 0.6}).validate(), Error);
    CHECK_THROWS_AS(LatticePMF(0, {-0.1, 1.1}), Error);
}

TEST_CASE("convolution composes defect multiplicatively") {
    LatticePMF a(0, {0.375, 0.375}, 0.25);
    LatticePMF c = convolve(a, a);
    CHECK(c.defect() == doctest::Approx(7.0 / 16.0)); // 1 - (3/4)^2
    CHECK(c.total_mass() + c.defect() == doctest::Approx(1.0));
    CHECK(c.mass_at(0) == doctest::Approx(0.375 * 0.375));
    CHECK(c.mass_at(1) == doctest::Approx(2 * 0.375 * 0.375));
}

TEST_CASE("n_fold matches binomial oracle") {
    LatticePMF s4 = n_fold(srw(), 4);
    CHECK(s4.mass_at(0) == doctest::Approx(6.0 / 16.0)); // C(4,2)/2^4
    CHECK(s4.mass_at(2) == doctest::Approx(4.0 / 16.0));
    CHECK(s4.mass_at(4) == doctest::Approx(1.0 / 16.0));
    CHECK(n_fold(srw(), 0).mass_at(0) == 1.0);
    // FFT path agrees with direct on a larger power
    LatticePMF big = n_fold(lazy_jump(), 512);
    CHECK(big.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(big.is_symmetric(1e-10));
}

TEST_CASE("char_fn oracle values") {
    // 1/4 + 3/4 cos t at t = pi gives -1/2
    CHECK(char_fn(lazy_jump(), std::numbers::pi).real() == doctest::Approx(-0.5));
    CHECK(char_fn(lazy_jump(), 0.0).real() == doctest::Approx(1.0));
    CHECK(char_fn(srw(), 1.0).real() == doctest::Approx(std::cos(1.0)));

    auto grid = char_fn_grid(lazy_jump(), 64);
    REQUIRE(grid.size() == 33);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double t = 2.0 * std::numbers::pi * static_cast<double>(j) / 64.0;
        CHECK(grid[j] == doctest::Approx(0.25 + 0.75 * std::cos(t)).epsilon(1e-12));
    }
}

TEST_CASE("two_sided_tail and concentration") {
    LatticePMF s2 = n_fold(srw(), 2); // {-2:1/4, 0:1/2, 2:1/4}
    CHECK(two_sided_tail(s2, 1) == doctest::Approx(0.5));
    CHECK(two_sided_tail(s2, 2) == doctest::Approx(0.5));
    CHECK(two_sided_tail(s2, 3) == doctest::Approx(0.0));
    CHECK(concentration(s2, 1.0) == doctest::Approx(0.5));
    CHECK(concentration(s2, 2.0) == doctest::Approx(0.75));
    CHECK(concentration(s2, 0.0) == doctest::Approx(0.5));
}

TEST_CASE("positivity radius of the lazy jump") {
    // 1/4 + 3/4 cos t >= 0 iff |t| <= arccos(-1/3)
    double p = positivity_radius(lazy_jump());
    CHECK(p == doctest::Approx(std::acos(-1.0 / 3.0)).epsilon(2e-3));
    CHECK(positivity_radius(srw()) == doctest::Approx(std::numbers::pi / 2).epsilon(2e-3));
}

TEST_CASE("alternating sums") {
    LatticePMF d1 = LatticePMF::delta(1);
    CHECK(alternating_sum_pmf(d1, 3).mass_at(1) == doctest::Approx(1.0));
    CHECK(alternating_sum_pmf(d1, 2).mass_at(0) == doctest::Approx(1.0));
    LatticePMF nu12 = LatticePMF::from_points({{1, 0.5}, {2, 0.5}});
    LatticePMF a2 = alternating_sum_pmf(nu12, 2); // tau1 - tau2
    CHECK(a2.mass_at(-1) == doctest::Approx(0.25));
    CHECK(a2.mass_at(0) == doctest::Approx(0.5));
    CHECK(a2.mass_at(1) == doctest::Approx(0.25));
    CHECK_THROWS_AS(alternating_sum_pmf(LatticePMF::delta(0), 2), Error);
}

TEST_CASE("geometric mixture reproduces the frozen jump law") {
    // nu = delta_1, p_stay = 1/3: X = 0 w.p. 1/4, +-1 w.p. 3/8
    double trunc = 0;
    LatticePMF mix = geometric_mixture(LatticePMF::delta(1), 1.0 / 3.0, 64, 1e-12, &trunc);
    CHECK(trunc < 1e-12);
    CHECK(mix.mass_at(0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(mix.mass_at(1) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(mix.mass_at(-1) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(mix.is_symmetric());
    CHECK_THROWS_AS(geometric_mixture(LatticePMF::delta(1), 0.9, 4, 1e-12), Error);
}

TEST_CASE("symmetrize and reflect") {
    LatticePMF d2 = LatticePMF::delta(2);
    LatticePMF s = symmetrize(d2);
    CHECK(s.mass_at(2) == doctest::Approx(0.5));
    CHECK(s.mass_at(-2) == doctest::Approx(0.5));
    CHECK(s.is_symmetric());
    CHECK(d2.reflected().mass_at(-2) == 1.0);
}

TEST_CASE("support cap raises") {
    LatticeConfig tight;
    tight.support_cap = 8;
    LatticePMF u = LatticePMF::uniform(0, 6);
    CHECK_THROWS_AS(convolve(u, u, tight), SupportCapError);
}
