#include <cmath>
#include <numbers>

#include "doctest.h"
#include "prw/criteria.hpp"
#include "prw/skeleton.hpp"

using namespace prw;

namespace {
LatticePMF lazy_jump() {
    return LatticePMF::from_points({{-1, 0.375}, {0, 0.25}, {1, 0.375}});
}
} // namespace

TEST_CASE("first series term has the closed form") {
    // a_0 = P(one jump lands at 0) * P(jump >= 0) = 1/4 * 5/8
    CriterionTerms t = series_criterion_terms(lazy_jump(), lazy_jump(), 1);
    REQUIRE(t.a.size() == 1);
    CHECK(t.a[0] == doctest::Approx(5.0 / 32.0).epsilon(1e-12));
    CHECK(t.b[0] == doctest::Approx(5.0 / 32.0).epsilon(1e-12));
}

TEST_CASE("dense and spectral engines agree") {
    TermsOptions dense, spectral;
    dense.engine = TermsOptions::Engine::Dense;
    spectral.engine = TermsOptions::Engine::Spectral;
    CriterionTerms td = series_criterion_terms(lazy_jump(), lazy_jump(), 64, dense);
    CriterionTerms ts = series_criterion_terms(lazy_jump(), lazy_jump(), 64, spectral);
    REQUIRE(td.a.size() == 64);
    REQUIRE(ts.a.size() == 64);
    for (std::size_t n = 0; n < 64; ++n) {
        CHECK(td.a[n] == doctest::Approx(ts.a[n]).epsilon(1e-10));
        CHECK(td.b[n] == doctest::Approx(ts.b[n]).epsilon(1e-10));
        CHECK(td.a[n] >= 0.0);
        CHECK(td.a[n] <= 1.0);
    }
}

TEST_CASE("classification of the basic reversal walk") {
    ClassifyReport rep = classify_drrw(DRRWSpec{}, 1024);
    CHECK(rep.verdict == Verdict::RecurrentAtN);
    CHECK(rep.sum_a > 0);
    CHECK(rep.slope_a > 0);
    CHECK(rep.gamma_a == doctest::Approx(1.0).epsilon(0.15)); // a_n ~ c/n
}

TEST_CASE("fourier double integral contract and monotonicity in r") {
    CHECK_THROWS_AS(
        fourier_double_integral(lazy_jump(), lazy_jump(), 0.5, 64, 1.0, false),
        ContractError);
    double i5 = fourier_double_integral(lazy_jump(), lazy_jump(), 0.5, 64, 1.0, true);
    double i9 = fourier_double_integral(lazy_jump(), lazy_jump(), 0.9, 64, 1.0, true);
    CHECK(i5 > 0);
    CHECK(i9 > i5);
}

TEST_CASE("concentration sandwich holds on the lazy jump") {
    // lambda must clear L/p = 12 pi / arccos(-1/3), about 19.7
    ConcentrationReport rep =
        concentration_sandwich_check(lazy_jump(), 60, {20.0, 40.0, 80.0, 160.0});
    CHECK(rep.p == doctest::Approx(std::acos(-1.0 / 3.0)).epsilon(2e-3));
    CHECK(rep.evaluated > 0);
    CHECK(rep.violations == 0);
    CHECK(rep.c_hat >= 1.0);
}

TEST_CASE("esseen bounds are finite and ordered") {
    EsseenReport rep = esseen_bounds_check(lazy_jump(), 16, 8.0);
    CHECK(rep.q > 0);
    CHECK(rep.q <= 1.0);
    CHECK(rep.integral > 0);
    CHECK(rep.ratio > 0);
    CHECK(rep.ratio < 10.0);
    // lambda below the positivity threshold is rejected
    CHECK_THROWS_AS(esseen_bounds_check(lazy_jump(), 16, 1.0), ContractError);
}

TEST_CASE("backtracking maximum bound by exact enumeration") {
    for (int n : {1, 2, 4}) {
        BacktrackReport rep = backtrack_max_bound_check(LatticePMF::delta(1), 1.0 / 3.0, n, 64);
        CHECK(rep.pass);
        CHECK(rep.lhs <= rep.rhs + 1e-12);
    }
    LatticePMF nu12 = LatticePMF::from_points({{1, 0.5}, {2, 0.5}});
    BacktrackReport rep = backtrack_max_bound_check(nu12, 0.5, 3, 64);
    CHECK(rep.pass);
}
