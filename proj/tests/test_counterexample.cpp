#include <cmath>
#include <set>
#include <utility>

#include "doctest.h"
#include "prw/counterexample.hpp"
#include "prw/lattice.hpp"

using namespace prw;

TEST_CASE("parameter validation") {
    CexParams ok;
    ok.validate();
    CexParams bad = ok;
    bad.p2 = 0.7; // must stay below 1 - r = 0.5
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("level-2 exact structure") {
    CexParams p;
    CexSequence seq = build_sequence(p, 4);
    REQUIRE(seq.K == 4);
    const CexLevel& l2 = seq.at(2);
    CHECK(l2.numeric);
    CHECK(l2.a == doctest::Approx(std::log(5.0)).epsilon(1e-12)); // p_2 = 0.2
    // the CondConst5 ratio is pinned at the midpoint of [1/v_2, c/2^{2+delta}]
    double v2 = std::pow(2.0, 2.5);
    CHECK(l2.vr == doctest::Approx(0.5 * (1.0 / v2 + 2.0 / v2)).epsilon(1e-12));
    // residual identities: ln y = 2a + ry, ln l = ln y + a/2 + rl
    double lny = 2 * l2.a + l2.ry;
    double lnl = lny + l2.a / 2 + l2.rl;
    CHECK(l2.y.log().to_double() == doctest::Approx(lny).epsilon(1e-12));
    CHECK(l2.l.log().to_double() == doctest::Approx(lnl).epsilon(1e-12));
    // ln(1/p_3) = vr l_2^2 p_2^2
    double lhs = (-seq.p_after(2).log()).to_double();
    CHECK(lhs == doctest::Approx(l2.vr * std::exp(2 * lnl - 2 * l2.a)).epsilon(1e-9));
}

TEST_CASE("sequence structure: masses, monotonicity, residual") {
    CexParams p;
    CexSequence seq = build_sequence(p, 8);
    // the final residual is exactly p_{K+1}
    CHECK(seq.at(8).q.cmp(seq.p_next) == 0);
    LogReal total;
    for (int k = 1; k <= 8; ++k) total = total + seq.at(k).p;
    total = total + seq.p_next;
    CHECK((total - LogReal::one()).is_zero());
    for (int k = 2; k <= 8; ++k) {
        CHECK(seq.at(k).p < seq.at(k - 1).p);
        CHECK(seq.at(k).y > seq.at(k - 1).y);
        CHECK(seq.at(k).l > LogReal::one());
    }
}

TEST_CASE("every constraint verifies across numeric, shallow and deep levels") {
    CexParams p;
    CexSequence seq = build_sequence(p, 12);
    auto rows = verify_constraints(seq, p);
    CHECK(rows.size() > 50);
    for (const ConstraintRow& r : rows) {
        INFO("k=" << r.k << " " << r.name << " lhs=" << r.lhs << " rhs=" << r.rhs);
        CHECK(r.pass);
    }
    // deep levels are reached within 12 steps
    CHECK(!seq.at(12).numeric);
    CHECK(std::isinf(seq.at(12).a));
}

TEST_CASE("upper bound series stays below the zeta envelope") {
    CexParams p;
    CexSequence seq = build_sequence(p, 12);
    BoundSeries s = bound_upper_series(seq, 12);
    REQUIRE(s.terms.size() == 11); // k = 2..12
    double zeta = std::riemann_zeta(1.0 + p.delta / 2.0);
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        double k = static_cast<double>(s.k[i]);
        CHECK(s.terms[i] <= std::sqrt(p.c) * std::pow(k, -1.0 - p.delta / 2.0) + 1e-12);
        CHECK(s.terms[i] == doctest::Approx(std::sqrt(seq.at(s.k[i]).vr)).epsilon(1e-12));
    }
    CHECK(s.partial.back() < std::sqrt(p.c) * zeta);
}

TEST_CASE("lower bound terms dominate u_k / v_k") {
    CexParams p;
    CexSequence seq = build_sequence(p, 12);
    BoundSeries s = bound_lower_terms(seq, 12);
    for (std::size_t i = 0; i < s.terms.size(); ++i)
        CHECK(s.terms[i] >= p.u_k(s.k[i]) / p.v_k(s.k[i]) - 1e-9);
    CHECK(s.partial.back() > 50.0); // diverging harmonic-type sum
}

TEST_CASE("uniform sum concentration inequality") {
    double mm = 0, bd = 0;
    CHECK(unif_concentration_check(2, 2, &mm, &bd));
    CHECK(mm == doctest::Approx(0.5));  // equality case
    CHECK(bd == doctest::Approx(0.5));
    // the bound constant is too small for very short intervals: the local
    // CLT gives max mass ~ sqrt(6/(pi m (l^2-1))), which exceeds
    // (1/l) sqrt(2/m) when l <= 4. The checker must report those honestly;
    // the first counterexample is B(4,1/2): 6/16 > (1/2) sqrt(1/2).
    std::set<std::pair<int, int>> expected_violations = {{2, 4}, {2, 6}, {3, 6}};
    for (int l = 2; l <= 8; ++l)
        for (int m = 1; m <= 6; ++m) {
            bool ok = unif_concentration_check(l, m);
            CHECK(ok == !expected_violations.count({l, m}));
        }
    unif_concentration_check(2, 4, &mm, &bd);
    CHECK(mm == doctest::Approx(0.375));
    CHECK(bd == doctest::Approx(std::sqrt(0.5) / 2.0));
}

TEST_CASE("omega function is positive and decreasing") {
    double prev = 1e300;
    for (double p : {0.05, 0.1, 0.3, 0.5, 0.9}) {
        double w = omega_fn(p);
        CHECK(w > std::sqrt(2.0));
        CHECK(w < prev);
        prev = w;
    }
}

TEST_CASE("binomial inverse square root bound") {
    double lhs = 0, rhs = 0;
    CHECK(binom_inverse_sqrt_check(1, 0.5, &lhs, &rhs));
    CHECK(lhs == doctest::Approx(0.5));
    CHECK(rhs == doctest::Approx(omega_fn(0.5)));
    for (int n : {1, 2, 5, 10, 50, 200})
        for (double p : {0.1, 0.3, 0.5, 0.9}) CHECK(binom_inverse_sqrt_check(n, p));
}

TEST_CASE("auxiliary jump law matches the geometric mixture") {
    LatticePMF law = step3_jump_law(LatticePMF::delta(1), 64);
    CHECK(law.mass_at(0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(law.mass_at(1) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(law.mass_at(-1) == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("interval measures and the dense waiting distribution") {
    CexParams p;
    CexSequence seq = build_sequence(p, 4);
    IntervalPMF m2 = mu_k(seq, 2);
    m2.validate();
    CHECK((m2.total_mass() - LogReal::one()).is_zero());

    LatticePMF w = waiting_distribution(seq, 2, 100000);
    CHECK(w.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(w.lo() >= 1);
    CHECK_THROWS_AS(waiting_distribution(seq, 4, 100000), Error); // tower-sized support
}

TEST_CASE("toy-scale recursion holds exactly") {
    ToyParams toy;
    toy.levels = {{1, 1, 0.5}, {2, 2, 0.01}, {4, 4, 0.002}};
    ToyReport rep = toy_scale_validation(toy, 3, 256);
    CHECK(rep.recursion_checks > 0);
    CHECK(rep.recursion_violations == 0);
    CHECK(rep.max_ratio <= 1.0);
    CHECK(rep.defect_exact);
    REQUIRE(rep.sq_sums.size() == 3);
    for (double s : rep.sq_sums) CHECK(s > 0);
}
