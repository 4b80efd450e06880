#include <set>

#include "doctest.h"
#include "prw/quadcomb.hpp"

using namespace prw;

TEST_CASE("config indexing is a bijection on the 12 off-diagonal pairs") {
    std::set<int> seen;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            Config c{static_cast<Letter>(a), static_cast<Letter>(b)};
            int i = config_index(c);
            CHECK(i >= 0);
            CHECK(i < kNumConfigs);
            CHECK(config_from_index(i) == c);
            CHECK(config_from_name(config_name(c)) == c);
            seen.insert(i);
        }
    CHECK(seen.size() == 12);
}

TEST_CASE("letters and successors") {
    CHECK(opposite(Letter::E) == Letter::W);
    CHECK(opposite(Letter::N) == Letter::S);
    CHECK(direction(Letter::S) == IVec2{0, -1});
    CHECK(is_horizontal(Letter::W));
    CHECK(!is_horizontal(Letter::N));
    auto succ = successors(Letter::E);
    // everything but E itself, in E<N<W<S order
    CHECK(succ[0] == Letter::N);
    CHECK(succ[1] == Letter::W);
    CHECK(succ[2] == Letter::S);
    CHECK(letter_from_char(letter_char(Letter::N)) == Letter::N);
}

TEST_CASE("drrw_to_quadcomb encodes hazards and turn rows") {
    DRRWSpec dr; // nu = delta_1 on both axes, p = 1/3
    QuadCombSpec q = drrw_to_quadcomb(dr, 1);
    q.validate();
    for (int c = 0; c < kNumConfigs; ++c) {
        CHECK(q.alpha_at(c, 1) == doctest::Approx(1.0)); // delta_1: change at once
        Config cfg = config_from_index(c);
        auto succ = successors(cfg.cur);
        for (int s = 0; s < 3; ++s) {
            double expect = succ[static_cast<std::size_t>(s)] == opposite(cfg.cur)
                                ? 1.0 / 3.0
                                : 1.0 / 3.0;
            CHECK(q.turn_at(c, s, 1) == doctest::Approx(expect));
        }
        CHECK(q.survival(c) == doctest::Approx(0.0));
    }

    // geometric persistence: nu(n) = (1/2)^n gives constant hazard 1/2
    DRRWSpec geo;
    std::vector<double> mass;
    for (int n = 1; n <= 40; ++n) mass.push_back(std::pow(0.5, n));
    mass.back() *= 2; // lump the tail to keep the law proper
    geo.nu_h = geo.nu_v = LatticePMF(1, mass);
    QuadCombSpec qg = drrw_to_quadcomb(geo, 8);
    for (int n = 1; n <= 8; ++n) CHECK(qg.alpha_at(0, n) == doctest::Approx(0.5));
}

TEST_CASE("drrw_to_quadcomb pads vanished tails with certain change") {
    // run lengths past the support are unreachable; their hazard is one
    DRRWSpec dr;
    QuadCombSpec q = drrw_to_quadcomb(dr, 4);
    q.validate();
    for (int n = 1; n <= 4; ++n) CHECK(q.alpha_at(0, n) == doctest::Approx(1.0));
}

TEST_CASE("simulate_prw is deterministic and emits admissible paths") {
    QuadCombSpec q = drrw_to_quadcomb(DRRWSpec{}, 1);
    Trajectory t1 = simulate_prw(q, 500, 42, 7);
    Trajectory t2 = simulate_prw(q, 500, 42, 7);
    Trajectory t3 = simulate_prw(q, 500, 43, 7);
    CHECK(t1.letters == t2.letters);
    CHECK(t1.letters != t3.letters);
    REQUIRE(t1.positions.size() == 501);
    CHECK(t1.positions[0] == IVec2{0, 0});
    // with delta_1 persistence every consecutive pair differs
    for (std::size_t k = 0; k + 1 < t1.letters.size(); ++k)
        CHECK(t1.letters[k] != t1.letters[k + 1]);
    for (std::size_t k = 0; k < t1.letters.size(); ++k)
        CHECK(t1.positions[k + 1] - t1.positions[k] == direction(t1.letters[k]));
}

TEST_CASE("PrwStepper reproduces simulate_prw exactly") {
    DRRWSpec dr;
    dr.nu_h = dr.nu_v = LatticePMF::from_points({{1, 0.5}, {2, 0.25}, {3, 0.25}});
    QuadCombSpec q = drrw_to_quadcomb(dr, 3);
    Trajectory t = simulate_prw(q, 1000, 99, 3);
    PrwStepper st(q, 99, 3);
    for (std::size_t k = 0; k < t.letters.size(); ++k) {
        CHECK(st.step() == t.letters[k]);
        CHECK(st.position() == t.positions[k + 1]);
    }
    CHECK(st.steps_taken() == 1000);
}

TEST_CASE("spec validation rejects broken turn rows") {
    QuadCombSpec q = drrw_to_quadcomb(DRRWSpec{}, 1);
    q.turn[0][0][0] += 0.5;
    CHECK_THROWS_AS(q.validate(), Error);
}
