#include "doctest.h"
#include "prw/skeleton.hpp"

using namespace prw;

namespace {
QuadCombSpec base_spec() { return drrw_to_quadcomb(DRRWSpec{}, 1); }
} // namespace

TEST_CASE("build_kernel for the memoryless reversal walk") {
    InternalKernel k = build_kernel(base_spec());
    REQUIRE(k.size() == 12);
    for (int i = 0; i < 12; ++i) {
        Config ci = config_from_index(k.states[static_cast<std::size_t>(i)]);
        auto succ = successors(ci.cur);
        double row = 0;
        for (int j = 0; j < 12; ++j) {
            double pij = k.matrix(i, j);
            row += pij;
            Config cj = config_from_index(k.states[static_cast<std::size_t>(j)]);
            if (pij > 0) {
                CHECK(cj.prev == ci.cur); // admissible transition shape
                CHECK(pij == doctest::Approx(1.0 / 3.0));
            }
            (void)succ;
        }
        CHECK(row == doctest::Approx(1.0));
        // full symmetry: the stationary law is uniform
        CHECK(k.pi(i) == doctest::Approx(1.0 / 12.0));
        CHECK(k.local_index(k.states[static_cast<std::size_t>(i)]) == i);
    }
}

TEST_CASE("stationary solves pi P = pi") {
    Eigen::MatrixXd P(2, 2);
    P << 0.9, 0.1, 0.4, 0.6;
    Eigen::VectorXd pi = stationary(P);
    CHECK(pi(0) == doctest::Approx(0.8)); // 0.4/(0.1+0.4)
    CHECK(pi(1) == doctest::Approx(0.2));

    Eigen::MatrixXd red = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(stationary(red), Error);
}

TEST_CASE("conditional jump laws respect the mixture identity") {
    DRRWSpec dr;
    dr.nu_h = dr.nu_v = LatticePMF::from_points({{1, 0.5}, {2, 0.5}});
    QuadCombSpec q = drrw_to_quadcomb(dr, 2);
    InternalKernel k = build_kernel(q);
    ConditionalJumpLaws laws = build_jump_laws(q, k);
    CHECK(laws.mixture_residual(k) < 1e-12);
    for (int i = 0; i < k.size(); ++i) {
        CHECK(laws.nu_total[static_cast<std::size_t>(i)].total_mass() ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(laws.nu_total[static_cast<std::size_t>(i)].lo() >= 1);
    }
}

TEST_CASE("extract_skeleton hand trace") {
    // X_0 = n implicit; letters e,e,n,w,w,w
    Trajectory tr;
    IVec2 pos{0, 0};
    for (char ch : std::string("eenwww")) {
        Letter l = letter_from_char(ch);
        tr.letters.push_back(l);
        if (tr.positions.empty()) tr.positions.push_back(pos);
        pos = pos + direction(l);
        tr.positions.push_back(pos);
    }
    Skeleton sk = extract_skeleton(tr);
    CHECK(sk.has_break);
    REQUIRE(sk.breaking_times.size() == 3);
    CHECK(sk.breaking_times[0] == 0);
    CHECK(sk.breaking_times[1] == 2);
    CHECK(sk.breaking_times[2] == 3);
    CHECK(sk.configs[0] == Config{Letter::N, Letter::E});
    CHECK(sk.configs[1] == Config{Letter::E, Letter::N});
    CHECK(sk.configs[2] == Config{Letter::N, Letter::W});
    CHECK(sk.points[0] == IVec2{0, 0});
    CHECK(sk.points[1] == IVec2{2, 0});
    CHECK(sk.points[2] == IVec2{2, 1});

    Trajectory flat;
    flat.positions.push_back({0, 0});
    for (int i = 0; i < 5; ++i) {
        flat.letters.push_back(Letter::E);
        flat.positions.push_back({i + 1, 0});
    }
    Skeleton sf = extract_skeleton(flat, Letter::E);
    CHECK(!sf.has_break);
}

TEST_CASE("drrw_margin_jumps matches the direct geometric mixture") {
    DRRWSpec dr; // delta_1, p = 1/3 on both axes
    auto [h, v] = drrw_margin_jumps(dr, 64);
    for (const LatticePMF* m : {&h, &v}) {
        CHECK(m->mass_at(0) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(m->mass_at(1) == doctest::Approx(0.375).epsilon(1e-12));
        CHECK(m->mass_at(-1) == doctest::Approx(0.375).epsilon(1e-12));
        CHECK(m->is_symmetric());
    }
}
