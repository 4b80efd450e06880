#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "prw/json_io.hpp"

using namespace prw;

TEST_CASE("pmf json round trip") {
    LatticePMF a(-3, {0.1, 0.2, 0.3, 0.15}, 0.25);
    LatticePMF b = pmf_from_json(pmf_to_json(a));
    CHECK(b.offset() == a.offset());
    CHECK(b.masses() == a.masses());
    CHECK(b.defect() == a.defect());
    CHECK_THROWS_AS(pmf_from_json("{\"offset\": 1}"), Error);
}

TEST_CASE("drrw model round trip") {
    DRRWSpec d;
    d.nu_h = LatticePMF::from_points({{1, 0.5}, {3, 0.5}});
    d.p_v = 0.25;
    ModelSpec back = model_from_json(model_to_json(d));
    REQUIRE(std::holds_alternative<DRRWSpec>(back));
    const DRRWSpec& r = std::get<DRRWSpec>(back);
    CHECK(r.nu_h.mass_at(3) == 0.5);
    CHECK(r.p_h == d.p_h);
    CHECK(r.p_v == 0.25);
}

TEST_CASE("quadcomb model round trip") {
    QuadCombSpec q = drrw_to_quadcomb(DRRWSpec{}, 1);
    ModelSpec back = model_from_json(model_to_json(q));
    REQUIRE(std::holds_alternative<QuadCombSpec>(back));
    const QuadCombSpec& r = std::get<QuadCombSpec>(back);
    CHECK(r.n_max == q.n_max);
    CHECK(r.tail == q.tail);
    for (int c = 0; c < kNumConfigs; ++c) {
        CHECK(r.alpha[static_cast<std::size_t>(c)] == q.alpha[static_cast<std::size_t>(c)]);
        CHECK(r.turn[static_cast<std::size_t>(c)] == q.turn[static_cast<std::size_t>(c)]);
    }
    CHECK_THROWS_AS(model_from_json("{\"other\": 1}"), Error);
}

TEST_CASE("as_quadcomb tabulates a drrw to its support") {
    DRRWSpec d;
    d.nu_h = LatticePMF::from_points({{1, 0.5}, {2, 0.5}});
    QuadCombSpec q = as_quadcomb(d);
    CHECK(q.n_max == 2);
    q.validate();
}

TEST_CASE("cex params round trip with defaults") {
    CexParams p;
    p.c = 3.0;
    p.u_pow = 1.5;
    CexParams r = cex_params_from_json(cex_params_to_json(p));
    CHECK(r.c == 3.0);
    CHECK(r.u_pow == 1.5);
    CHECK(r.delta == p.delta);
}

TEST_CASE("cex sequence round trip preserves tower values exactly") {
    CexParams p;
    CexSequence seq = build_sequence(p, 10);
    CexSequence back = cex_sequence_from_json(cex_sequence_to_json(seq));
    REQUIRE(back.K == seq.K);
    for (int k = 1; k <= seq.K; ++k) {
        CHECK(back.at(k).y.cmp(seq.at(k).y) == 0);
        CHECK(back.at(k).l.cmp(seq.at(k).l) == 0);
        CHECK(back.at(k).p.cmp(seq.at(k).p) == 0);
        CHECK(back.at(k).q.cmp(seq.at(k).q) == 0);
        CHECK(back.at(k).vr == seq.at(k).vr);
        CHECK(back.at(k).ry == seq.at(k).ry);
        CHECK(back.at(k).rl == seq.at(k).rl);
        // a/lna may be +inf; JSON null must map back to +inf
        CHECK(((back.at(k).a == seq.at(k).a) ||
               (std::isinf(back.at(k).a) && std::isinf(seq.at(k).a))));
        CHECK(back.at(k).a_cert == seq.at(k).a_cert);
        CHECK(back.at(k).numeric == seq.at(k).numeric);
    }
    CHECK(back.p_next.cmp(seq.p_next) == 0);
    // the rebuilt sequence verifies just like the original
    for (const ConstraintRow& r : verify_constraints(back, p)) CHECK(r.pass);
}

TEST_CASE("text file round trip") {
    const char* path = "json_io_test_tmp.txt";
    write_text_file(path, "hello\nworld\n");
    CHECK(read_text_file(path) == "hello\nworld\n");
    std::remove(path);
    CHECK_THROWS_AS(read_text_file("definitely/not/a/file"), Error);
}
