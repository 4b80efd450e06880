#include <cmath>

#include "doctest.h"
#include "prw/logreal.hpp"

using prw::LogReal;

TEST_CASE("logreal double round trip and basic arithmetic") {
    // the round trip passes through exp(log(v)), so it is correct to a few
    // ulp of the log, not bit-exact
    for (double v : {0.0, 1.0, -1.0, 0.5, -3.25, 1e-200, 1e200, 123456.789}) {
        LogReal r = LogReal::from_double(v);
        CHECK(r.to_double() == doctest::Approx(v).epsilon(1e-12));
    }
    LogReal a = LogReal::from_double(3.0), b = LogReal::from_double(-2.0);
    CHECK((a + b).to_double() == doctest::Approx(1.0));
    CHECK((a - b).to_double() == doctest::Approx(5.0));
    CHECK((a * b).to_double() == doctest::Approx(-6.0));
    CHECK((a / b).to_double() == doctest::Approx(-1.5));
    CHECK(a.pow(3.0).to_double() == doctest::Approx(27.0));
    CHECK(a.pow(-0.5).to_double() == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("logreal log and exp are inverse up to log-layer rounding") {
    for (double m : {1.5, 300.0, 1e6, 2.2250738585072014e5}) {
        LogReal p = LogReal::exp_of(LogReal::from_double(-m));
        CHECK((-p.log()).to_double() == doctest::Approx(m).epsilon(1e-13));
    }
}

TEST_CASE("logreal tower comparisons") {
    LogReal huge = LogReal::exp_of(LogReal::from_double(1e10)); // exp(1e10)
    LogReal huger = LogReal::exp_of(huge);                      // exp(exp(1e10))
    CHECK(huge < huger);
    CHECK(huger > LogReal::from_double(1e300));
    CHECK(huge.inverse() < LogReal::from_double(1e-300));
    CHECK(huge.inverse() > LogReal());
    CHECK(std::isinf(huge.to_double()));
    CHECK(huge.inverse().to_double() == 0.0);
    // same-tower mantissa arithmetic is exact
    LogReal x = huge.pow(2.0);
    CHECK((x / huge) == huge);
    CHECK((huge * huge) == x);
}

TEST_CASE("logreal str/parse round trip") {
    std::vector<LogReal> vals = {
        LogReal(),
        LogReal::one(),
        -LogReal::one(),
        LogReal::from_double(0.125),
        LogReal::from_double(-7.5e100),
        LogReal::exp_of(LogReal::from_double(1e8)),
        LogReal::exp_of(LogReal::exp_of(LogReal::from_double(750.0))),
        LogReal::exp_of(LogReal::from_double(-5e7)),
    };
    for (const LogReal& v : vals) {
        LogReal back = LogReal::parse(v.str());
        CHECK(back.cmp(v) == 0);
        CHECK(back.str() == v.str());
    }
    CHECK_THROWS_AS(LogReal::parse("exp(banana)"), prw::Error);
}

TEST_CASE("logreal error contracts") {
    CHECK_THROWS_AS(LogReal().log(), prw::Error);
    CHECK_THROWS_AS((-LogReal::one()).log(), prw::Error);
    CHECK_THROWS_AS(LogReal().inverse(), prw::Error);
    CHECK_THROWS_AS((-LogReal::one()).pow(2.0), prw::Error);
    CHECK_THROWS_AS(LogReal::from_double(std::nan("")), prw::Error);
}
