#include <doctest.h>

#include <cmath>

#include "gfe/error.hpp"
#include "gfe/test_function.hpp"

using gfe::TestFunction;

TEST_SUITE("test_function") {

TEST_CASE("bump shape and support") {
    const auto f = TestFunction::parse("bump:center,1.0;width,0.5");
    const auto g = TestFunction::parse("bump:1.0;0.5");
    CHECK(f(1.0) == doctest::Approx(1.0));
    CHECK(g(1.3) == f(1.3));
    CHECK(f(std::exp(0.5)) == 0.0);
    CHECK(f(std::exp(-0.51)) == 0.0);
    const double s = 0.25 / 0.5;
    CHECK(f(std::exp(0.25)) == doctest::Approx(std::exp(1.0 - 1.0 / (1.0 - s * s))));
    CHECK(f.log_support_lo() == doctest::Approx(-0.5));
    CHECK(f.log_support_hi() == doctest::Approx(0.5));
}

TEST_CASE("power, identity, indicator and scaling") {
    CHECK(TestFunction::parse("id")(3.5) == 3.5);
    CHECK(TestFunction::parse("power:2")(3.0) == doctest::Approx(9.0));
    const auto ind = TestFunction::parse("indicator:1;inf");
    CHECK(ind(0.999) == 0.0);
    CHECK(ind(1.0) == 1.0);
    CHECK(ind(1e300) == 1.0);
    CHECK(TestFunction::parse("power:0.5").scaled(2.0)(4.0) == doctest::Approx(4.0));
    CHECK(TestFunction::zero()(2.0) == 0.0);
}

TEST_CASE("over_mass stays finite far outside double range") {
    const auto id = TestFunction::identity();
    CHECK(id.over_mass_at_log(-2000.0) == 1.0);
    const auto p = TestFunction::power(1.5);
    CHECK(p.over_mass_at_log(-2000.0) == doctest::Approx(std::exp(-1000.0)).epsilon(1e-12));
}

TEST_CASE("malformed specs are config errors") {
    CHECK_THROWS_AS(TestFunction::parse("bump:1.0"), gfe::Error);
    CHECK_THROWS_AS(TestFunction::parse("wiggle:3"), gfe::Error);
    auto code = gfe::ErrorCode::IoError;
    try {
        TestFunction::parse("power:x");
    } catch (const gfe::Error& e) {
        code = e.code();
    }
    CHECK(code == gfe::ErrorCode::ConfigError);
}

}
