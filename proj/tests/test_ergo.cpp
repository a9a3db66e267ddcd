#include <doctest.h>

#include <cmath>

#include "gfe/ergo.hpp"

using namespace gfe;

TEST_SUITE("ergo") {

TEST_CASE("Lyapunov function is C1 with pure powers outside the bridge") {
    const ergo::LyapunovSpec V(1.5, 0.7);
    CHECK(V.value(0.2) == doctest::Approx(std::pow(0.2, -0.7)));
    CHECK(V.value(5.0) == doctest::Approx(std::pow(5.0, 1.5)));
    const double L = std::log(2.0);
    for (double z : {0.0, L}) {
        const double h = 1e-7;
        CHECK(V.log_value(z - h) == doctest::Approx(V.log_value(z + h)).epsilon(1e-6));
        CHECK(V.log_slope(z - h) == doctest::Approx(V.log_slope(z + h)).epsilon(1e-5));
    }
    // derivative against a centred difference inside the bridge
    const double x = 1.4, h = 1e-6;
    CHECK(V.derivative(x) == doctest::Approx((V.value(x + h) - V.value(x - h)) / (2 * h)).epsilon(1e-7));
    CHECK_THROWS_AS(ergo::LyapunovSpec(-1, 1), Error);
}

TEST_CASE("uniform-binary model is certified") {
    const auto m = Model::validate(linear_uniform_binary_spec(1, 4, 1));
    const auto rep = ergo::check_assumptions(m, 1.0, 1.0);
    CHECK(rep.M_A == doctest::Approx(2.0 / 3.0));
    CHECK(rep.brace_inf == doctest::Approx(-1.0 / 3.0));
    CHECK(rep.drift_conditions);
    CHECK(!rep.direction_discrepancy);
    const auto d = ergo::drift_profile(m, ergo::LyapunovSpec(1.0, 1.0), ergo::DriftOptions{1e-4, 1e4, 401, {}, {}});
    CHECK(d.certified);
    CHECK(d.alpha > 0.0);
    CHECK(d.violations.empty());
    // large-x drift ratio tends to the brace limit
    CHECK(ergo::drift_ratio(m, ergo::LyapunovSpec(1.0, 1.0), 1e6) == doctest::Approx(-1.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("Levy model is not certified and the discrepancy is flagged") {
    const auto m = Model::validate(linear_power_beta_spec(1, 4, 2));
    const auto rep = ergo::check_assumptions(m, 1.0, 1.0);
    CHECK(rep.brace_zero == doctest::Approx(3.0));
    CHECK(rep.rate_small);
    CHECK(!rep.drift_small);
    CHECK(rep.direction_discrepancy);
    const auto d = ergo::drift_profile(m, ergo::LyapunovSpec(1.0, 1.0), ergo::DriftOptions{1e-4, 1e4, 401, {}, {}});
    CHECK(!d.certified);
    CHECK(!d.violations.empty());
    CHECK(ergo::drift_ratio(m, ergo::LyapunovSpec(1.0, 1.0), 1e-6) == doctest::Approx(3.0).epsilon(1e-6));
    auto code = ErrorCode::IoError;
    try {
        ergo::check_assumptions(m, 1.0, 2.5);
    } catch (const Error& e) {
        code = e.code();
    }
    CHECK(code == ErrorCode::MomentDiverged);
}

}
