#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gfe/levy.hpp"

using namespace gfe;

TEST_SUITE("levy") {

const levy::LevyParams p{1.0, 4.0, 2.0};

TEST_CASE("Laplace exponent and cumulant") {
    CHECK(levy::psi(p, 0.0) == 0.0);
    CHECK(std::abs(levy::psi(p, 2.0)) < 1e-14);
    // theta (theta - 2) / (theta + 2) at theta = 1
    CHECK(levy::psi(p, 1.0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
    CHECK(levy::kappa(p, 0.0) == doctest::Approx(4.0).epsilon(1e-14));
    // the same value as lambda beta int_0^1 (v^(beta-2) - v^(beta-1)) dv
    const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [](double v) { return 8.0 * (1.0 - v); }, 0.0, 1.0);
    CHECK(levy::kappa(p, 0.0) == doctest::Approx(integral).epsilon(1e-12));
    CHECK_THROWS_AS(levy::psi(p, -2.0), Error);
}

TEST_CASE("theta0 and rho") {
    const auto tr = levy::theta0_rho(p);
    CHECK(std::abs(tr.theta0 - (2 * std::sqrt(2.0) - 1)) < 1e-12);
    CHECK(std::abs(tr.rho - (4 * std::sqrt(2.0) - 5)) < 1e-12);
    const double h = 1e-5;
    const double dk = (levy::kappa(p, tr.theta0 + h) - levy::kappa(p, tr.theta0 - h)) / (2 * h);
    CHECK(std::abs(dk) < 1e-9);
    CHECK(levy::kappa_second(p, tr.theta0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
    auto code = ErrorCode::IoError;
    try {
        levy::theta0_rho(levy::LevyParams{1.0, 2.0, 2.0});
    } catch (const Error& e) {
        code = e.code();
    }
    CHECK(code == ErrorCode::DriftZero);
}

TEST_CASE("first-return transform") {
    const auto tr = levy::theta0_rho(p);
    CHECK(levy::Phi(p, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(levy::L_closed(p, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    // root of theta^2 - 2.5 theta - 1 = 0, then 1 - psi'
    const double th = (2.5 + std::sqrt(2.5 * 2.5 + 4.0)) / 2.0;
    CHECK(levy::L_closed(p, 1.5) == doctest::Approx(1.0 - levy::psi_prime(p, th)).epsilon(1e-10));
    CHECK(std::round(levy::L_closed(p, 1.5) * 1000) / 1000 == doctest::Approx(0.340));
    CHECK(levy::L_closed(p, tr.rho) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(levy::L_closed(p, tr.rho - 0.1), Error);
    // finite-difference check of -L'
    const double h = 1e-6;
    CHECK(levy::minus_Lprime_closed(p, 1.2) ==
          doctest::Approx(-(levy::L_closed(p, 1.2 + h) - levy::L_closed(p, 1.2 - h)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("eigenfunction and profile") {
    CHECK(levy::ell_closed(p, 1.0, 1.0) == 1.0);
    CHECK(levy::ell_closed(p, 2.0, 1.0) == doctest::Approx(std::pow(2.0, 2 * std::sqrt(2.0) - 2)).epsilon(1e-14));
    CHECK(levy::ell_closed(p, 2.0, 1.0) == doctest::Approx(1.7757).epsilon(1e-4));
    CHECK(levy::ell_closed(p, 2.0, 3.0) * levy::ell_closed(p, 3.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    const double th = levy::theta0_rho(p).theta0;
    CHECK(levy::profile_integral(p, TestFunction::indicator(1.0, 2.0)) ==
          doctest::Approx((1.0 - std::pow(2.0, -th)) / th).epsilon(1e-10));
    CHECK(levy::asymptotic_value(p, 20.0, TestFunction::zero(), 1.0) == 0.0);
    CHECK_THROWS_AS(levy::profile_integral(p, TestFunction::identity()), Error);
}

}
