#include <doctest.h>

#include <cmath>
#include <vector>

#include "gfe/levy.hpp"
#include "gfe/tilt.hpp"

using namespace gfe;

TEST_SUITE("tilt") {

TEST_CASE("ell = 1 reproduces the base simulation event for event") {
    const auto m = Model::validate(linear_uniform_binary_spec(1, 4, 1));
    const TiltedModel tm(m, Eigenfunction::constant_one(), 1.0);
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto r1 = path_stream(9, s);
        auto r2 = path_stream(9, s);
        const auto a = simulate_path(m, 1.0, 10.0, r1);
        const auto b = simulate_tilted(tm, 1.0, 10.0, r2);
        REQUIRE(a.events.size() == b.events.size());
        for (std::size_t k = 0; k < a.events.size(); ++k) {
            REQUIRE(a.events[k].time == b.events[k].time);
            REQUIRE(a.events[k].log_post == b.events[k].log_post);
        }
        CHECK(a.log_end == b.log_end);
    }
}

TEST_CASE("acceptance bounds hold for table eigenfunctions") {
    std::vector<EllTable::Point> pts;
    const double vals[] = {0.6, 0.9, 0.8, 1.3, 1.1, 1.6};
    for (int i = 0; i < 6; ++i) pts.push_back({std::pow(2.0, i - 2), vals[i], 0.0, 0.0, 10, true});
    const auto ell = Eigenfunction::from_table(EllTable(pts, 0.5, 1.0));
    auto rng = path_stream(1, 0);
    for (int k = 0; k < 20000; ++k) {
        const double z = std::log(0.1) + 5.0 * rng.uniform();
        const double lv = std::log(rng.uniform());
        const double ratio = std::exp(ell.log_at(z + lv) - ell.log_at(z));
        REQUIRE(ratio <= ell.accept_bound_log(z));
        REQUIRE(ell.accept_bound_log(z) <= ell.global_bound() * (1 + 1e-15));
    }
    CHECK(ell.accept_bound_log(std::log(0.1)) == doctest::Approx(1.05));
    CHECK_THROWS_AS(Eigenfunction::power_law(-0.5, 1.0), Error);
}

TEST_CASE("tilted jump intensities stay within the thinning bound") {
    const auto m = Model::validate(linear_power_beta_spec(1, 4, 2));
    const TiltedModel tm(m, Eigenfunction::power_law(0.8, 1.0), 0.65);
    const TiltedJumps pol{&tm};
    auto rng = path_stream(2, 0);
    for (int k = 0; k < 10000; ++k) {
        const double z = 6.0 * rng.uniform() - 3.0;
        const double lv = m.sample_log_ratio(rng);
        REQUIRE(pol.accept(z, lv) <= pol.proposal_bound(z));
        REQUIRE(pol.proposal_bound(z) <= pol.rate_bound());
    }
}

TEST_CASE("Levy tilted log-mass is centred") {
    const auto m = Model::validate(linear_power_beta_spec(1, 4, 2));
    const auto tr = levy::theta0_rho(levy::from_model(m));
    const TiltedModel tm(m, Eigenfunction::power_law(tr.theta0 - 1.0, 1.0), tr.rho);
    const double t = 50.0;
    const auto v = map_indices(10000, Execution::Parallel, [&](std::size_t i) {
        auto rng = path_stream(31, i);
        const auto p = simulate_tilted(tm, 1.0, t, rng);
        return (p.log_end - p.log_start) / t;
    });
    const auto e = mean_estimate(v);
    CHECK(std::abs(e.mean) < 3 * e.std_error);
}

TEST_CASE("Levy tilted process returns to x0") {
    const auto m = Model::validate(linear_power_beta_spec(1, 4, 2));
    const auto tr = levy::theta0_rho(levy::from_model(m));
    const TiltedModel tm(m, Eigenfunction::power_law(tr.theta0 - 1.0, 1.0), tr.rho);
    const std::vector<TestFunction> fs{TestFunction::zero()};
    const auto s = occupation_samples(tm, fs, OccupationOptions{10000, 500.0, 4, Execution::Parallel});
    const double returned = static_cast<double>(s.values[0].size()) / 10000.0;
    CHECK(returned >= 0.95);
}

TEST_CASE("occupation measure: positivity, additivity, mean excursion length") {
    const auto m = Model::validate(linear_uniform_binary_spec(1, 4, 1));
    const TiltedModel tm(m, Eigenfunction::constant_one(), 1.0);
    const std::vector<TestFunction> fs{TestFunction::parse("indicator:0;inf"), TestFunction::parse("indicator:1;inf"),
                                       TestFunction::parse("indicator:0;1"), TestFunction::parse("bump:2;0.5")};
    const auto s = occupation_samples(tm, fs, OccupationOptions{20000, 1000.0, 6, Execution::Parallel});
    REQUIRE(s.censored == 0);
    for (std::size_t i = 0; i < s.values[0].size(); ++i) {
        REQUIRE(s.values[1][i] + s.values[2][i] == doctest::Approx(s.values[0][i]).epsilon(1e-12));
        REQUIRE(s.values[3][i] >= 0.0);
    }
    const auto len = mean_estimate(s.values[0]);
    const auto r = estimate_rho(m, HitOptions{20000, 2000.0, 7, Execution::Parallel});
    const double ci = 1.96 * std::hypot(len.std_error, r.std_error);
    // -L'(rho) uses an independent sample; its error is carried by the bracket width
    const auto set = sample_hitting_set(m, 1.0, 1.0, HitOptions{20000, 2000.0, 7, Execution::Parallel});
    const auto d = laplace_derivative(set, r.rho_hat);
    CHECK(std::abs(len.mean - d.value) < 2 * (ci + 1.96 * d.std_error));
}

TEST_CASE("profile and ratio trivial cases") {
    const auto m = Model::validate(linear_uniform_binary_spec(1, 4, 1));
    const TiltedModel tm(m, Eigenfunction::constant_one(), 1.0);
    const ProfileOptions po{2000, 3, Execution::Parallel};
    const auto z = asymptotic_profile(tm, TestFunction::zero(), 1.0, 2.0, po);
    CHECK(z.direct == 0.0);
    CHECK(z.tilted == 0.0);
    const auto g = TestFunction::parse("bump:2.0;0.5");
    const std::vector<double> ts{1.0, 2.0, 4.0};
    for (const auto& p : ratio_limit(tm, g, g, 1.0, ts, po)) CHECK(p.ratio == 1.0);
    for (const auto& p : ratio_limit(tm, g.scaled(2.0), g, 1.0, ts, po)) CHECK(p.ratio == 2.0);
}

TEST_CASE("eigenmeasure residual") {
    const auto m = Model::validate(linear_uniform_binary_spec(1, 4, 1));
    const auto y = log_spaced(0.05, 20.0, 61);
    const std::vector<double> nu(y.size(), 1.0);
    const auto r0 = eigenmeasure_residual(m, y, nu, TestFunction::zero(), 1.0);
    CHECK(r0.residual == 0.0);

    // Levy model: y^-(theta0+1) is an eigenmeasure for rho; fbar = y^theta0 bump.
    // A fbar is not compactly supported (fragments land below the parent), so
    // the pairing grid runs well above the bump.
    const auto lm = Model::validate(linear_power_beta_spec(1, 4, 2));
    const auto tr = levy::theta0_rho(levy::from_model(lm));
    const auto bump = TestFunction::parse("bump:1.0;0.5");
    const auto f = TestFunction::custom([&](double x) { return std::pow(x, tr.theta0 - 1.0) * bump(x); },
                                        bump.log_breakpoints(), bump.log_support_lo(), bump.log_support_hi(), "f");
    const auto yy = log_spaced(std::exp(-0.6), 500.0, 1500);
    std::vector<double> dens;
    for (double v : yy) dens.push_back(std::pow(v, -(tr.theta0 + 1.0)));
    const auto r = eigenmeasure_residual(lm, yy, dens, f, tr.rho);
    CHECK(r.relative < 0.05);
}

}
