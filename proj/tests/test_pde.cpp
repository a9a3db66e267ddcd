#include <doctest.h>

#include <cmath>

#include "gfe/ergo.hpp"
#include "gfe/levy.hpp"
#include "gfe/pde.hpp"

using namespace gfe;

TEST_SUITE("pde") {

TEST_CASE("power functions are eigenfunctions of A on the Levy model") {
    const auto m = Model::validate(linear_power_beta_spec(1, 4, 2));
    const levy::LevyParams p{1, 4, 2};
    const pde::PdeGrid grid;
    for (double theta : {0.5, 1.0, levy::theta0_rho(p).theta0}) {
        auto fbar = pde::sample(grid, TestFunction::power(theta));
        const auto a = pde::apply_A(m, grid, fbar);
        double worst = 0.0;
        for (int i = 0; i < grid.size(); ++i) {
            if (grid.x(i) < 0.1 || grid.x(i) > 10.0) continue;
            const auto k = static_cast<std::size_t>(i);
            worst = std::max(worst, std::abs(a.values[k] / fbar.values[k] / levy::kappa(p, theta) - 1.0));
        }
        CHECK(worst < 0.01);
    }
}

TEST_CASE("constants are killed by G exactly") {
    const auto m = Model::validate(linear_uniform_binary_spec(1, 4, 1));
    const pde::PdeGrid grid;
    const auto one = pde::sample(grid, TestFunction::parse("indicator:0;inf"));
    const auto g = pde::apply_G(m, grid, one);
    for (double v : g.values) CHECK(std::abs(v) < 1e-12);
    const auto a = pde::apply_A(m, grid, pde::sample(grid, TestFunction::identity()));
    for (int i = 0; i < grid.size(); ++i) CHECK(a.values[static_cast<std::size_t>(i)] / grid.x(i) == doctest::Approx(1.0));
}

TEST_CASE("constant initial data grows like e^{a t}") {
    const auto m = Model::validate(linear_uniform_binary_spec(1, 4, 1));
    const pde::PdeGrid grid;
    pde::GridFunction g0{std::vector<double>(static_cast<std::size_t>(grid.size()), 1.0), 0.0, "one"};
    const auto r = pde::evolve_backward(m, grid, g0, 1.0, 1.0);
    for (double v : r.g.values) CHECK(v == doctest::Approx(std::exp(1.0)).epsilon(1e-3));
    CHECK(r.g.time == 1.0);
}

TEST_CASE("refusals") {
    const auto m = Model::validate(linear_uniform_binary_spec(1, 4, 1));
    const pde::PdeGrid grid;
    const auto f = TestFunction::parse("bump:1.0;0.5");
    auto code = ErrorCode::IoError;
    try {
        pde::evolve_semigroup(m, grid, f, 1.0, grid.dz() * 0.6);
    } catch (const Error& e) {
        code = e.code();
    }
    CHECK(code == ErrorCode::CflViolation);
    try {
        pde::evolve_semigroup(m, grid, f, 7.0);
    } catch (const Error& e) {
        code = e.code();
    }
    CHECK(code == ErrorCode::DomainTooSmall);
    CHECK_THROWS_AS(pde::PdeGrid(pde::PdeOptions{8, 1e-3, 1e3, 0.5, 32}), Error);
}

TEST_CASE("grid generator of V converges to the quadrature generator") {
    // The limiter clips at the minimum of V, so agreement is first order there;
    // the error must shrink under refinement.
    const auto m = Model::validate(linear_uniform_binary_spec(1, 4, 1));
    const ergo::LyapunovSpec V(1, 1);
    const auto fV = TestFunction::custom([&](double x) { return V.value(x); }, {0.0, std::log(2.0)},
                                         -INFINITY, INFINITY, "V");
    auto worst_at = [&](int n) {
        const pde::PdeGrid g(pde::PdeOptions{n, 1e-4, 1e4, 0.5, 32});
        const auto G = pde::apply_G(m, g, pde::sample(g, fV));
        double worst = 0.0;
        for (int i = n / 4; i < 3 * n / 4; i += 3) {
            const double x = g.x(i);
            worst = std::max(worst, std::abs(G.values[static_cast<std::size_t>(i)] - ergo::generator_of_V(m, V, x)) / V.value(x));
        }
        return worst;
    };
    const double coarse = worst_at(801);
    const double fine = worst_at(3201);
    CHECK(fine < coarse);
    CHECK(fine < 0.03);
}

}
