#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "gfe/config.hpp"
#include "gfe/pdmp.hpp"
#include "gfe/quadrature.hpp"

using namespace gfe;

namespace {

Model michaelis() {
    return Model::validate(model_spec_from_config(KeyValueConfig::parse(R"(
growth.kind = michaelis
growth.a = 1
growth.d = 0.5
frag.rate.kind = constant
frag.rate.b = 2
frag.ratio.kind = uniform_binary
)")));
}

// Classical RK4 on dz/dt = cbar(e^z), an oracle independent of the library flow.
double rk4_flow(const Model& m, double z, double t, int steps) {
    const double h = t / steps;
    auto f = [&](double u) { return m.growth_per_mass_log(u); };
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(z), k2 = f(z + 0.5 * h * k1), k3 = f(z + 0.5 * h * k2), k4 = f(z + h * k3);
        z += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return z;
}

}  // namespace

TEST_SUITE("pdmp") {

TEST_CASE("linear flow is exact") {
    const auto m = Model::validate(linear_power_beta_spec(1.5, 4, 2));
    CHECK(flow_log(m, 0.2, 2.0) == doctest::Approx(3.2));
    CHECK(time_to_reach_log(m, 0.2, 3.2) == doctest::Approx(2.0));
    CHECK(std::isinf(time_to_reach_log(m, 1.0, 0.5)));
}

TEST_CASE("numeric flow against RK4") {
    const auto m = michaelis();
    for (double z : {-3.0, 0.0, 2.0}) {
        const double ref = rk4_flow(m, z, 1.7, 4000);
        CHECK(flow_log(m, z, 1.7) == doctest::Approx(ref).epsilon(1e-10));
        CHECK(time_to_reach_log(m, z, ref) == doctest::Approx(1.7).epsilon(1e-9));
    }
}

TEST_CASE("segment integral of a constant is the elapsed time") {
    const auto m = michaelis();
    const double z1 = flow_log(m, -0.4, 0.9);
    CHECK(integrate_segment(m, TestFunction::parse("indicator:0;inf"), -0.4, z1) == doctest::Approx(0.9).epsilon(1e-10));
}

TEST_CASE("Feynman-Kac of the identity on a linear model has zero variance") {
    const auto m = Model::validate(linear_power_beta_spec(1, 4, 2));
    const auto e = feynman_kac(m, 1.3, 2.0, TestFunction::identity(), PathOptions{500, 9, Execution::Parallel});
    CHECK(e.mean == doctest::Approx(1.3 * std::exp(2.0)).epsilon(1e-14));
    CHECK(e.std_error == 0.0);
}

TEST_CASE("exponential functional matches a time quadrature of cbar") {
    const auto m = michaelis();
    auto rng = path_stream(2, 0);
    const auto tr = simulate_path(m, 1.0, 5.0, rng);
    REQUIRE(!tr.events.empty());
    double log_e = 0.0, t = 0.0, z = tr.log_start;
    auto piece = [&](double z0, double t0, double t1) {
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double a = t0 + (t1 - t0) * k / 4, b = t0 + (t1 - t0) * (k + 1) / 4;
            sum += quad::gauss_legendre([&](double s) { return m.growth_per_mass_log(flow_log(m, z0, s - t0)); }, a, b);
        }
        return sum;
    };
    for (const auto& ev : tr.events) {
        log_e += piece(z, t, ev.time);
        t = ev.time;
        z = ev.log_post;
    }
    log_e += piece(z, t, tr.end_time);
    CHECK(tr.log_E == doctest::Approx(log_e).epsilon(1e-9));
}

TEST_CASE("first jump time follows the integrated rate") {
    // ub model from x = 1: P(no jump by t) = exp(-4 log((1 + e^t) / 2))
    const auto m = Model::validate(linear_uniform_binary_spec(1, 4, 1));
    const double t = 0.4;
    const std::size_t n = 40000;
    const auto survived = map_indices(n, Execution::Parallel, [&](std::size_t i) {
        auto rng = path_stream(21, i);
        return simulate_path(m, 1.0, t, rng).events.empty() ? 1.0 : 0.0;
    });
    const double p = pairwise_sum(survived) / n;
    const double expect = std::exp(-4.0 * std::log((1.0 + std::exp(t)) / 2.0));
    CHECK(std::abs(p - expect) < 4 * std::sqrt(expect * (1 - expect) / n));
}

TEST_CASE("serial and parallel sampling are bitwise identical") {
    const auto m = Model::validate(linear_power_beta_spec(1, 4, 2));
    const auto a = sample_hitting_set(m, 1.0, 1.0, HitOptions{3000, 50.0, 5, Execution::Serial});
    const auto b = sample_hitting_set(m, 1.0, 1.0, HitOptions{3000, 50.0, 5, Execution::Parallel});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a.samples[i].hit == b.samples[i].hit);
        REQUIRE(a.samples[i].H == b.samples[i].H);
        REQUIRE(a.samples[i].log_W == b.samples[i].log_W);
    }
    const auto f = TestFunction::parse("bump:1.0;0.5");
    CHECK(feynman_kac_samples(m, 1.0, 1.0, f, PathOptions{2000, 3, Execution::Serial}) ==
          feynman_kac_samples(m, 1.0, 1.0, f, PathOptions{2000, 3, Execution::Parallel}));
}

TEST_CASE("hitting from below without jumps takes the flow time") {
    const auto m = Model::validate(linear_uniform_binary_spec(1, 4, 1));
    auto rng = path_stream(1, 0);
    // at x = 1e-9 the jump rate is ~4e-9, so reaching 2e-9 is almost surely pure flow
    const auto h = sample_hitting(m, 1e-9, 2e-9, 10.0, rng);
    REQUIRE(h.hit);
    CHECK(h.H == doctest::Approx(std::log(2.0)));
    CHECK(h.log_W == doctest::Approx(std::log(2.0)));
}

TEST_CASE("trajectory csv") {
    const auto m = Model::validate(linear_power_beta_spec(1, 4, 2));
    auto rng = path_stream(1, 0);
    std::vector<Trajectory> paths{simulate_path(m, 1.0, 1.0, rng)};
    std::ostringstream os;
    write_trajectories_csv(os, paths);
    CHECK(os.str().rfind("path_id,event_time,pre_mass,post_mass\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : os.str()) lines += c == '\n' ? 1 : 0;
    CHECK(lines == paths[0].events.size() + 1);
}

}
