#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "gfe/config.hpp"
#include "gfe/model.hpp"
#include "gfe/parallel.hpp"

using namespace gfe;

namespace {

ModelSpec from_text(const std::string& text) { return model_spec_from_config(KeyValueConfig::parse(text)); }

const char* kUb = R"(
label = ub
growth.kind = linear
growth.a = 1
frag.rate.kind = saturating
frag.rate.b = 4
frag.rate.gamma0 = 1
frag.ratio.kind = uniform_binary
)";

}  // namespace

TEST_SUITE("model") {

TEST_CASE("config round trip for the uniform-binary model") {
    const auto m = Model::validate(from_text(kUb));
    CHECK(m.label() == "ub");
    CHECK(m.x0() == 1.0);
    CHECK(m.is_linear());
    CHECK(m.jump_rate(1.0) == doctest::Approx(2.0));
    CHECK(m.jump_rate(3.0) == doctest::Approx(3.0));
    CHECK(m.jump_rate_bound() == doctest::Approx(4.0));
    CHECK(m.ratio_density(0.25) == doctest::Approx(0.5));
    CHECK(m.moment_sup(1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(m.moment_sup(-1.0) == doctest::Approx(2.0));
}

TEST_CASE("power-law ratio closed forms") {
    const auto m = Model::validate(linear_power_beta_spec(1, 4, 2));
    CHECK(m.ratio_cdf(0.3) == doctest::Approx(0.09));
    CHECK(m.moment_sup(1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(m.moment_sup(-1.0) == doctest::Approx(2.0));
    CHECK(m.partial_moment(1.0, 0.5, 1.0) == doctest::Approx(2.0 / 3.0 * (1.0 - 0.125)));
    CHECK_THROWS_AS(m.moment_sup(-2.0), Error);
    // E log V = -1/beta for density beta v^(beta-1)
    std::vector<double> logs(100000);
    auto rng = path_stream(4, 0);
    for (auto& l : logs) l = m.sample_log_ratio(rng);
    const auto e = mean_estimate(logs);
    CHECK(std::abs(e.mean + 0.5) < 4 * e.std_error);
}

TEST_CASE("uniform-binary sampler matches the size-biased law") {
    const auto m = Model::validate(linear_uniform_binary_spec(1, 4, 1));
    auto rng = path_stream(5, 0);
    int below_half = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) below_half += m.sample_log_ratio(rng) < std::log(0.5) ? 1 : 0;
    // P(V < 1/2) = (1/2)^2
    const double p = static_cast<double>(below_half) / n;
    CHECK(std::abs(p - 0.25) < 4 * std::sqrt(0.25 * 0.75 / n));
}

TEST_CASE("validation failures") {
    const std::string bad = R"(
growth.kind = power
growth.a = 1
growth.p = 2
growth.cbar_sup = 10
frag.rate.kind = constant
frag.rate.b = 1
frag.ratio.kind = uniform_binary
)";
    bool caught = false;
    try {
        Model::validate(from_text(bad));
    } catch (const ValidationError& e) {
        caught = true;
        REQUIRE(!e.report().issues.empty());
        CHECK(e.report().issues.front().code == ErrorCode::CBoundViolated);
        CHECK(kind_of(e.code()) == ErrorKind::Validation);
    }
    CHECK(caught);

    auto spec = linear_power_beta_spec(1, 4, 2);
    spec.frag.ratio = CustomRatio{[](double v) { return 3.0 * v; }, 3.0, "unnormalized"};
    CHECK_THROWS_AS(Model::validate(spec), ValidationError);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(model_spec_from_config(KeyValueConfig::parse("growth.kind = linear")), Error);
    CHECK_THROWS_AS(from_text(std::string(kUb) + "\ngrowth.a = abc\n"), Error);
    auto code = ErrorCode::ConfigError;
    try {
        KeyValueConfig::load("/nonexistent/model.cfg");
    } catch (const Error& e) {
        code = e.code();
    }
    CHECK(code == ErrorCode::IoError);
    const auto c = KeyValueConfig::parse("# comment\n a = 1.5 # trailing\nname = ub_14\n");
    CHECK(c.get_double("a") == 1.5);
    CHECK(c.get_string("name") == "ub_14");
    CHECK(c.get_int("missing", 7) == 7);
}

TEST_CASE("michaelis growth from config") {
    const auto m = Model::validate(from_text(R"(
growth.kind = michaelis
growth.a = 1
growth.d = 0.5
frag.rate.kind = constant
frag.rate.b = 2
frag.ratio.kind = power_beta
frag.ratio.beta = 1
)"));
    CHECK(!m.is_linear());
    CHECK(m.growth(1.0) == doctest::Approx(1.25));
    CHECK(m.cbar_sup() == doctest::Approx(1.5));
}

}
