#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfe/cli.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kConfigs = GFE_SOURCE_DIR "/configs/";

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = gfe::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate exit codes") {
    CHECK(run({"validate", kConfigs + "ub_14.cfg"}).code == 0);
    CHECK(run({"validate", kConfigs + "levy_142.cfg"}).code == 0);
    const auto bad = run({"validate", kConfigs + "bad_growth.cfg"});
    CHECK(bad.code == 2);
    const auto j = nlohmann::json::parse(bad.err);
    CHECK(j["error"] == "CBoundViolated");
    CHECK(run({"validate", kConfigs + "missing.cfg"}).code == 4);
    CHECK(run({"semigroup"}).code == 2);
}

TEST_CASE("semigroup of the identity is exact with zero stderr") {
    const auto dir = fs::temp_directory_path() / "gfe_cli_semigroup";
    const auto r = run({"--out", dir.string(), "--no-timestamp", "semigroup", "--model", kConfigs + "levy_142.cfg",
                        "--f", "id", "--x", "2", "--t", "1.5", "--n", "200"});
    REQUIRE(r.code == 0);
    const auto body = slurp(dir / "semigroup.csv");
    CHECK(body.find("# seed: 1\n") != std::string::npos);
    CHECK(body.find("# model: levy_142\n") != std::string::npos);
    CHECK(body.find("# build: ") != std::string::npos);
    CHECK(body.find("timestamp") == std::string::npos);
    std::ostringstream expect;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", 2.0 * std::exp(1.5));
    CHECK(body.find(std::string("2,1.5,id,") + buf + ",0,200\n") != std::string::npos);
}

TEST_CASE("estimation errors map to exit code 3") {
    const auto r = run({"--no-timestamp", "pde-solve", "--model", kConfigs + "ub_14.cfg", "--t", "8"});
    CHECK(r.code == 3);
    CHECK(nlohmann::json::parse(r.err)["error"] == "DomainTooSmall");
}

TEST_CASE("levy-analytic JSON") {
    const auto r = run({"--no-timestamp", "levy-analytic", "--a", "1", "--lambda", "4", "--beta", "2"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["rho"].get<double>() == doctest::Approx(4 * std::sqrt(2.0) - 5).epsilon(1e-12));
    CHECK(j["L"][0]["L"].get<double>() == doctest::Approx(0.5));
    CHECK(!j.contains("timestamp"));
}

TEST_CASE("outputs are identical across thread counts") {
    std::vector<std::string> bodies;
    for (const char* threads : {"1", "3"}) {
        const auto dir = fs::temp_directory_path() / (std::string("gfe_cli_threads_") + threads);
        const auto r = run({"--out", dir.string(), "--no-timestamp", "--threads", threads, "--seed", "4", "find-rho",
                            "--model", kConfigs + "levy_142.cfg", "--n", "1500", "--tmax", "100"});
        REQUIRE(r.code == 0);
        bodies.push_back(slurp(dir / "spectral.csv"));
    }
    CHECK(bodies[0] == bodies[1]);
}

}
