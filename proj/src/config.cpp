#include "gfe/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gfe {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        fail(ErrorCode::ConfigError, "key '" + key + "': '" + text + "' is not a number");
    }
    return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorCode::ConfigError,
                 origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(ErrorCode::ConfigError, origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.values_[key] = value;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

std::optional<std::string> KeyValueConfig::find(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
    const auto v = find(key);
    if (!v) fail(ErrorCode::ConfigError, origin_ + ": missing key '" + key + "'");
    return *v;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    return find(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key) const {
    return to_double(key, get_string(key));
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    const auto v = find(key);
    return v ? to_double(key, *v) : fallback;
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
    const auto v = find(key);
    if (!v) return fallback;
    const double d = to_double(key, *v);
    if (d != std::floor(d)) fail(ErrorCode::ConfigError, "key '" + key + "' must be an integer");
    return static_cast<int>(d);
}

ModelSpec model_spec_from_config(const KeyValueConfig& config) {
    ModelSpec spec;
    const std::string growth = config.get_string("growth.kind");
    if (growth == "linear") {
        spec.growth = LinearGrowth{config.get_double("growth.a")};
    } else if (growth == "power") {
        // c(x) = a x^p; only p = 1 satisfies the linear upper bound.
        const double a = config.get_double("growth.a");
        const double p = config.get_double("growth.p");
        GeneralGrowth g;
        g.c = [a, p](double x) { return a * std::pow(x, p); };
        g.cbar_sup = config.get_double("growth.cbar_sup");
        g.name = "power";
        spec.growth = std::move(g);
    } else if (growth == "michaelis") {
        // c(x) = x (a + d x / (1 + x)), so c(x)/x lies in (a, a + d).
        const double a = config.get_double("growth.a");
        const double d = config.get_double("growth.d");
        GeneralGrowth g;
        g.c = [a, d](double x) { return x * (a + d * x / (1.0 + x)); };
        g.cbar_sup = config.get_double("growth.cbar_sup", a + d);
        g.name = "michaelis";
        spec.growth = std::move(g);
    } else {
        fail(ErrorCode::ConfigError, "unknown growth.kind '" + growth + "'");
    }

    const std::string rate = config.get_string("frag.rate.kind");
    if (rate == "constant") {
        spec.frag.rate = ConstantRate{config.get_double("frag.rate.b")};
    } else if (rate == "saturating") {
        spec.frag.rate = SaturatingRate{config.get_double("frag.rate.b"),
                                        config.get_double("frag.rate.gamma0")};
    } else {
        fail(ErrorCode::ConfigError, "unknown frag.rate.kind '" + rate + "'");
    }

    const std::string ratio = config.get_string("frag.ratio.kind");
    if (ratio == "uniform_binary") {
        spec.frag.ratio = UniformBinaryRatio{};
    } else if (ratio == "power_beta") {
        spec.frag.ratio = PowerBetaRatio{config.get_double("frag.ratio.beta")};
    } else {
        fail(ErrorCode::ConfigError, "unknown frag.ratio.kind '" + ratio + "'");
    }

    spec.x0 = config.get_double("x0", 1.0);
    spec.label = config.get_string("label", "model");
    return spec;
}

}  // namespace gfe
