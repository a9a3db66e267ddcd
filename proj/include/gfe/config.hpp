#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "gfe/model.hpp"

namespace gfe {

/// Flat `key = value` configuration; `#` starts a comment.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
    static KeyValueConfig load(const std::filesystem::path& path);

    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> find(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;

    const std::map<std::string, std::string>& values() const noexcept { return values_; }
    const std::string& origin() const noexcept { return origin_; }

private:
    std::map<std::string, std::string> values_;
    std::string origin_;
};

/// Builds a model from the documented schema:
///   growth.kind = linear | power | michaelis
///   growth.a, growth.p, growth.d, growth.cbar_sup
///   frag.rate.kind = constant | saturating ; frag.rate.b ; frag.rate.gamma0
///   frag.ratio.kind = uniform_binary | power_beta ; frag.ratio.beta
///   x0 ; label
ModelSpec model_spec_from_config(const KeyValueConfig& config);

}  // namespace gfe
