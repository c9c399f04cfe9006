#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linefield/fields.hpp"

namespace linefield {

struct Sweep {
    std::string name;
    std::vector<double> values;
};

// A scenario file: fields and metric as expression strings, a domain, and
// command-specific parameters. Expressions are kept raw so that a sweep
// parameter can be substituted textually before parsing.
struct Scenario {
    std::string x_raw[2] = {"0", "0"};
    std::string y_raw[2] = {"0", "0"};
    std::string g_raw[3] = {"1", "0", "1"};
    bool has_metric = false;
    Domain domain;
    nlohmann::ordered_json params;
    std::optional<Sweep> sweep;
    std::uint64_t seed = 1;

    // Builds the proto-line-field, substituting the sweep parameter when a
    // value is supplied. Throws ConfigError on malformed expressions.
    ProtoLineField instantiate(std::optional<double> sweep_value = std::nullopt) const;

    double param(const std::string& key, double fallback) const;
    int param_int(const std::string& key, int fallback) const;
};

Scenario load_scenario(const std::filesystem::path& path);
Scenario scenario_from_json(const nlohmann::ordered_json& j);

// Whole-word textual substitution of `name` by "(value)".
std::string substitute_param(const std::string& text, const std::string& name,
                             double value);

}  // namespace linefield
