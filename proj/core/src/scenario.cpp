#include "linefield/scenario.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>

#include "linefield/errors.hpp"

namespace linefield {

using nlohmann::ordered_json;

namespace {

std::string shortest(double v) {
    std::array<char, 40> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), p);
}

Expr parse_or_config_error(const std::string& text, const char* what) {
    try {
        return Expr::parse(text);
    } catch (const ParseError& e) {
        throw ConfigError(std::string(what) + ": " + e.what() + " in \"" + text + "\"");
    }
}

}  // namespace

std::string substitute_param(const std::string& text, const std::string& name,
                             double value) {
    const std::string repl = "(" + shortest(value) + ")";
    std::string out;
    std::size_t i = 0;
    const auto wordish = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    while (i < text.size()) {
        if (text.compare(i, name.size(), name) == 0 &&
            (i == 0 || !wordish(text[i - 1])) &&
            (i + name.size() >= text.size() || !wordish(text[i + name.size()]))) {
            out += repl;
            i += name.size();
        } else {
            out += text[i++];
        }
    }
    return out;
}

ProtoLineField Scenario::instantiate(std::optional<double> sweep_value) const {
    const auto prep = [&](const std::string& raw) {
        if (sweep && sweep_value)
            return substitute_param(raw, sweep->name, *sweep_value);
        return raw;
    };
    VectorField X(parse_or_config_error(prep(x_raw[0]), "X1"),
                  parse_or_config_error(prep(x_raw[1]), "X2"));
    VectorField Y(parse_or_config_error(prep(y_raw[0]), "Y1"),
                  parse_or_config_error(prep(y_raw[1]), "Y2"));
    Metric g = has_metric ? Metric(parse_or_config_error(prep(g_raw[0]), "g11"),
                                   parse_or_config_error(prep(g_raw[1]), "g12"),
                                   parse_or_config_error(prep(g_raw[2]), "g22"))
                          : Metric::euclidean();
    try {
        return ProtoLineField(std::move(X), std::move(Y), std::move(g), domain);
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("invalid scenario: ") + e.what());
    }
}

double Scenario::param(const std::string& key, double fallback) const {
    if (params.contains(key) && params[key].is_number())
        return params[key].get<double>();
    return fallback;
}

int Scenario::param_int(const std::string& key, int fallback) const {
    if (params.contains(key) && params[key].is_number())
        return params[key].get<int>();
    return fallback;
}

Scenario scenario_from_json(const ordered_json& j) {
    Scenario s;
    try {
        if (!j.contains("X") || !j.contains("Y"))
            throw ConfigError("scenario: X and Y component arrays are required");
        for (int i = 0; i < 2; ++i) {
            s.x_raw[i] = j["X"].at(i).get<std::string>();
            s.y_raw[i] = j["Y"].at(i).get<std::string>();
        }
        if (j.contains("metric")) {
            s.has_metric = true;
            s.g_raw[0] = j["metric"].value("g11", std::string("1"));
            s.g_raw[1] = j["metric"].value("g12", std::string("0"));
            s.g_raw[2] = j["metric"].value("g22", std::string("1"));
        }
        if (j.contains("domain")) {
            const auto& d = j["domain"];
            const char* key = d.contains("torus") ? "torus" : "box";
            if (!d.contains(key)) throw ConfigError("scenario: domain needs box or torus");
            const auto& b = d[key];
            s.domain.xmin = b.at(0).get<double>();
            s.domain.xmax = b.at(1).get<double>();
            s.domain.ymin = b.at(2).get<double>();
            s.domain.ymax = b.at(3).get<double>();
            s.domain.torus = d.contains("torus");
        }
        if (!(s.domain.width() > 0.0) || !(s.domain.height() > 0.0))
            throw ConfigError("scenario: empty domain box");
        if (j.contains("params")) s.params = j["params"];
        if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("sweep")) {
            Sweep sw;
            sw.name = j["sweep"].at("name").get<std::string>();
            if (j["sweep"].contains("values")) {
                for (const auto& v : j["sweep"]["values"]) sw.values.push_back(v.get<double>());
            } else {
                const double from = j["sweep"].at("from").get<double>();
                const double to = j["sweep"].at("to").get<double>();
                const int count = j["sweep"].at("count").get<int>();
                if (count < 2) throw ConfigError("scenario: sweep count must be >= 2");
                for (int i = 0; i < count; ++i)
                    sw.values.push_back(from + (to - from) * i / (count - 1));
            }
            if (sw.values.empty()) throw ConfigError("scenario: empty sweep");
            s.sweep = std::move(sw);
        }
    } catch (const ordered_json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const ordered_json::exception& e) {
        throw ConfigError("scenario " + path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

}  // namespace linefield
