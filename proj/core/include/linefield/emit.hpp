#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "linefield/portrait.hpp"

namespace linefield {

// Shortest round-trip decimal form of a double (bit-exact on reparse).
std::string format_double(double v);

// Flat, serializable view of a SingularityReport.
struct SingularityRecord {
    double x = 0.0, y = 0.0;
    bool x_vanishes = false, y_vanishes = false, degenerate = false;
    std::string zero_type = "degenerate";
    std::string case_label = "Degenerate";
    std::string darboux = "none";
    std::string note;
    int vf_index = 0;
    int twice_line_index = 0;
    double det_jacobian = 0.0;
    bool has_kappa = false;
    double kappa = 0.0, Phi = 0.0;
    bool hyper_hyperbolic = false;
    struct FP {
        double theta = 0.0, slope = 0.0;
        std::string stability = "marginal";
        bool operator==(const FP&) const = default;
    };
    std::vector<FP> fixed_points;

    bool operator==(const SingularityRecord&) const = default;
};

SingularityRecord to_record(const SingularityReport& rep);

struct Report {
    std::string command;
    std::vector<SingularityRecord> singularities;
    int twice_index_sum = 0;
    bool checks_passed = true;
    std::vector<std::string> failures;

    bool operator==(const Report&) const = default;
};

nlohmann::ordered_json to_json(const Report& r);
Report report_from_json(const nlohmann::ordered_json& j);

// CSV for streamlines: columns curve_id, point_index, x, y.
std::string streamlines_csv(const std::vector<Streamline>& curves);

// CSV with one row per singularity (stable column order).
std::string singularities_csv(const std::vector<SingularityRecord>& recs);

// SVG image: one path per streamline, skeleton curves stroked distinctly,
// singularities as labeled markers with class names.
std::string portrait_svg(const Portrait& portrait, int pixels = 720);

}  // namespace linefield
