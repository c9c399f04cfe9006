#include "linefield/emit.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "linefield/errors.hpp"

namespace linefield {

using nlohmann::ordered_json;

std::string format_double(double v) {
    std::array<char, 40> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), p);
}

SingularityRecord to_record(const SingularityReport& rep) {
    SingularityRecord r;
    r.x = rep.location.x;
    r.y = rep.location.y;
    r.x_vanishes = rep.x_vanishes;
    r.y_vanishes = rep.y_vanishes;
    r.degenerate = rep.degenerate;
    r.zero_type = to_string(rep.zero_type);
    r.note = rep.note;
    r.vf_index = rep.vf_index;
    r.twice_line_index = rep.twice_line_index;
    r.det_jacobian = rep.det_jacobian;
    if (rep.classification) {
        const Classification& cl = *rep.classification;
        r.case_label = to_string(cl.case_label);
        r.darboux = to_string(cl.darboux);
        r.hyper_hyperbolic = cl.hyper_hyperbolic;
        if (cl.kappa) {
            r.has_kappa = true;
            r.kappa = *cl.kappa;
            r.Phi = *cl.Phi;
        }
        for (const FixedPoint& fp : cl.points)
            r.fixed_points.push_back({fp.theta, fp.slope, to_string(fp.stability)});
    }
    return r;
}

ordered_json to_json(const Report& r) {
    ordered_json j;
    j["command"] = r.command;
    j["singularities"] = ordered_json::array();
    for (const SingularityRecord& s : r.singularities) {
        ordered_json js;
        js["x"] = s.x;
        js["y"] = s.y;
        js["x_vanishes"] = s.x_vanishes;
        js["y_vanishes"] = s.y_vanishes;
        js["degenerate"] = s.degenerate;
        js["zero_type"] = s.zero_type;
        js["case"] = s.case_label;
        js["darboux"] = s.darboux;
        js["note"] = s.note;
        js["vf_index"] = s.vf_index;
        js["twice_line_index"] = s.twice_line_index;
        js["det_jacobian"] = s.det_jacobian;
        if (s.has_kappa) {
            js["kappa"] = s.kappa;
            js["Phi"] = s.Phi;
        }
        js["hyper_hyperbolic"] = s.hyper_hyperbolic;
        js["fixed_points"] = ordered_json::array();
        for (const auto& fp : s.fixed_points) {
            ordered_json jf;
            jf["theta"] = fp.theta;
            jf["slope"] = fp.slope;
            jf["stability"] = fp.stability;
            js["fixed_points"].push_back(jf);
        }
        j["singularities"].push_back(js);
    }
    j["twice_index_sum"] = r.twice_index_sum;
    j["checks_passed"] = r.checks_passed;
    j["failures"] = r.failures;
    return j;
}

Report report_from_json(const ordered_json& j) {
    Report r;
    try {
        r.command = j.at("command").get<std::string>();
        for (const auto& js : j.at("singularities")) {
            SingularityRecord s;
            s.x = js.at("x").get<double>();
            s.y = js.at("y").get<double>();
            s.x_vanishes = js.at("x_vanishes").get<bool>();
            s.y_vanishes = js.at("y_vanishes").get<bool>();
            s.degenerate = js.at("degenerate").get<bool>();
            s.zero_type = js.at("zero_type").get<std::string>();
            s.case_label = js.at("case").get<std::string>();
            s.darboux = js.at("darboux").get<std::string>();
            s.note = js.at("note").get<std::string>();
            s.vf_index = js.at("vf_index").get<int>();
            s.twice_line_index = js.at("twice_line_index").get<int>();
            s.det_jacobian = js.at("det_jacobian").get<double>();
            if (js.contains("kappa")) {
                s.has_kappa = true;
                s.kappa = js.at("kappa").get<double>();
                s.Phi = js.at("Phi").get<double>();
            }
            s.hyper_hyperbolic = js.at("hyper_hyperbolic").get<bool>();
            for (const auto& jf : js.at("fixed_points"))
                s.fixed_points.push_back({jf.at("theta").get<double>(),
                                          jf.at("slope").get<double>(),
                                          jf.at("stability").get<std::string>()});
            r.singularities.push_back(std::move(s));
        }
        r.twice_index_sum = j.at("twice_index_sum").get<int>();
        r.checks_passed = j.at("checks_passed").get<bool>();
        for (const auto& f : j.at("failures")) r.failures.push_back(f.get<std::string>());
    } catch (const ordered_json::exception& e) {
        throw ConfigError(std::string("report: ") + e.what());
    }
    return r;
}

std::string streamlines_csv(const std::vector<Streamline>& curves) {
    std::ostringstream out;
    out << "curve_id,point_index,x,y\n";
    for (std::size_t c = 0; c < curves.size(); ++c)
        for (std::size_t i = 0; i < curves[c].points.size(); ++i)
            out << c << ',' << i << ',' << format_double(curves[c].points[i].x) << ','
                << format_double(curves[c].points[i].y) << '\n';
    return out.str();
}

std::string singularities_csv(const std::vector<SingularityRecord>& recs) {
    std::ostringstream out;
    out << "x,y,zero_type,case,darboux,vf_index,twice_line_index,det_jacobian,"
           "degenerate,hyper_hyperbolic,fixed_point_count\n";
    for (const SingularityRecord& s : recs)
        out << format_double(s.x) << ',' << format_double(s.y) << ',' << s.zero_type
            << ',' << s.case_label << ',' << s.darboux << ',' << s.vf_index << ','
            << s.twice_line_index << ',' << format_double(s.det_jacobian) << ','
            << (s.degenerate ? 1 : 0) << ',' << (s.hyper_hyperbolic ? 1 : 0) << ','
            << s.fixed_points.size() << '\n';
    return out.str();
}

std::string portrait_svg(const Portrait& portrait, int pixels) {
    const Domain& box = portrait.box;
    const double w = box.width(), h = box.height();
    const int px = pixels;
    const int py = static_cast<int>(pixels * h / w);
    const auto X = [&](double x) { return (x - box.xmin) / w * px; };
    const auto Y = [&](double y) { return (box.ymax - y) / h * py; };
    const auto fmt = [](double v) {
        // Two decimals is below pixel resolution and keeps files small.
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px << "\" height=\""
        << py << "\" viewBox=\"0 0 " << px << " " << py << "\">\n";
    out << "<rect width=\"" << px << "\" height=\"" << py << "\" fill=\"white\"/>\n";
    for (const Streamline& s : portrait.streamlines) {
        if (s.points.size() < 2) continue;
        out << "<path fill=\"none\" stroke=\""
            << (s.is_skeleton ? "#cc2222" : "#3465a4") << "\" stroke-width=\""
            << (s.is_skeleton ? "1.6" : "0.8") << "\" d=\"M";
        // Integration steps are far below pixel resolution; thin vertices to
        // roughly one per pixel (endpoints always kept).
        double lx = 0.0, ly = 0.0;
        bool first = true;
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            const double px_x = X(s.points[i].x), px_y = Y(s.points[i].y);
            const bool last = i + 1 == s.points.size();
            if (!first && !last && std::hypot(px_x - lx, px_y - ly) < 0.75) continue;
            out << (first ? "" : " L") << fmt(px_x) << ' ' << fmt(px_y);
            lx = px_x;
            ly = px_y;
            first = false;
        }
        out << "\"/>\n";
    }
    for (const SingularityReport& rep : portrait.singularities) {
        const std::string label =
            rep.classification ? to_string(rep.classification->darboux) : "Degenerate";
        out << "<circle cx=\"" << fmt(X(rep.location.x)) << "\" cy=\""
            << fmt(Y(rep.location.y)) << "\" r=\"3.5\" fill=\"black\"/>\n";
        out << "<text x=\"" << fmt(X(rep.location.x) + 6) << "\" y=\""
            << fmt(Y(rep.location.y) - 6) << "\" font-size=\"14\" font-family=\"sans-serif\">"
            << label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace linefield
