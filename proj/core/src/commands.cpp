#include "linefield/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "linefield/emit.hpp"
#include "linefield/errors.hpp"
#include "linefield/metric_builder.hpp"

namespace linefield {

using nlohmann::ordered_json;

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
}

bool wants(const CommandOptions& opt, const char* format) {
    return opt.format.empty() || opt.format == format;
}

std::uint64_t effective_seed(const Scenario& sc, const CommandOptions& opt) {
    return opt.seed != 0 ? opt.seed : sc.seed;
}

int degenerate_exit(const std::vector<SingularityRecord>& recs) {
    if (recs.empty()) return kExitOk;
    for (const SingularityRecord& r : recs)
        if (!r.degenerate) return kExitOk;
    return kExitDegenerateOnly;
}

std::string json_text(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

int cmd_classify(const Scenario& sc, const CommandOptions& opt) {
    const ProtoLineField L = sc.instantiate();
    Report rep;
    rep.command = "classify";
    for (const SingularityReport& s : analyze_all(L, L.domain())) {
        rep.singularities.push_back(to_record(s));
        rep.twice_index_sum += rep.singularities.back().twice_line_index;
    }
    if (wants(opt, "json")) write_file(opt.out_dir / "report.json", json_text(to_json(rep)));
    if (wants(opt, "csv"))
        write_file(opt.out_dir / "singularities.csv", singularities_csv(rep.singularities));
    return degenerate_exit(rep.singularities);
}

int cmd_portrait(const Scenario& sc, const CommandOptions& opt) {
    const ProtoLineField L = sc.instantiate();
    PortraitOptions po;
    po.seed_grid = opt.grid > 0 ? opt.grid : sc.param_int("seeds", po.seed_grid);
    po.step = sc.param("step", po.step);
    po.max_len = sc.param("max_len", po.max_len);
    po.skeleton_r0 = sc.param("skeleton_r0", po.skeleton_r0);
    const Portrait portrait = make_portrait(L, L.domain(), po);

    Report rep;
    rep.command = "portrait";
    for (const SingularityReport& s : portrait.singularities)
        rep.singularities.push_back(to_record(s));

    if (wants(opt, "svg")) write_file(opt.out_dir / "portrait.svg", portrait_svg(portrait));
    if (wants(opt, "csv")) {
        write_file(opt.out_dir / "streamlines.csv", streamlines_csv(portrait.streamlines));
        write_file(opt.out_dir / "singularities.csv", singularities_csv(rep.singularities));
    }
    if (wants(opt, "json")) write_file(opt.out_dir / "report.json", json_text(to_json(rep)));
    return degenerate_exit(rep.singularities);
}

namespace {

// The mixed-convention ray slopes used by the bifurcation study: on the unit
// circle, phi_X(t) is the g-frame angle of X(cos t, sin t) and phi_L(t) the
// bisector angle, both compared against the Euclidean ray parameter t.
struct RaySlopes {
    double phi_x = 0.0;
    double phi_l = 0.0;
};

RaySlopes ray_slopes_at_zero(const ProtoLineField& L) {
    const double h = 1e-5;
    const auto at = [&](double t) {
        return Vec2{std::cos(t), std::sin(t)};
    };
    const double xp = frame_angle(L.metric(), at(h), L.X()(at(h)));
    const double xm = frame_angle(L.metric(), at(-h), L.X()(at(-h)));
    const double lp = bisector(L, at(h)).value;
    const double lm = bisector(L, at(-h)).value;
    return {wrap_signed(xp - xm) / (2 * h), wrap_signed_half(lp - lm) / (2 * h)};
}

}  // namespace

int cmd_scan(const Scenario& sc, const CommandOptions& opt) {
    if (!sc.sweep) throw ConfigError("scan requires a sweep block in the scenario");
    std::ostringstream csv;
    csv << "value,case,darboux,fixed_point_count,slopes,slope_phi_x_0,slope_phi_l_0,"
           "marginal,transition\n";
    std::string prev_class;
    for (const double v : sc.sweep->values) {
        const ProtoLineField L = sc.instantiate(v);
        const auto reports = analyze_all(L, L.domain());
        std::string case_label = "none", darboux = "none", slopes;
        std::size_t fp_count = 0;
        if (!reports.empty()) {
            const SingularityReport& s = reports.front();
            if (s.classification) {
                case_label = to_string(s.classification->case_label);
                darboux = to_string(s.classification->darboux);
                fp_count = s.classification->points.size();
                for (std::size_t i = 0; i < s.classification->points.size(); ++i)
                    slopes += (i ? ";" : "") +
                              format_double(s.classification->points[i].slope);
            } else {
                case_label = "Degenerate";
            }
        }
        const RaySlopes rs = ray_slopes_at_zero(L);
        const bool marginal = std::abs(rs.phi_l - 1.0) <= 1e-6;
        const bool transition = !prev_class.empty() && prev_class != case_label;
        prev_class = case_label;
        csv << format_double(v) << ',' << case_label << ',' << darboux << ',' << fp_count
            << ',' << slopes << ',' << format_double(rs.phi_x) << ','
            << format_double(rs.phi_l) << ',' << (marginal ? 1 : 0) << ','
            << (transition ? 1 : 0) << '\n';
    }
    write_file(opt.out_dir / "scan.csv", csv.str());
    return kExitOk;
}

int cmd_index(const Scenario& sc, const CommandOptions& opt) {
    const ProtoLineField L = sc.instantiate();
    Vec2 center{0.0, 0.0};
    if (sc.params.contains("center")) {
        center.x = sc.params["center"].at(0).get<double>();
        center.y = sc.params["center"].at(1).get<double>();
    }
    const double radius = sc.param("radius", 1.0);
    const int samples = sc.param_int("samples", 256);
    const IndexIdentity id = check_index_identity(L, center, radius, samples);

    ordered_json j;
    j["command"] = "index";
    j["center"] = {center.x, center.y};
    j["radius"] = radius;
    j["ind_X"] = id.x.twice_index / 2;
    j["ind_Y"] = id.y.twice_index / 2;
    j["twice_index_B"] = id.line.twice_index;
    j["index_B"] = id.line.twice_index / 2.0;
    j["identity_holds"] = id.holds;
    write_file(opt.out_dir / "index.json", json_text(j));
    return id.holds ? kExitOk : kExitNumericalFailure;
}

int cmd_blowup(const Scenario& sc, const CommandOptions& opt) {
    const ProtoLineField L = sc.instantiate();
    const auto reports = analyze_all(L, L.domain());
    ordered_json j;
    j["command"] = "blowup";
    j["singularities"] = ordered_json::array();
    bool any_ok = false;
    for (const SingularityReport& rep : reports) {
        ordered_json js;
        js["x"] = rep.location.x;
        js["y"] = rep.location.y;
        js["degenerate"] = rep.degenerate;
        if (!rep.degenerate && rep.classification) {
            const double delta = sc.param("delta", 0.5);
            const BlowupField B = lift_phi(L, rep.location, delta,
                                           sc.param_int("blowup_grid_r", 64),
                                           sc.param_int("blowup_grid_theta", 512));
            int saddles = 0, nodes = 0;
            js["zeros"] = ordered_json::array();
            for (const BlowupZero& z : blowup_zeros(B, *rep.classification)) {
                ordered_json jz;
                jz["theta0"] = z.theta0;
                jz["type"] = to_string(z.type);
                jz["stability"] = to_string(z.stability);
                jz["det_DP"] = z.DP.det();
                jz["rel_error"] = z.rel_error;
                js["zeros"].push_back(jz);
                if (z.type == ZeroType::Saddle) ++saddles;
                if (z.type == ZeroType::Node) ++nodes;
            }
            js["saddle_count"] = saddles;
            js["node_count"] = nodes;
            js["jumps"] = ordered_json::array();
            for (int k = 0; k < 4; ++k) {
                const double a = k * kPi / 4.0;
                const JumpReport jr =
                    jump_check(L, rep.location, {std::cos(a), std::sin(a)});
                ordered_json jj;
                jj["direction"] = a;
                jj["jump"] = jr.jump;
                jj["holds"] = jr.holds;
                js["jumps"].push_back(jj);
            }
            any_ok = true;
        }
        j["singularities"].push_back(js);
    }
    write_file(opt.out_dir / "blowup.json", json_text(j));
    return reports.empty() || any_ok ? kExitOk : kExitDegenerateOnly;
}

int cmd_metric(const Scenario& sc, const CommandOptions& opt) {
    const ProtoLineField L = sc.instantiate();
    const BuiltMetric gm = build_metric(L.X(), L.Y());
    const Domain& box = L.domain();
    const int n = opt.grid > 0 ? opt.grid : sc.param_int("grid", 32);

    std::ostringstream csv;
    csv << "x,y,spans,g11,g12,g22,r4\n";
    int degenerate = 0, total = 0;
    ordered_json degenerate_points = ordered_json::array();
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const Vec2 p{box.xmin + (i + 0.5) * box.width() / n,
                         box.ymin + (k + 0.5) * box.height() / n};
            ++total;
            const SpanCheck spn = span_check(gm.frame(), p);
            if (!spn.spans) {
                ++degenerate;
                degenerate_points.push_back({p.x, p.y});
                csv << format_double(p.x) << ',' << format_double(p.y) << ",0,,,,"
                    << format_double(spn.r4) << '\n';
                continue;
            }
            const Mat2 G = gm(p);
            csv << format_double(p.x) << ',' << format_double(p.y) << ",1,"
                << format_double(G.a11) << ',' << format_double(G.a12) << ','
                << format_double(G.a22) << ',' << format_double(spn.r4) << '\n';
        }
    }

    // Parallelogram-law residuals at seeded random points.
    std::mt19937_64 rng(effective_seed(sc, opt));
    std::uniform_real_distribution<double> ux(box.xmin, box.xmax);
    std::uniform_real_distribution<double> uy(box.ymin, box.ymax);
    std::uniform_real_distribution<double> uv(-1.0, 1.0);
    double max_residual = 0.0;
    int tried = 0;
    for (int k = 0; k < 400 && tried < 100; ++k) {
        const Vec2 p{ux(rng), uy(rng)};
        if (!span_check(gm.frame(), p).spans) continue;
        ++tried;
        const Vec2 V{uv(rng), uv(rng)}, W{uv(rng), uv(rng)};
        const double a = min_norm_coeffs(gm.frame(), p, V + W).norm;
        const double b = min_norm_coeffs(gm.frame(), p, V - W).norm;
        const double c = min_norm_coeffs(gm.frame(), p, V).norm;
        const double d = min_norm_coeffs(gm.frame(), p, W).norm;
        max_residual = std::max(
            max_residual, std::abs(a * a + b * b - 2.0 * c * c - 2.0 * d * d));
    }

    ordered_json j;
    j["command"] = "metric";
    j["grid"] = n;
    j["degenerate_count"] = degenerate;
    j["total"] = total;
    j["spd_fraction"] = total > 0 ? 1.0 - double(degenerate) / total : 0.0;
    j["degenerate_points"] = degenerate_points;
    j["max_parallelogram_residual"] = max_residual;
    if (wants(opt, "json")) write_file(opt.out_dir / "metric.json", json_text(j));
    if (wants(opt, "csv")) write_file(opt.out_dir / "metric_samples.csv", csv.str());

    const double frac = total > 0 ? double(degenerate) / total : 1.0;
    return frac <= 0.02 ? kExitOk : kExitNumericalFailure;
}

int cmd_torus_check(const Scenario& sc, const CommandOptions& opt) {
    const ProtoLineField L = sc.instantiate();
    if (!L.domain().torus)
        throw ConfigError("torus-check requires a torus domain");
    const PoincareHopfReport rep = poincare_hopf_torus(L);
    ordered_json j;
    j["command"] = "torus-check";
    j["singularities"] = ordered_json::array();
    for (const TorusSingularity& s : rep.singularities) {
        ordered_json js;
        js["x"] = s.p.x;
        js["y"] = s.p.y;
        js["x_vanishes"] = s.x_vanishes;
        js["y_vanishes"] = s.y_vanishes;
        js["twice_index"] = s.twice_index;
        j["singularities"].push_back(js);
    }
    j["twice_index_sum"] = rep.twice_sum;
    j["euler_characteristic"] = 0;
    j["holds"] = rep.holds;
    write_file(opt.out_dir / "torus_check.json", json_text(j));
    return rep.holds ? kExitOk : kExitNumericalFailure;
}

int run_command(const std::string& name, const Scenario& sc, const CommandOptions& opt) {
    try {
        if (name == "classify") return cmd_classify(sc, opt);
        if (name == "portrait") return cmd_portrait(sc, opt);
        if (name == "scan") return cmd_scan(sc, opt);
        if (name == "index") return cmd_index(sc, opt);
        if (name == "blowup") return cmd_blowup(sc, opt);
        if (name == "metric") return cmd_metric(sc, opt);
        if (name == "torus-check") return cmd_torus_check(sc, opt);
        std::cerr << "unknown command: " << name << "\n";
        return kExitConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalFailure;
    }
}

}  // namespace linefield
