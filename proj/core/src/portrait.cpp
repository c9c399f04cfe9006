#include "linefield/portrait.hpp"

#include <cmath>
#include <unordered_set>

#include "linefield/errors.hpp"

namespace linefield {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::Boundary: return "boundary";
        case Termination::Singularity: return "singularity";
        case Termination::StepLimit: return "step_limit";
    }
    return "?";
}

namespace {

bool near_singularity(const ProtoLineField& L, Vec2 p) {
    return is_singular_point(L, p, 1e-6);
}

// Unit direction along the bisector at p whose sign aligns with ref.
Vec2 oriented_direction(const ProtoLineField& L, Vec2 p, Vec2 ref) {
    const Vec2 d = bisector(L, p).direction();
    return d.dot(ref) >= 0.0 ? d : -d;
}

Streamline integrate_one_way(const ProtoLineField& L, Vec2 p0, Vec2 dir0, double step,
                             double max_len) {
    Streamline s;
    s.points.push_back(p0);
    Vec2 p = p0;
    Vec2 ref = dir0;
    const Domain& dom = L.domain();
    const int max_steps = static_cast<int>(max_len / step) + 8;
    for (int it = 0; it < max_steps; ++it) {
        if (near_singularity(L, p)) {
            s.termination = Termination::Singularity;
            return s;
        }
        Vec2 next;
        try {
            const Vec2 k1 = oriented_direction(L, p, ref);
            const Vec2 k2 = oriented_direction(L, p + k1 * (step / 2.0), k1);
            const Vec2 k3 = oriented_direction(L, p + k2 * (step / 2.0), k2);
            const Vec2 k4 = oriented_direction(L, p + k3 * step, k3);
            next = p + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (step / 6.0);
        } catch (const Error&) {
            // A stage point fell into the singular disc.
            s.termination = Termination::Singularity;
            return s;
        }
        ref = (next - p).unit();
        s.arc_length += (next - p).norm();
        s.points.push_back(next);
        p = next;
        if (!dom.torus && !dom.contains(p)) {
            s.termination = Termination::Boundary;
            return s;
        }
        if (s.arc_length >= max_len) break;
    }
    s.termination = Termination::StepLimit;
    return s;
}

}  // namespace

Streamline integrate_streamline(const ProtoLineField& L, Vec2 p0, double step,
                                double max_len, std::optional<Vec2> initial_dir) {
    if (near_singularity(L, p0))
        throw PreconditionError("integrate_streamline: direction undefined at p0");
    if (initial_dir) {
        return integrate_one_way(L, p0, initial_dir->unit(), step, max_len);
    }
    const Vec2 d0 = bisector(L, p0).direction();
    Streamline fwd = integrate_one_way(L, p0, d0, step, max_len);
    Streamline bwd = integrate_one_way(L, p0, -d0, step, max_len);
    Streamline merged;
    merged.points.assign(bwd.points.rbegin(), bwd.points.rend());
    merged.points.insert(merged.points.end(), fwd.points.begin() + 1, fwd.points.end());
    merged.arc_length = fwd.arc_length + bwd.arc_length;
    const auto rank = [](Termination t) {
        return t == Termination::Singularity ? 2 : (t == Termination::Boundary ? 1 : 0);
    };
    merged.termination =
        rank(fwd.termination) >= rank(bwd.termination) ? fwd.termination : bwd.termination;
    return merged;
}

SingularityReport analyze_singularity(const ProtoLineField& L, Vec2 p, double radius) {
    SingularityReport rep;
    rep.location = p;
    rep.index_radius = radius;
    const double sx = g_norm(L.metric(), p, L.X()(p));
    const double sy = g_norm(L.metric(), p, L.Y()(p));
    const double tol = 1e-6 * local_scale(p);
    rep.x_vanishes = sx < tol;
    rep.y_vanishes = sy < tol;
    if (rep.x_vanishes && rep.y_vanishes) {
        rep.degenerate = true;
        rep.note = "zeros of X and Y are not disjoint";
        return rep;
    }
    if (!rep.x_vanishes && !rep.y_vanishes) {
        rep.degenerate = true;
        rep.note = "neither field vanishes";
        return rep;
    }
    const VectorField& V = rep.x_vanishes ? L.X() : L.Y();
    rep.det_jacobian = V.jacobian(p).det();
    rep.zero_type = hyperbolic_zero_type(V, p);
    // The classification gate is invertibility of the Jacobian. A zero_type
    // of "degenerate" with invertible Jacobian is the repeated-eigenvalue
    // boundary: scalar matrices classify through the scaled-rotation path,
    // defective ones surface as NonGenericLinearization below.
    if (std::abs(rep.det_jacobian) < 1e-8) {
        rep.degenerate = true;
        rep.note = "non-invertible Jacobian";
        return rep;
    }
    try {
        rep.vf_index = winding_index_vf(V, p, radius).twice_index / 2;
        rep.twice_line_index = winding_index_lf(L, p, radius).twice_index;
        rep.lin = linearize(L, p);
        rep.classification = classify(rep.lin->plf);
        if (rep.classification->case_label == CaseLabel::Degenerate) {
            rep.degenerate = true;
            rep.note = "marginal fixed point (exceptional set)";
        }
    } catch (const NonGenericLinearization& e) {
        rep.degenerate = true;
        rep.note = e.what();
    } catch (const Error& e) {
        rep.degenerate = true;
        rep.note = e.what();
    }
    return rep;
}

std::vector<Streamline> skeleton(const ProtoLineField& L, const SingularityReport& rep,
                                 double r0, double step, double max_len) {
    std::vector<Streamline> out;
    if (rep.degenerate || !rep.classification || !rep.lin) return out;
    for (const FixedPoint& fp : rep.classification->points) {
        const Vec2 u{std::cos(fp.theta), std::sin(fp.theta)};
        const Vec2 dir = rep.lin->S * u;
        const Vec2 seed = rep.location + dir * r0;
        try {
            Streamline s = integrate_one_way(L, seed, dir.unit(), step, max_len);
            s.is_skeleton = true;
            s.tag_theta = fp.theta;
            s.tag_stability = fp.stability;
            out.push_back(std::move(s));
        } catch (const Error&) {
            // Seed landed inside the exclusion disc; skip this ray.
        }
    }
    return out;
}

namespace {

struct CellSet {
    double cell = 1.0;
    std::unordered_set<long long> cells;

    long long key(Vec2 p) const {
        const long long ix = static_cast<long long>(std::floor(p.x / cell));
        const long long iy = static_cast<long long>(std::floor(p.y / cell));
        return ix * 2000003LL + iy;
    }
    void mark(Vec2 p) {
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                cells.insert(key({p.x + dx * cell, p.y + dy * cell}));
    }
    bool hit(Vec2 p) const { return cells.count(key(p)) > 0; }
};

}  // namespace

std::vector<SingularityReport> analyze_all(const ProtoLineField& L, const Domain& box) {
    std::vector<Vec2> locations;
    for (const Zero& z : find_zeros(L.X(), box).zeros) locations.push_back(z.p);
    for (const Zero& z : find_zeros(L.Y(), box).zeros) {
        bool dup = false;
        for (const Vec2& q : locations)
            if (box.separation(q, z.p).norm() < 1e-6) dup = true;
        if (!dup) locations.push_back(z.p);
    }

    double min_gap = 0.5 * std::min(box.width(), box.height());
    for (std::size_t i = 0; i < locations.size(); ++i)
        for (std::size_t j = i + 1; j < locations.size(); ++j)
            min_gap = std::min(min_gap, box.separation(locations[i], locations[j]).norm());

    std::vector<SingularityReport> out;
    for (const Vec2& p : locations)
        out.push_back(analyze_singularity(L, p, 0.4 * min_gap));
    return out;
}

Portrait make_portrait(const ProtoLineField& L, const Domain& box,
                       const PortraitOptions& opt) {
    Portrait out;
    out.box = box;
    out.singularities = analyze_all(L, box);

    CellSet visited;
    visited.cell = std::max(opt.step / 2.0, 1e-9);
    const auto admit = [&](Streamline&& s) {
        for (const Vec2& q : s.points) visited.mark(q);
        out.streamlines.push_back(std::move(s));
    };

    for (const SingularityReport& rep : out.singularities)
        for (Streamline& s : skeleton(L, rep, opt.skeleton_r0, opt.step, opt.max_len))
            admit(std::move(s));

    const int n = opt.seed_grid;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec2 seed{box.xmin + (i + 0.5) * box.width() / n,
                            box.ymin + (j + 0.5) * box.height() / n};
            if (visited.hit(seed)) continue;
            try {
                admit(integrate_streamline(L, seed, opt.step, opt.max_len));
            } catch (const Error&) {
                // seed inside an exclusion disc
            }
        }
    }
    return out;
}

}  // namespace linefield
