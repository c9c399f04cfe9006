#include "linefield/index.hpp"

#include <cmath>

#include "linefield/errors.hpp"

namespace linefield {

namespace {

// Shared unwrapping driver. `angle(t)` returns the raw angle at circle
// parameter t; increments are reduced mod `period` into (-period/2, period/2]
// and accumulated. The index is the total variation divided by `period`.
struct Unwrapped {
    double variation = 0.0;
    double max_step = 0.0;
};

Unwrapped unwrap_circle(const std::function<double(double)>& angle, int n, double period) {
    Unwrapped u;
    double prev = angle(0.0);
    for (int k = 1; k <= n; ++k) {
        const double t = double(k) / n;
        const double a = angle(t);
        double d = std::remainder(a - prev, period);
        if (d <= -period / 2.0) d = period / 2.0;
        u.max_step = std::max(u.max_step, std::abs(d));
        u.variation += d;
        prev = a;
    }
    return u;
}

IndexResult winding_with_retry(const std::function<double(double)>& angle, Vec2 center,
                               double radius, int n, double period) {
    if (n < 64) n = 64;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const Unwrapped u = unwrap_circle(angle, n, period);
        const double raw = u.variation / period;
        const double rounded = std::round(raw);
        if (u.max_step < kPi / 2.0 && std::abs(raw - rounded) <= 0.1) {
            IndexResult r;
            r.twice_index = static_cast<int>(rounded) * (period == kTwoPi ? 2 : 1);
            r.center = center;
            r.radius = radius;
            r.samples = n;
            r.max_step = u.max_step;
            return r;
        }
        n *= 4;
    }
    throw NumericalFailure("winding index: unsafe unwrapping after refinement");
}

}  // namespace

IndexResult winding_index_vf(const VectorField& V, Vec2 center, double radius, int n) {
    auto angle = [&](double t) {
        const double th = kTwoPi * t;
        const Vec2 p{center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
        const Vec2 v = V(p);
        if (v.norm() < 1e-12 * local_scale(p))
            throw PreconditionError("winding_index_vf: field vanishes on the circle");
        return std::atan2(v.y, v.x);
    };
    return winding_with_retry(angle, center, radius, n, kTwoPi);
}

IndexResult winding_index_lf(const std::function<LineAngle(Vec2)>& section, Vec2 center,
                             double radius, int n) {
    auto angle = [&](double t) {
        const double th = kTwoPi * t;
        const Vec2 p{center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
        return section(p).value;
    };
    return winding_with_retry(angle, center, radius, n, kPi);
}

IndexResult winding_index_lf(const ProtoLineField& L, Vec2 center, double radius, int n) {
    return winding_index_lf([&L](Vec2 p) { return bisector(L, p); }, center, radius, n);
}

IndexIdentity check_index_identity(const ProtoLineField& L, Vec2 p, double radius, int n) {
    const double s = 1e-9 * local_scale(p);
    if (g_norm(L.metric(), p, L.X()(p)) < s && g_norm(L.metric(), p, L.Y()(p)) < s)
        throw PreconditionError(
            "check_index_identity: both fields vanish at the center (zeros of X and Y "
            "are not disjoint)");
    IndexIdentity r;
    r.x = winding_index_vf(L.X(), p, radius, n);
    r.y = winding_index_vf(L.Y(), p, radius, n);
    r.line = winding_index_lf(L, p, radius, n);
    r.holds = r.line.twice_index == (r.x.twice_index + r.y.twice_index) / 2;
    return r;
}

const char* to_string(ZeroType t) {
    switch (t) {
        case ZeroType::Focus: return "focus";
        case ZeroType::Node: return "node";
        case ZeroType::Saddle: return "saddle";
        case ZeroType::Degenerate: return "degenerate";
    }
    return "?";
}

ZeroType hyperbolic_zero_type(const VectorField& V, Vec2 p) {
    const Mat2 J = V.jacobian(p);
    if (V(p).norm() > 1e-9 * std::max(J.frobenius() * local_scale(p), 1e-12))
        throw PreconditionError("hyperbolic_zero_type: V does not vanish at p");
    const double f = J.frobenius();
    const double tol = 1e-9 * f * f;
    const double det = J.det();
    if (det < -tol) return ZeroType::Saddle;
    if (det > tol) {
        const double disc = J.trace() * J.trace() - 4.0 * det;
        if (disc < -tol) return ZeroType::Focus;
        if (disc > tol) return ZeroType::Node;
    }
    return ZeroType::Degenerate;
}

PoincareHopfReport poincare_hopf_torus(const ProtoLineField& L) {
    if (!L.domain().torus)
        throw PreconditionError("poincare_hopf_torus: L is not declared on a torus");
    const ZeroSearch zx = find_zeros(L.X(), L.domain());
    const ZeroSearch zy = find_zeros(L.Y(), L.domain());

    PoincareHopfReport report;
    std::vector<Vec2> all;
    for (const Zero& z : zx.zeros) {
        TorusSingularity s;
        s.p = z.p;
        s.x_vanishes = true;
        report.singularities.push_back(s);
        all.push_back(z.p);
    }
    for (const Zero& z : zy.zeros) {
        bool shared = false;
        for (TorusSingularity& s : report.singularities) {
            if (L.domain().separation(s.p, z.p).norm() < 1e-6) {
                s.y_vanishes = true;
                shared = true;
            }
        }
        if (shared)
            throw PreconditionError(
                "poincare_hopf_torus: zeros of X and Y are not disjoint");
        TorusSingularity s;
        s.p = z.p;
        s.y_vanishes = true;
        report.singularities.push_back(s);
        all.push_back(z.p);
    }

    // Winding radius: stay well inside the gap to the nearest other
    // singularity and inside a fundamental-domain half-period.
    double min_dist = 0.5 * std::min(L.domain().width(), L.domain().height());
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            min_dist = std::min(min_dist, L.domain().separation(all[i], all[j]).norm());

    for (TorusSingularity& s : report.singularities) {
        s.radius = 0.4 * min_dist;
        s.twice_index = winding_index_lf(L, s.p, s.radius).twice_index;
        report.twice_sum += s.twice_index;
    }
    report.holds = report.twice_sum == 0;
    return report;
}

}  // namespace linefield
