#include "linefield/fields.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "linefield/errors.hpp"

namespace linefield {

namespace {

// Construction self-check: symbolic partials against central differences at a
// fixed set of pseudo-random points. Points where the expression is not
// defined are skipped.
void check_jacobian_consistency(const Expr& cx, const Expr& cy,
                                const Expr partials[4]) {
    std::mt19937_64 rng(0x5eedf1e1du);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const Expr comps[2] = {cx, cy};
    int checked = 0;
    for (int k = 0; k < 40 && checked < 10; ++k) {
        const double x = dist(rng), y = dist(rng);
        const double h = 1e-6;
        try {
            for (int i = 0; i < 2; ++i) {
                const double fdx = (comps[i].eval(x + h, y) - comps[i].eval(x - h, y)) / (2 * h);
                const double fdy = (comps[i].eval(x, y + h) - comps[i].eval(x, y - h)) / (2 * h);
                const double sx = partials[2 * i].eval(x, y);
                const double sy = partials[2 * i + 1].eval(x, y);
                if (!std::isfinite(fdx) || !std::isfinite(fdy)) throw EvalError("skip");
                const double tol = 1e-4 * (1.0 + std::abs(sx) + std::abs(sy) +
                                           std::abs(fdx) + std::abs(fdy));
                if (std::abs(fdx - sx) > tol || std::abs(fdy - sy) > tol)
                    throw NumericalFailure(
                        "vector field Jacobian inconsistent with finite differences for "
                        "component " + comps[i].str());
            }
            ++checked;
        } catch (const EvalError&) {
            // outside the domain of definition; try another point
        }
    }
}

}  // namespace

VectorField::VectorField(Expr cx, Expr cy)
    : symbolic_(true),
      cx_(cx),
      cy_(cy),
      dxx_(cx.diff('x')),
      dxy_(cx.diff('y')),
      dyx_(cy.diff('x')),
      dyy_(cy.diff('y')) {
    const Expr partials[4] = {dxx_, dxy_, dyx_, dyy_};
    check_jacobian_consistency(cx_, cy_, partials);
}

VectorField VectorField::from_function(ValueFn value) {
    VectorField v;
    v.symbolic_ = false;
    v.fn_ = std::move(value);
    return v;
}

Vec2 VectorField::operator()(Vec2 p) const {
    if (symbolic_) return {cx_.eval(p.x, p.y), cy_.eval(p.x, p.y)};
    return fn_(p);
}

Mat2 VectorField::jacobian(Vec2 p) const {
    if (symbolic_) {
        return {dxx_.eval(p.x, p.y), dxy_.eval(p.x, p.y),
                dyx_.eval(p.x, p.y), dyy_.eval(p.x, p.y)};
    }
    const double h = 1e-6 * local_scale(p);
    const Vec2 fx = (fn_({p.x + h, p.y}) - fn_({p.x - h, p.y})) / (2 * h);
    const Vec2 fy = (fn_({p.x, p.y + h}) - fn_({p.x, p.y - h})) / (2 * h);
    return {fx.x, fy.x, fx.y, fy.y};
}

const Expr& VectorField::component(int i) const {
    if (!symbolic_) throw PreconditionError("vector field has no symbolic components");
    return i == 0 ? cx_ : cy_;
}

const Expr& VectorField::partial(int i, char var) const {
    if (!symbolic_) throw PreconditionError("vector field has no symbolic partials");
    if (i == 0) return var == 'x' ? dxx_ : dxy_;
    return var == 'x' ? dyx_ : dyy_;
}

Metric::Metric(Expr g11, Expr g12, Expr g22) : g11_(g11), g12_(g12), g22_(g22) {
    double a, b, c;
    euclidean_ = g11_.is_constant(&a) && g12_.is_constant(&b) && g22_.is_constant(&c) &&
                 a == 1.0 && b == 0.0 && c == 1.0;
}

Metric Metric::euclidean() {
    return Metric(Expr::num(1.0), Expr::num(0.0), Expr::num(1.0));
}

Mat2 Metric::operator()(Vec2 p) const {
    if (euclidean_) return Mat2::identity();
    const double a = g11_.eval(p.x, p.y);
    const double b = g12_.eval(p.x, p.y);
    const double c = g22_.eval(p.x, p.y);
    if (!(a > 0.0) || !(a * c - b * b > 0.0))
        throw MetricError("metric not positive definite at (" + std::to_string(p.x) +
                          ", " + std::to_string(p.y) + ")");
    return {a, b, b, c};
}

Vec2 Domain::wrap(Vec2 p) const {
    if (!torus) return p;
    const double w = width(), h = height();
    double x = std::fmod(p.x - xmin, w);
    if (x < 0.0) x += w;
    double y = std::fmod(p.y - ymin, h);
    if (y < 0.0) y += h;
    return {xmin + x, ymin + y};
}

Vec2 Domain::separation(Vec2 a, Vec2 b) const {
    Vec2 d = a - b;
    if (torus) {
        d.x = std::remainder(d.x, width());
        d.y = std::remainder(d.y, height());
    }
    return d;
}

namespace {

void check_periodicity(const Expr& f, const Domain& d, const char* what) {
    const int k = 8;
    for (int i = 0; i <= k; ++i) {
        const double y = d.ymin + d.height() * i / k;
        const double a = f.eval(d.xmin, y), b = f.eval(d.xmax, y);
        if (std::abs(a - b) > 1e-9 * (1.0 + std::abs(a)))
            throw PreconditionError(std::string(what) +
                                    " is not periodic with the declared x-period");
        const double x = d.xmin + d.width() * i / k;
        const double c = f.eval(x, d.ymin), e = f.eval(x, d.ymax);
        if (std::abs(c - e) > 1e-9 * (1.0 + std::abs(c)))
            throw PreconditionError(std::string(what) +
                                    " is not periodic with the declared y-period");
    }
}

}  // namespace

ProtoLineField::ProtoLineField(VectorField X, VectorField Y, Metric g, Domain domain)
    : X_(std::move(X)), Y_(std::move(Y)), g_(std::move(g)), domain_(domain) {
    if (!(domain_.width() > 0.0) || !(domain_.height() > 0.0))
        throw PreconditionError("empty domain");
    if (domain_.torus) {
        if (X_.symbolic()) {
            check_periodicity(X_.component(0), domain_, "X1");
            check_periodicity(X_.component(1), domain_, "X2");
        }
        if (Y_.symbolic()) {
            check_periodicity(Y_.component(0), domain_, "Y1");
            check_periodicity(Y_.component(1), domain_, "Y2");
        }
        check_periodicity(g_.g11(), domain_, "g11");
        check_periodicity(g_.g12(), domain_, "g12");
        check_periodicity(g_.g22(), domain_, "g22");
    }
}

Frame orthonormal_frame(const Metric& g, Vec2 p) {
    const Mat2 G = g(p);
    const Vec2 e1{1.0 / std::sqrt(G.a11), 0.0};
    // Orthogonalize (0,1) against e1: w = (0,1) - g((0,1), e1) e1.
    const Vec2 w{-G.a12 / G.a11, 1.0};
    const double wn = std::sqrt(w.dot(G * w));
    return {e1, w / wn};
}

double g_norm(const Metric& g, Vec2 p, Vec2 v) {
    const Mat2 G = g(p);
    return std::sqrt(std::max(0.0, v.dot(G * v)));
}

Vec2 frame_coords(const Metric& g, Vec2 p, Vec2 v) {
    const Mat2 G = g(p);
    const Frame f = orthonormal_frame(g, p);
    return {v.dot(G * f.e1), v.dot(G * f.e2)};
}

double frame_angle(const Metric& g, Vec2 p, Vec2 v) {
    const Vec2 c = frame_coords(g, p, v);
    return std::atan2(c.y, c.x);
}

VecAngle angle_between(const Metric& g, Vec2 p, Vec2 v, Vec2 w) {
    if (v.norm2() == 0.0 || w.norm2() == 0.0)
        throw PreconditionError("angle_between: zero vector");
    return VecAngle::of(frame_angle(g, p, w) - frame_angle(g, p, v));
}

bool is_singular_point(const ProtoLineField& L, Vec2 p, double tol) {
    const double s = tol * local_scale(p);
    return g_norm(L.metric(), p, L.X()(p)) < s || g_norm(L.metric(), p, L.Y()(p)) < s;
}

LineAngle bisector(const ProtoLineField& L, Vec2 p) {
    const Vec2 xv = L.X()(p), yv = L.Y()(p);
    const double s = 1e-12 * local_scale(p);
    if (g_norm(L.metric(), p, xv) < s || g_norm(L.metric(), p, yv) < s)
        throw PreconditionError("bisector undefined: field vanishes at (" +
                                std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
    const double tx = frame_angle(L.metric(), p, xv);
    const double delta = wrap_two_pi(frame_angle(L.metric(), p, yv) - tx);
    return LineAngle::of(tx + 0.5 * delta);
}

VectorField realize_line_field(const SectionFn& section, const VectorField& X,
                               Expr damping, const Metric& g) {
    return VectorField::from_function([section, X, damping, g](Vec2 p) -> Vec2 {
        const Vec2 xv = X(p);
        if (xv.norm2() == 0.0)
            throw PreconditionError("realize_line_field: X vanishes inside the domain");
        const double d = damping.eval(p.x, p.y);
        if (d == 0.0)
            throw PreconditionError("realize_line_field: damping vanishes");
        const Frame f = orthonormal_frame(g, p);
        const Vec2 c = frame_coords(g, p, xv);
        const double alpha = wrap_pi(section(p).value - std::atan2(c.y, c.x));
        const Vec2 r = Mat2::rotation(2.0 * alpha) * c;
        return (f.e1 * r.x + f.e2 * r.y) * d;
    });
}

ZeroSearch find_zeros(const VectorField& V, const Domain& box, int n) {
    ZeroSearch out;
    const double cw = box.width() / n, ch = box.height() / n;
    const double clip = std::max(cw, ch);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Vec2 p{box.xmin + (i + 0.5) * cw, box.ymin + (j + 0.5) * ch};
            bool converged = false;
            for (int it = 0; it < 50; ++it) {
                Vec2 f;
                Mat2 J;
                try {
                    f = V(p);
                    J = V.jacobian(p);
                } catch (const Error&) {
                    break;
                }
                const double jn = J.frobenius();
                if (std::abs(J.det()) < 1e-14 * std::max(jn * jn, 1e-30)) break;
                Vec2 step = J.inverse() * (-f);
                const double sn = step.norm();
                if (sn > clip) step = step * (clip / sn);
                p = p + step;
                if (box.torus) p = box.wrap(p);
                const double fscale = std::max(jn * local_scale(p), 1e-12);
                if (step.norm() < 1e-12 * local_scale(p) && V(p).norm() < 1e-10 * fscale) {
                    converged = true;
                    break;
                }
            }
            if (!converged) {
                ++out.nonconverged_seeds;
                continue;
            }
            if (!box.torus) {
                const double mx = 1e-9 * (1.0 + box.width());
                const double my = 1e-9 * (1.0 + box.height());
                if (p.x < box.xmin - mx || p.x > box.xmax + mx || p.y < box.ymin - my ||
                    p.y > box.ymax + my)
                    continue;
            }
            bool dup = false;
            for (const Zero& z : out.zeros) {
                if (box.separation(z.p, p).norm() < 1e-6) {
                    dup = true;
                    break;
                }
            }
            if (dup) continue;
            const double dj = V.jacobian(p).det();
            out.zeros.push_back({p, dj, std::abs(dj) < 1e-8});
        }
    }
    std::sort(out.zeros.begin(), out.zeros.end(), [](const Zero& a, const Zero& b) {
        return a.p.x != b.p.x ? a.p.x < b.p.x : a.p.y < b.p.y;
    });
    return out;
}

}  // namespace linefield
