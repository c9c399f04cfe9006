#include "linefield/metric_builder.hpp"

#include <cmath>

#include "linefield/errors.hpp"

namespace linefield {

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
    if (!X.symbolic() || !Y.symbolic())
        throw PreconditionError("lie_bracket: symbolic components required");
    const Expr x1 = X.component(0), x2 = X.component(1);
    const Expr y1 = Y.component(0), y2 = Y.component(1);
    // [X, Y]_i = dY_i/dx X_1 + dY_i/dy X_2 - dX_i/dx Y_1 - dX_i/dy Y_2
    const Expr c1 = Y.partial(0, 'x') * x1 + Y.partial(0, 'y') * x2 -
                    X.partial(0, 'x') * y1 - X.partial(0, 'y') * y2;
    const Expr c2 = Y.partial(1, 'x') * x1 + Y.partial(1, 'y') * x2 -
                    X.partial(1, 'x') * y1 - X.partial(1, 'y') * y2;
    return VectorField(c1, c2);
}

BracketFrame::BracketFrame(VectorField X, VectorField Y)
    : X_(std::move(X)),
      Y_(std::move(Y)),
      Z_(lie_bracket(X_, Y_)),
      W1_(lie_bracket(X_, Z_)),
      W2_(lie_bracket(Y_, Z_)) {}

std::array<double, 5> BracketFrame::s1(Vec2 p) const {
    return {X_(p).x, Y_(p).x, Z_(p).x, W1_(p).x, W2_(p).x};
}

std::array<double, 5> BracketFrame::s2(Vec2 p) const {
    return {X_(p).y, Y_(p).y, Z_(p).y, W1_(p).y, W2_(p).y};
}

namespace {

double dot5(const std::array<double, 5>& a, const std::array<double, 5>& b) {
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double BracketFrame::r4(Vec2 p) const {
    const auto a = s1(p), b = s2(p);
    const double aa = dot5(a, a), bb = dot5(b, b), ab = dot5(a, b);
    return aa * bb - ab * ab;
}

SpanCheck span_check(const BracketFrame& F, Vec2 p) {
    const auto a = F.s1(p), b = F.s2(p);
    const double aa = dot5(a, a), bb = dot5(b, b), ab = dot5(a, b);
    const double r4 = aa * bb - ab * ab;
    return {r4 > 1e-12 * aa * bb, r4};
}

MinNormCoeffs min_norm_coeffs(const BracketFrame& F, Vec2 p, Vec2 V) {
    const auto a = F.s1(p), b = F.s2(p);
    const double aa = dot5(a, a), bb = dot5(b, b), ab = dot5(a, b);
    const double r4 = aa * bb - ab * ab;
    if (!(r4 > 1e-12 * aa * bb))
        throw PreconditionError("min_norm_coeffs: frame does not span at p");
    const double l1 = (V.x * bb - V.y * ab) / r4;
    const double l2 = (V.y * aa - V.x * ab) / r4;
    MinNormCoeffs out;
    double n2 = 0.0;
    for (int i = 0; i < 5; ++i) {
        out.u[i] = l1 * a[i] + l2 * b[i];
        n2 += out.u[i] * out.u[i];
    }
    out.norm = std::sqrt(n2);
    const double scale = 1.0 + std::abs(V.x) + std::abs(V.y);
    if (std::abs(dot5(out.u, a) - V.x) > 1e-10 * scale ||
        std::abs(dot5(out.u, b) - V.y) > 1e-10 * scale)
        throw NumericalFailure("min_norm_coeffs: constraints not satisfied");
    return out;
}

Mat2 BuiltMetric::operator()(Vec2 p) const {
    const double n1 = min_norm_coeffs(frame_, p, {1.0, 0.0}).norm;
    const double n2 = min_norm_coeffs(frame_, p, {0.0, 1.0}).norm;
    const double nd = min_norm_coeffs(frame_, p, {1.0, 1.0}).norm;
    const double g11 = n1 * n1, g22 = n2 * n2;
    const double g12 = 0.5 * (nd * nd - g11 - g22);
    if (!(g11 > 0.0) || !(g11 * g22 - g12 * g12 > 0.0))
        throw NumericalFailure("built metric not positive definite at the queried point");
    return {g11, g12, g12, g22};
}

BuiltMetric build_metric(const VectorField& X, const VectorField& Y) {
    return BuiltMetric(BracketFrame(X, Y));
}

}  // namespace linefield
