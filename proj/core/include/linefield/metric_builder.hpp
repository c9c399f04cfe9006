#pragma once

#include <array>

#include "linefield/fields.hpp"
#include "linefield/geometry.hpp"

namespace linefield {

// [X, Y] = DY X - DX Y computed symbolically (components and partials stay
// in the expression grammar, so iterated brackets are exact).
VectorField lie_bracket(const VectorField& X, const VectorField& Y);

// The five fields X, Y, Z = [X,Y], W1 = [X,Z], W2 = [Y,Z] together with the
// row vectors of their components at a point.
class BracketFrame {
public:
    BracketFrame(VectorField X, VectorField Y);

    std::array<double, 5> s1(Vec2 p) const;  // first components
    std::array<double, 5> s2(Vec2 p) const;  // second components
    // r^4 = |s1|^2 |s2|^2 - <s1, s2>^2 (nonnegative; positive iff the five
    // vectors span the plane at p).
    double r4(Vec2 p) const;

    const VectorField& X() const { return X_; }
    const VectorField& Y() const { return Y_; }
    const VectorField& Z() const { return Z_; }
    const VectorField& W1() const { return W1_; }
    const VectorField& W2() const { return W2_; }

private:
    VectorField X_, Y_, Z_, W1_, W2_;
};

struct SpanCheck {
    bool spans = false;
    double r4 = 0.0;
};

// spans iff r4 > 1e-12 |s1|^2 |s2|^2 (scale-free relative test).
SpanCheck span_check(const BracketFrame& F, Vec2 p);

struct MinNormCoeffs {
    std::array<double, 5> u{};
    double norm = 0.0;
};

// Minimal-Euclidean-norm u with <u, s1> = V1, <u, s2> = V2, in closed form:
// u = ((V1|s2|^2 - V2<s1,s2>)/r^4) s1 + ((V2|s1|^2 - V1<s1,s2>)/r^4) s2.
// Throws PreconditionError on a degenerate frame.
MinNormCoeffs min_norm_coeffs(const BracketFrame& F, Vec2 p, Vec2 V);

// The Riemannian metric p -> G(p) with |V|^2 = |u_V|_2^2, assembled from the
// squared norms of the basis vectors and the polarization cross term.
class BuiltMetric {
public:
    explicit BuiltMetric(BracketFrame frame) : frame_(std::move(frame)) {}

    Mat2 operator()(Vec2 p) const;  // SPD wherever the frame spans

    const BracketFrame& frame() const { return frame_; }

private:
    BracketFrame frame_;
};

BuiltMetric build_metric(const VectorField& X, const VectorField& Y);

}  // namespace linefield
