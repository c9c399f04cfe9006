#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "linefield/expr.hpp"
#include "linefield/geometry.hpp"

namespace linefield {

// A planar vector field with a consistent Jacobian. Symbolically backed
// fields carry exact component partials; function-backed fields (needed for
// realized line fields) fall back to central differences.
class VectorField {
public:
    VectorField(Expr cx, Expr cy);

    using ValueFn = std::function<Vec2(Vec2)>;
    static VectorField from_function(ValueFn value);

    Vec2 operator()(Vec2 p) const;
    Mat2 jacobian(Vec2 p) const;

    bool symbolic() const { return symbolic_; }
    // Component and partial expressions; only valid for symbolic fields.
    const Expr& component(int i) const;
    const Expr& partial(int i, char var) const;

private:
    VectorField() = default;
    bool symbolic_ = false;
    Expr cx_, cy_, dxx_, dxy_, dyx_, dyy_;
    ValueFn fn_;
};

// A Riemannian metric given by coefficient expressions g11, g12, g22.
// Evaluation checks symmetric positive definiteness at the queried point.
class Metric {
public:
    Metric(Expr g11, Expr g12, Expr g22);
    static Metric euclidean();

    Mat2 operator()(Vec2 p) const;  // throws MetricError if not SPD

    const Expr& g11() const { return g11_; }
    const Expr& g12() const { return g12_; }
    const Expr& g22() const { return g22_; }
    bool is_euclidean() const { return euclidean_; }

private:
    Expr g11_, g12_, g22_;
    bool euclidean_ = false;
};

// Axis-aligned rectangle, optionally with opposite sides identified (flat
// torus with periods xmax-xmin, ymax-ymin).
struct Domain {
    double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
    bool torus = false;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    bool contains(Vec2 p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    Vec2 wrap(Vec2 p) const;              // reduce into the fundamental domain
    Vec2 separation(Vec2 a, Vec2 b) const;  // shortest a-b, periodic if torus
};

// A pair of vector fields with a metric on a planar domain. The line field
// bisecting (X, Y) for g is defined away from the zeros of X and Y.
class ProtoLineField {
public:
    ProtoLineField(VectorField X, VectorField Y, Metric g, Domain domain);

    const VectorField& X() const { return X_; }
    const VectorField& Y() const { return Y_; }
    const Metric& metric() const { return g_; }
    const Domain& domain() const { return domain_; }

private:
    VectorField X_, Y_;
    Metric g_;
    Domain domain_;
};

struct Frame {
    Vec2 e1, e2;  // positively oriented, g-orthonormal
};

// Gram-Schmidt of ((1,0), (0,1)): e1 is the positive multiple of (1,0) with
// g-norm 1, e2 completes a positively oriented g-orthonormal frame.
Frame orthonormal_frame(const Metric& g, Vec2 p);

// Components of v in the frame at p (inner products against e1, e2).
Vec2 frame_coords(const Metric& g, Vec2 p, Vec2 v);

// Frame angle of a nonzero vector, raw value in (-pi, pi].
double frame_angle(const Metric& g, Vec2 p, Vec2 v);

// Counterclockwise angle from v to w measured with respect to g at p,
// canonical in [0, 2pi). Throws PreconditionError on zero input.
VecAngle angle_between(const Metric& g, Vec2 p, Vec2 v, Vec2 w);

// Frame angle of the line halfway from X(p) to Y(p) along the rotation
// taking X to Y, reduced mod pi. Throws PreconditionError when either
// field vanishes at p.
LineAngle bisector(const ProtoLineField& L, Vec2 p);

// The g-norm of a vector at p.
double g_norm(const Metric& g, Vec2 p, Vec2 v);

// Local scale used by vanishing tests: fields built from the grammar are
// Lipschitz on compacts, so 1 + |p| is the right yardstick for linear-like
// growth near the origin of a chart.
inline double local_scale(Vec2 p) { return 1.0 + std::max(std::abs(p.x), std::abs(p.y)); }

// Whether p is a singular point of L (either field g-smaller than
// 1e-12 * local scale).
bool is_singular_point(const ProtoLineField& L, Vec2 p, double tol = 1e-12);

using SectionFn = std::function<LineAngle(Vec2)>;

// Builds Y(p) = damping(p) * R_{2 alpha(p)}(X(p)) with alpha the angle from
// X(p) to the section's line, so that the bisector of (X, Y) reproduces the
// section. Rotation and angles are taken in the frame of `g`.
VectorField realize_line_field(const SectionFn& section, const VectorField& X,
                               Expr damping, const Metric& g = Metric::euclidean());

struct Zero {
    Vec2 p;
    double det_jacobian = 0.0;
    bool degenerate = false;  // |det J| < 1e-8
};

struct ZeroSearch {
    std::vector<Zero> zeros;
    int nonconverged_seeds = 0;
};

// Newton iterations seeded on an n x n grid with steps clipped to the seed
// cell; converged roots are deduplicated at distance 1e-6 (periodic distance
// on a torus). Non-convergent seeds are counted, not fatal.
ZeroSearch find_zeros(const VectorField& V, const Domain& box, int n = 64);

}  // namespace linefield
