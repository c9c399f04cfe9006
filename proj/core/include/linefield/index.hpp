#pragma once

#include <functional>
#include <vector>

#include "linefield/fields.hpp"
#include "linefield/geometry.hpp"

namespace linefield {

// Result of a winding-number computation along a counterclockwise circle.
// The index is stored as twice its value so that half-integers stay exact;
// vector fields always produce an even stored value.
struct IndexResult {
    int twice_index = 0;
    Vec2 center;
    double radius = 0.0;
    int samples = 0;
    double max_step = 0.0;  // largest single-step angle change seen

    double index() const { return twice_index / 2.0; }
};

// Total signed variation of the Euclidean angle of V along the circle,
// divided by 2pi. Retries once with 4n samples when unwrapping is unsafe
// (a step of at least pi/2) or the rounding residue exceeds 0.1.
IndexResult winding_index_vf(const VectorField& V, Vec2 center, double radius, int n = 256);

// Same for a line-angle section (values taken mod pi, jump threshold pi/2).
IndexResult winding_index_lf(const std::function<LineAngle(Vec2)>& section, Vec2 center,
                             double radius, int n = 256);

// Winding of the bisector line field of L.
IndexResult winding_index_lf(const ProtoLineField& L, Vec2 center, double radius,
                             int n = 256);

struct IndexIdentity {
    IndexResult x, y, line;
    bool holds = false;  // twice-index(B) == ind(X) + ind(Y)
};

// Checks twice-index of the bisector against ind(X) + ind(Y), all three
// computed independently.
IndexIdentity check_index_identity(const ProtoLineField& L, Vec2 p, double radius,
                                   int n = 256);

enum class ZeroType { Focus, Node, Saddle, Degenerate };

const char* to_string(ZeroType t);

// Classifies a zero of V from its Jacobian: saddle (det < 0), focus
// (det > 0, discriminant < 0), node (det > 0, discriminant > 0), otherwise
// degenerate. Tolerance scales with |J|^2.
ZeroType hyperbolic_zero_type(const VectorField& V, Vec2 p);

struct TorusSingularity {
    Vec2 p;
    bool x_vanishes = false, y_vanishes = false;
    int twice_index = 0;
    double radius = 0.0;
};

struct PoincareHopfReport {
    std::vector<TorusSingularity> singularities;
    int twice_sum = 0;
    bool holds = false;  // sum equals chi(torus) = 0
};

// Sums line-field indices over all singularities of L on the flat torus and
// checks the total against the Euler characteristic (0). Throws when the
// zeros of X and Y are not isolated from each other.
PoincareHopfReport poincare_hopf_torus(const ProtoLineField& L);

}  // namespace linefield
