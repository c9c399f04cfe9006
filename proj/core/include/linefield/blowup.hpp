#pragma once

#include <vector>

#include "linefield/classifier.hpp"
#include "linefield/fields.hpp"
#include "linefield/index.hpp"

namespace linefield {

// The constant-metric linear model of a proto-line-field at a hyperbolic
// singularity, read in coordinates normalizing g(p) to the identity:
// x = p + S u with S^T g(p) S = id (S the inverse transpose Cholesky factor).
struct Linearization {
    Vec2 p;
    Mat2 S;
    LinearPLF plf;        // (S^-1 DX(p) S, S^-1 Y(p)), roles swapped if needed
    bool swapped = false;  // true when Y vanishes at p and X plays the constant role
};

// Throws PreconditionError unless exactly one field vanishes at p (the zero
// must be hyperbolic for downstream use; that is checked by callers).
Linearization linearize(const ProtoLineField& L, Vec2 p);

// The blow-up field P(r, theta) = (r cos(phi - theta), sin(phi - theta)) on
// (-delta, delta) x (R / 4pi Z), where phi is the continuous lift of the
// bisector direction in the normalized polar chart, extended to r = 0 by the
// linearization and evenly to r < 0.
class BlowupField {
public:
    double delta() const { return delta_; }
    const Linearization& linearization() const { return lin_; }

    // The lift phi(r, theta); even in r. theta is expected within a small
    // overhang of [0, 4pi] (values are branch-matched against the grid).
    double phi_lift(double r, double theta) const;

    Vec2 P(double r, double theta) const {
        const double d = phi_lift(r, theta) - theta;
        return {r * std::cos(d), std::sin(d)};
    }

    int grid_rows() const { return nr_; }
    int grid_cols() const { return nth_; }
    double grid_value(int i, int j) const { return grid_[i * (nth_ + 1) + j]; }

private:
    friend BlowupField lift_phi(const ProtoLineField&, Vec2, double, int, int);
    BlowupField(const ProtoLineField& L, Linearization lin, double delta);

    bool build(int nr, int nth);  // false on unwrap failure
    double phi_raw(double r, double theta) const;
    double phi_bar_raw(double theta) const;

    ProtoLineField L_;
    Linearization lin_;
    double delta_;
    int nr_ = 0, nth_ = 0;
    std::vector<double> grid_;  // (nr_+1) rows x (nth_+1) cols, row 0 is r = 0
};

// Computes the lift on an (n_r x n_theta) grid over (0, delta] x [0, 4pi],
// verifying that p is the only singularity within the normalized disc of
// radius delta. Unwrap failures refine the grid once, then fail.
BlowupField lift_phi(const ProtoLineField& L, Vec2 p, double delta, int n_r = 64,
                     int n_theta = 512);

struct BlowupZero {
    double theta0 = 0.0;  // in [0, 4pi)
    ZeroType type = ZeroType::Degenerate;
    Mat2 DP;
    double rel_error = 0.0;    // finite-difference DP vs the closed form
    bool degenerate = false;   // |det DP| below tolerance
    Stability stability = Stability::Marginal;  // of the underlying fixed point
};

// Zeros of P at (0, theta0) for every fixed point of the linearization, with
// DP estimated by central differences (step 1e-5) and checked against
// cos(phi(0,theta0) - theta0) * diag(1, slope - 1) to 1e-3 relative.
// Saddle <=> det DP < 0 <=> repulsive; node <=> det DP > 0 <=> attractive.
std::vector<BlowupZero> blowup_zeros(const BlowupField& B, const Classification& cl);

struct JumpReport {
    double limit_plus = 0.0;   // one-sided limit of the angle between the
    double limit_minus = 0.0;  // curve tangent and the bisector, mod pi
    double jump = 0.0;         // (limit_plus - limit_minus) mod pi, in (-pi/2, pi/2]
    bool singular = false;     // whether p is a singular point at all
    bool holds = false;        // singular and jump == pi/2 mod pi within 1e-3
};

// Samples the bisector angle along t -> p + t * direction for
// t in +-[1e-6, 1e-2] and extrapolates the two one-sided limits.
JumpReport jump_check(const ProtoLineField& L, Vec2 p, Vec2 direction);

}  // namespace linefield
