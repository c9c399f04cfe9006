#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "linefield/geometry.hpp"

namespace linefield {

// A linear proto-line-field: X(v) = A v together with a constant field Y0,
// on the Euclidean plane.
struct LinearPLF {
    Mat2 A;
    Vec2 Y0;
};

enum class NormalKind { Focus, Node, Saddle, ScaledRotation };

const char* to_string(NormalKind k);

// Normal form of a linear hyperbolic field in an adapted orthonormal basis:
//
//   focus:        X(E cos t, sin t) = C (E cos(t+phi), sin(t+phi)),  E >= 1
//   node/saddle:  X(E cos t, sin t) = C (E cos(t-phi), sin(t+phi))
//   scaled rotation: A = C R_phi  (handled outside the b,c != 0 construction)
//
// F is the continuous lift of the angle of (E cos t, sin t) with F(0) = 0;
// G the lift of the angle of the image vector. Their closed-form derivatives
// are exposed alongside. alpha is the angle of Y0 read in the final basis.
struct NormalForm {
    NormalKind kind = NormalKind::ScaledRotation;
    double E = 1.0;
    double C = 1.0;
    double phi = 0.0;
    double basis_rotation = 0.0;  // rotation angle t of equalize_diagonal
    bool axis_swapped = false;    // focus only: orientation change enforcing E >= 1
    double alpha = 0.0;

    double F(double theta) const;
    double Fp(double theta) const;
    double G(double theta) const;
    double Gp(double theta) const;
    double H(double theta) const { return 2.0 * F(theta) - G(theta); }
    double Hp(double theta) const { return 2.0 * Fp(theta) - Gp(theta); }

    // Rebuilds A in the original coordinates (inverse of the basis changes).
    Mat2 reconstruct() const;

    // Maps a ray angle in the normal-form basis back to the original basis.
    double to_original_basis(double theta_nf) const;
};

// Rotation R_t with R_t^{-1} A R_t of equal diagonal; t in [0, pi/2),
// closed form from (a11-a22) cos 2t + (a12+a21) sin 2t = 0.
std::pair<double, Mat2> equalize_diagonal(const Mat2& A);

// Throws PreconditionError if det A = 0 or Y0 = 0, NonGenericLinearization in
// the defective repeated-eigenvalue case.
NormalForm normal_form(const LinearPLF& P);

struct KappaPhi {
    double kappa = 0.0;
    double Phi = 0.0;
    double A = 0.0;
};

// The sign-law constants of the focus/node cases: sign((2F-G)'(t)) equals
// sign(cos(2t+Phi)+kappa). Empty for saddles ((2F-G)' > 0 everywhere),
// scaled rotations, and foci with E = 1 (the kappa formula divides by E^2-1
// and (2F-G)' = 1 > 0 directly).
std::optional<KappaPhi> kappa_phi(const NormalForm& nf);

enum class Stability { Attractive, Repulsive, Marginal };

const char* to_string(Stability s);

// A fixed point of phi_L: a ray direction where the bisector line is
// parallel to the ray. theta is reported in the basis of the input
// LinearPLF; slope is d phi_L / d theta there (attractive > 1, repulsive < 1,
// marginal within 1e-6 of 1).
struct FixedPoint {
    double theta = 0.0;    // in [-pi, pi)
    double slope = 0.0;    // = G'/(2F') at the preimage
    Stability stability = Stability::Marginal;
    double theta1 = 0.0;   // preimage in the normal-form basis: theta = F(theta1)
    double h_prime = 0.0;  // (2F-G)'(theta1)
};

// All solutions of 2F(t) - G(t) = alpha (mod 2pi) on [-pi, pi), mapped
// through F. Sign-change bracketing on a grid of >= 512 max(E, 1/E) nodes
// (critical points of 2F-G inserted exactly), then bisection to 1e-12.
std::vector<FixedPoint> fixed_points(const NormalForm& nf);
std::vector<FixedPoint> fixed_points(const LinearPLF& P);

enum class CaseLabel { Case1, Case2, Case3, Degenerate };
enum class Darboux { Lemon, Monstar, Star, None };

const char* to_string(CaseLabel c);
const char* to_string(Darboux d);

struct Classification {
    CaseLabel case_label = CaseLabel::Degenerate;
    Darboux darboux = Darboux::None;
    std::vector<FixedPoint> points;
    std::optional<double> kappa;
    std::optional<double> Phi;
    bool hyper_hyperbolic = false;
    NormalForm nf;
};

// Case assignment per the three-way classification: a unique repulsive fixed
// point (Lemon); three fixed points in an open half-plane, repulsive /
// attractive / repulsive in angular order (Monstar); three repulsive fixed
// points not contained in any half-plane (Star). Any marginal fixed point
// yields Degenerate.
Classification classify(const LinearPLF& P);

// A half-open arc of angles mod 2pi.
struct AlphaInterval {
    double lo = 0.0;
    double len = 0.0;
    bool contains(double alpha) const { return wrap_two_pi(alpha - lo) < len; }
    double hi() const { return lo + len; }
};

// The alpha-intervals (mod 2pi) in which classify yields Case2. Empty when
// kappa >= 1 or for saddle / scaled-rotation kinds. Boundary values form the
// exceptional set.
std::vector<AlphaInterval> monstar_alpha_window(const NormalForm& nf);

}  // namespace linefield
