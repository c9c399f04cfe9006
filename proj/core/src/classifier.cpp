#include "linefield/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "linefield/errors.hpp"

namespace linefield {

const char* to_string(NormalKind k) {
    switch (k) {
        case NormalKind::Focus: return "focus";
        case NormalKind::Node: return "node";
        case NormalKind::Saddle: return "saddle";
        case NormalKind::ScaledRotation: return "scaled_rotation";
    }
    return "?";
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::Attractive: return "attractive";
        case Stability::Repulsive: return "repulsive";
        case Stability::Marginal: return "marginal";
    }
    return "?";
}

const char* to_string(CaseLabel c) {
    switch (c) {
        case CaseLabel::Case1: return "Case1";
        case CaseLabel::Case2: return "Case2";
        case CaseLabel::Case3: return "Case3";
        case CaseLabel::Degenerate: return "Degenerate";
    }
    return "?";
}

const char* to_string(Darboux d) {
    switch (d) {
        case Darboux::Lemon: return "Lemon";
        case Darboux::Monstar: return "Monstar";
        case Darboux::Star: return "Star";
        case Darboux::None: return "none";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Lifts

namespace {

// Continuous lift of the angle of (E cos t, sin t), zero at t = 0. Split
// t = k pi + t0 with t0 in [-pi/2, pi/2): the first component E cos t0 is
// nonnegative there, so atan2 stays inside one branch.
double ellipse_angle_lift(double E, double t) {
    const double k = std::floor((t + kPi / 2.0) / kPi);
    const double t0 = t - k * kPi;
    return k * kPi + std::atan2(std::sin(t0), E * std::cos(t0));
}

}  // namespace

double NormalForm::F(double theta) const { return ellipse_angle_lift(E, theta); }

double NormalForm::Fp(double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    return E / (E * E * c * c + s * s);
}

double NormalForm::G(double theta) const {
    switch (kind) {
        case NormalKind::ScaledRotation:
            return theta + phi;
        case NormalKind::Focus:
            return F(theta + phi);
        case NormalKind::Node:
        case NormalKind::Saddle: {
            // Lift of the angle of (E cos(theta-phi), sin(theta+phi)). On each
            // branch psi0 = theta - phi - k pi in [-pi/2, pi/2) the first
            // component is nonnegative; successive branches shift the lift by
            // +pi when cos 2phi > 0 (node) and -pi when cos 2phi < 0 (saddle).
            const double psi = theta - phi;
            const double k = std::floor((psi + kPi / 2.0) / kPi);
            const double psi0 = psi - k * kPi;
            const double base = std::atan2(std::sin(psi0 + 2.0 * phi), E * std::cos(psi0));
            const double dir = std::cos(2.0 * phi) >= 0.0 ? 1.0 : -1.0;
            return dir * k * kPi + base;
        }
    }
    return 0.0;
}

double NormalForm::Gp(double theta) const {
    switch (kind) {
        case NormalKind::ScaledRotation:
            return 1.0;
        case NormalKind::Focus:
            return Fp(theta + phi);
        case NormalKind::Node:
        case NormalKind::Saddle: {
            const double cm = std::cos(theta - phi), sp = std::sin(theta + phi);
            return E * std::cos(2.0 * phi) / (E * E * cm * cm + sp * sp);
        }
    }
    return 0.0;
}

Mat2 NormalForm::reconstruct() const {
    Mat2 Anf;
    if (kind == NormalKind::ScaledRotation) {
        Anf = Mat2::rotation(phi) * C;
    } else {
        const double eps = kind == NormalKind::Focus ? -1.0 : 1.0;
        const double c = std::cos(phi), s = std::sin(phi);
        Anf = Mat2{c, eps * E * s, s / E, c} * C;
    }
    if (axis_swapped) {
        const Mat2 S{0.0, 1.0, 1.0, 0.0};
        Anf = S * Anf * S;
    }
    const Mat2 R = Mat2::rotation(basis_rotation);
    return R * Anf * R.transpose();
}

double NormalForm::to_original_basis(double theta_nf) const {
    Vec2 u{std::cos(theta_nf), std::sin(theta_nf)};
    if (axis_swapped) std::swap(u.x, u.y);
    u = Mat2::rotation(basis_rotation) * u;
    return std::atan2(u.y, u.x);
}

// ---------------------------------------------------------------------------
// Normal form construction

std::pair<double, Mat2> equalize_diagonal(const Mat2& A) {
    const double u = A.a11 - A.a22, v = A.a12 + A.a21;
    double t = 0.0;
    if (u != 0.0 || v != 0.0) {
        double two_t = std::atan2(-u, v);
        if (two_t < 0.0) two_t += kPi;
        if (two_t >= kPi) two_t -= kPi;
        t = 0.5 * two_t;
    }
    const Mat2 R = Mat2::rotation(t);
    return {t, R.transpose() * A * R};
}

NormalForm normal_form(const LinearPLF& P) {
    const double an = P.A.frobenius();
    if (std::abs(P.A.det()) <= 1e-14 * an * an)
        throw PreconditionError("normal_form: det A = 0");
    if (P.Y0.norm2() == 0.0) throw PreconditionError("normal_form: Y0 = 0");

    // Scaled rotations A = C R_rho first; the b,c != 0 construction below
    // does not cover them (and need not: G is theta + rho directly).
    {
        const double cr = 0.5 * (P.A.a11 + P.A.a22);
        const double sr = 0.5 * (P.A.a21 - P.A.a12);
        const double C0 = std::hypot(cr, sr);
        const double rho = std::atan2(sr, cr);
        if ((P.A - Mat2::rotation(rho) * C0).frobenius() < 1e-9 * an) {
            NormalForm nf;
            nf.kind = NormalKind::ScaledRotation;
            nf.C = C0;
            nf.E = 1.0;
            nf.phi = rho;
            nf.alpha = std::atan2(P.Y0.y, P.Y0.x);
            return nf;
        }
    }

    auto [t, Ap] = equalize_diagonal(P.A);
    const double a = 0.5 * (Ap.a11 + Ap.a22);
    double b = Ap.a12, c = Ap.a21;
    if (std::abs(b) < 1e-9 * an || std::abs(c) < 1e-9 * an)
        throw NonGenericLinearization(
            "normal_form: defective repeated-eigenvalue case (bc = 0 after "
            "diagonal equalization)");

    NormalForm nf;
    nf.basis_rotation = t;
    const bool focus = b * c < 0.0;
    nf.kind = focus ? NormalKind::Focus
                    : (P.A.det() > 0.0 ? NormalKind::Node : NormalKind::Saddle);
    double E = std::sqrt(std::abs(b / c));
    if (focus && E < 1.0) {
        // Orientation change (axis swap) enforcing E >= 1 in the focus case.
        std::swap(b, c);
        E = 1.0 / E;
        nf.axis_swapped = true;
    }
    const double d = std::sqrt(std::abs(b * c));
    nf.E = E;
    nf.C = std::sqrt(a * a + d * d);
    nf.phi = std::atan2(E * c, a);  // sin phi = E c / C, cos phi = a / C

    Vec2 yp = Mat2::rotation(-t) * P.Y0;
    if (nf.axis_swapped) std::swap(yp.x, yp.y);
    nf.alpha = std::atan2(yp.y, yp.x);
    return nf;
}

std::optional<KappaPhi> kappa_phi(const NormalForm& nf) {
    if (nf.kind == NormalKind::Saddle || nf.kind == NormalKind::ScaledRotation)
        return std::nullopt;
    const double E2 = nf.E * nf.E;
    const double c2 = std::cos(2.0 * nf.phi), s2 = std::sin(2.0 * nf.phi);
    if (nf.kind == NormalKind::Focus) {
        if (std::abs(nf.E - 1.0) < 1e-9) return std::nullopt;  // (2F-G)' = 1 directly
        const double ax = 2.0 * c2 - 1.0, ay = 2.0 * s2;
        const double A = std::hypot(ax, ay);
        return KappaPhi{(E2 + 1.0) / (A * (E2 - 1.0)), std::atan2(ay, ax), A};
    }
    const double ax = (E2 - 1.0) * c2, ay = -2.0 * (E2 + 1.0) * s2;
    const double A = std::hypot(ax, ay);
    if (A == 0.0)
        throw NumericalFailure("kappa_phi: degenerate node constants");
    return KappaPhi{(E2 + 1.0) * (2.0 - c2) / A, std::atan2(ay, ax), A};
}

// ---------------------------------------------------------------------------
// Fixed points

namespace {

double bisect_root(const NormalForm& nf, double target, double lo, double hi) {
    double flo = nf.H(lo) - target;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = nf.H(mid) - target;
        if (fm == 0.0) return mid;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<FixedPoint> fixed_points(const NormalForm& nf) {
    const double stretch = std::max(nf.E, 1.0 / nf.E);
    const int n = static_cast<int>(std::min(512.0 * std::ceil(stretch), 1048576.0));

    std::vector<double> grid;
    grid.reserve(n + 9);
    for (int i = 0; i <= n; ++i) grid.push_back(-kPi + kTwoPi * i / n);
    // Insert the critical points of 2F-G exactly so every monotone branch is
    // delimited by grid nodes and sign-change bracketing cannot miss a root.
    std::vector<double> critical;
    if (const auto kp = kappa_phi(nf); kp && kp->kappa < 1.0) {
        const double cc = std::acos(-kp->kappa);
        for (const double s : {cc, -cc}) {
            double th = 0.5 * (s - kp->Phi);
            th -= kPi * std::floor((th + kPi) / kPi);  // into [-pi, 0)
            for (int k = 0; k < 2; ++k) {
                const double v = th + k * kPi;
                if (v > -kPi && v < kPi) critical.push_back(v);
            }
        }
        grid.insert(grid.end(), critical.begin(), critical.end());
        std::sort(grid.begin(), grid.end());
    }

    std::vector<double> values(grid.size());
    double hmin = 1e300, hmax = -1e300;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = nf.H(grid[i]);
        hmin = std::min(hmin, values[i]);
        hmax = std::max(hmax, values[i]);
    }

    std::vector<double> roots;
    const int kmin = static_cast<int>(std::ceil((hmin - nf.alpha) / kTwoPi - 1e-12));
    const int kmax = static_cast<int>(std::floor((hmax - nf.alpha) / kTwoPi + 1e-12));
    for (int k = kmin; k <= kmax; ++k) {
        const double target = nf.alpha + kTwoPi * k;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            const double fa = values[i] - target, fb = values[i + 1] - target;
            double root;
            if (fa == 0.0) {
                root = grid[i];
            } else if (fb == 0.0) {
                continue;  // caught as the left endpoint of the next interval
            } else if ((fa < 0.0) != (fb < 0.0)) {
                root = bisect_root(nf, target, grid[i], grid[i + 1]);
            } else {
                continue;
            }
            if (root >= kPi - 1e-12) root -= kTwoPi;
            if (root < -kPi) continue;
            roots.push_back(root);
        }
        // Tangency guard: at an alpha exactly on the exceptional-set boundary
        // the target only touches H at a critical point and sign-change
        // bracketing sees nothing. Register the critical node as a (marginal)
        // root unless a bracketed root already sits next to it.
        for (const double c : critical) {
            if (std::abs(nf.H(c) - target) > 1e-12 * (1.0 + std::abs(target))) continue;
            bool covered = false;
            for (const double r : roots)
                if (std::abs(r - c) < 1e-4) covered = true;
            if (!covered) roots.push_back(c);
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-9; }),
                roots.end());
    if (roots.size() >= 2 && roots.back() - roots.front() > kTwoPi - 1e-9)
        roots.pop_back();

    std::vector<FixedPoint> out;
    for (const double t1 : roots) {
        FixedPoint fp;
        fp.theta1 = t1;
        fp.h_prime = nf.Hp(t1);
        fp.slope = 1.0 - fp.h_prime / (2.0 * nf.Fp(t1));
        if (fp.slope > 1.0 + 1e-6) fp.stability = Stability::Attractive;
        else if (fp.slope < 1.0 - 1e-6) fp.stability = Stability::Repulsive;
        else fp.stability = Stability::Marginal;
        double th = nf.to_original_basis(nf.F(t1));
        if (th >= kPi) th -= kTwoPi;
        fp.theta = th;
        out.push_back(fp);
    }
    std::sort(out.begin(), out.end(),
              [](const FixedPoint& a, const FixedPoint& b) { return a.theta < b.theta; });
    return out;
}

std::vector<FixedPoint> fixed_points(const LinearPLF& P) {
    return fixed_points(normal_form(P));
}

// ---------------------------------------------------------------------------
// Classification

Classification classify(const LinearPLF& P) {
    Classification cl;
    cl.nf = normal_form(P);
    cl.points = fixed_points(cl.nf);
    if (const auto kp = kappa_phi(cl.nf)) {
        cl.kappa = kp->kappa;
        cl.Phi = kp->Phi;
    }

    bool marginal = false;
    for (const FixedPoint& fp : cl.points)
        if (fp.stability == Stability::Marginal) marginal = true;
    cl.hyper_hyperbolic = !marginal;
    if (marginal) {
        cl.case_label = CaseLabel::Degenerate;
        cl.darboux = Darboux::None;
        return cl;
    }

    const std::size_t n = cl.points.size();
    if (n == 1) {
        if (cl.points[0].stability != Stability::Repulsive)
            throw NumericalFailure("classify: unique fixed point is not repulsive");
        cl.case_label = CaseLabel::Case1;
        cl.darboux = Darboux::Lemon;
    } else if (n == 3) {
        // Half-plane test: the three directions lie in an open half-plane iff
        // the largest circular gap between consecutive angles exceeds pi.
        double th[3] = {cl.points[0].theta, cl.points[1].theta, cl.points[2].theta};
        std::sort(th, th + 3);
        const double gaps[3] = {th[1] - th[0], th[2] - th[1], th[0] + kTwoPi - th[2]};
        int widest = 0;
        for (int i = 1; i < 3; ++i)
            if (gaps[i] > gaps[widest]) widest = i;
        if (gaps[widest] > kPi) {
            // Angular order inside the arc starts right after the widest gap.
            Stability order[3];
            for (int i = 0; i < 3; ++i) {
                const double want = th[(widest + 1 + i) % 3];
                for (const FixedPoint& fp : cl.points)
                    if (fp.theta == want) order[i] = fp.stability;
            }
            if (order[0] != Stability::Repulsive || order[1] != Stability::Attractive ||
                order[2] != Stability::Repulsive)
                throw NumericalFailure(
                    "classify: half-plane case without repulsive/attractive/repulsive "
                    "pattern");
            cl.case_label = CaseLabel::Case2;
            cl.darboux = Darboux::Monstar;
        } else {
            for (const FixedPoint& fp : cl.points)
                if (fp.stability != Stability::Repulsive)
                    throw NumericalFailure(
                        "classify: spanning configuration with a non-repulsive fixed "
                        "point");
            cl.case_label = CaseLabel::Case3;
            cl.darboux = Darboux::Star;
        }
    } else {
        throw NumericalFailure("classify: " + std::to_string(n) +
                               " fixed points (expected 1 or 3)");
    }

    // Cross-validation against the normal-form kind and the sign-law bound.
    if (cl.nf.kind == NormalKind::Saddle && cl.case_label != CaseLabel::Case3)
        throw NumericalFailure("classify: saddle kind must give Case3");
    if (cl.kappa && *cl.kappa >= 1.0 && cl.case_label != CaseLabel::Case1)
        throw NumericalFailure("classify: kappa >= 1 must give Case1");
    return cl;
}

std::vector<AlphaInterval> monstar_alpha_window(const NormalForm& nf) {
    const auto kp = kappa_phi(nf);
    if (!kp || kp->kappa >= 1.0) return {};
    // (2F-G)' changes sign at cos(2t+Phi) = -kappa. The descending branch
    // runs from the local maximum (2t+Phi = c) to the local minimum
    // (2t+Phi = 2pi - c); targets strictly between the branch endpoint
    // values have three preimages.
    const double c = std::acos(-kp->kappa);
    const double t_max = 0.5 * (c - kp->Phi);
    const double t_min = 0.5 * (kTwoPi - c - kp->Phi);
    const double hi = nf.H(t_max), lo = nf.H(t_min);
    if (!(hi > lo)) return {};
    std::vector<AlphaInterval> out;
    out.push_back({wrap_two_pi(lo), hi - lo});
    out.push_back({wrap_two_pi(lo + kPi), hi - lo});
    return out;
}

}  // namespace linefield
