#include "linefield/blowup.hpp"

#include <cmath>

#include "linefield/errors.hpp"

namespace linefield {

namespace {

bool field_vanishes(const VectorField& V, const Metric& g, Vec2 p) {
    const double jn = V.jacobian(p).frobenius();
    return g_norm(g, p, V(p)) < 1e-9 * std::max(jn, 1e-6) * local_scale(p);
}

}  // namespace

Linearization linearize(const ProtoLineField& L, Vec2 p) {
    const bool zx = field_vanishes(L.X(), L.metric(), p);
    const bool zy = field_vanishes(L.Y(), L.metric(), p);
    if (zx && zy)
        throw PreconditionError("linearize: both fields vanish at p");
    if (!zx && !zy)
        throw PreconditionError("linearize: neither field vanishes at p");

    const Mat2 G = L.metric()(p);
    // Cholesky G = Lo Lo^T, S = Lo^{-T}; then S^T G S = id.
    const double l11 = std::sqrt(G.a11);
    const double l21 = G.a12 / l11;
    const double l22 = std::sqrt(G.a22 - l21 * l21);
    const Mat2 S{1.0 / l11, -l21 / (l11 * l22), 0.0, 1.0 / l22};

    const Mat2 check = S.transpose() * G * S - Mat2::identity();
    if (check.frobenius() > 1e-12)
        throw NumericalFailure("linearize: normalization S^T g S != id");

    Linearization lin;
    lin.p = p;
    lin.S = S;
    lin.swapped = zy;
    const VectorField& zero_field = zy ? L.Y() : L.X();
    const VectorField& const_field = zy ? L.X() : L.Y();
    const Mat2 Sinv = S.inverse();
    lin.plf.A = Sinv * zero_field.jacobian(p) * S;
    lin.plf.Y0 = Sinv * const_field(p);
    return lin;
}

// ---------------------------------------------------------------------------
// BlowupField

BlowupField::BlowupField(const ProtoLineField& L, Linearization lin, double delta)
    : L_(L), lin_(lin), delta_(delta) {}

double BlowupField::phi_raw(double r, double theta) const {
    const Vec2 u{r * std::cos(theta), r * std::sin(theta)};
    const Vec2 x = lin_.p + lin_.S * u;
    const double b = bisector(L_, x).value;
    // Angle against the first normalized coordinate direction S e1.
    const double ref = frame_angle(L_.metric(), x, lin_.S * Vec2{1.0, 0.0});
    return wrap_pi(b - ref);
}

double BlowupField::phi_bar_raw(double theta) const {
    const Vec2 v{std::cos(theta), std::sin(theta)};
    const Vec2 xv = lin_.plf.A * v;
    const double tx = std::atan2(xv.y, xv.x);
    const double d = wrap_two_pi(std::atan2(lin_.plf.Y0.y, lin_.plf.Y0.x) - tx);
    return wrap_pi(tx + 0.5 * d);
}

bool BlowupField::build(int nr, int nth) {
    nr_ = nr;
    nth_ = nth;
    grid_.assign((nr + 1) * (nth + 1), 0.0);
    const double dth = 2.0 * kTwoPi / nth;

    // Rows r > 0, unwrapped along theta (line angles live mod pi).
    for (int i = 1; i <= nr; ++i) {
        const double r = delta_ * i / nr;
        double prev = phi_raw(r, 0.0);
        grid_[i * (nth + 1)] = prev;
        for (int j = 1; j <= nth; ++j) {
            const double raw = phi_raw(r, j * dth);
            const double step = wrap_signed_half(raw - prev);
            if (std::abs(step) >= kPi / 2.0 - 1e-12) return false;
            prev += step;
            grid_[i * (nth + 1) + j] = prev;
        }
    }
    // Row r = 0 from the linearization.
    {
        double prev = phi_bar_raw(0.0);
        grid_[0] = prev;
        for (int j = 1; j <= nth; ++j) {
            const double raw = phi_bar_raw(j * dth);
            const double step = wrap_signed_half(raw - prev);
            if (std::abs(step) >= kPi / 2.0 - 1e-12) return false;
            prev += step;
            grid_[j] = prev;
        }
    }
    // Stitch rows together in r (anchor at column 0, then verify columns).
    for (int i = nr - 1; i >= 0; --i) {
        const double below = grid_[(i + 1) * (nth + 1)];
        const double here = grid_[i * (nth + 1)];
        const double shift = kPi * std::round((below - here) / kPi);
        if (shift != 0.0)
            for (int j = 0; j <= nth; ++j) grid_[i * (nth + 1) + j] += shift;
        for (int j = 0; j <= nth; ++j) {
            const double d = grid_[(i + 1) * (nth + 1) + j] - grid_[i * (nth + 1) + j];
            if (std::abs(d) >= kPi / 2.0) return false;
        }
    }
    // Lift consistency: over theta in [0, 4pi] the variation is a multiple
    // of 2pi (twice the half-integer index times 2pi).
    for (int i = 0; i <= nr; ++i) {
        const double var = grid_[i * (nth + 1) + nth] - grid_[i * (nth + 1)];
        if (std::abs(var - kTwoPi * std::round(var / kTwoPi)) > 1e-6)
            return false;
    }
    return true;
}

double BlowupField::phi_lift(double r, double theta) const {
    r = std::abs(r);  // even extension
    if (r > delta_ * (1.0 + 1e-9))
        throw PreconditionError("phi_lift: r outside (-delta, delta)");
    const double dth = 2.0 * kTwoPi / nth_;
    const double fi = std::clamp(r / delta_ * nr_, 0.0, double(nr_));
    const double fj = std::clamp(theta / dth, 0.0, double(nth_));
    const int i0 = std::min(int(fi), nr_ - 1), j0 = std::min(int(fj), nth_ - 1);
    const double ti = fi - i0, tj = fj - j0;
    const auto at = [&](int i, int j) { return grid_[i * (nth_ + 1) + j]; };
    const double interp = (1 - ti) * ((1 - tj) * at(i0, j0) + tj * at(i0, j0 + 1)) +
                          ti * ((1 - tj) * at(i0 + 1, j0) + tj * at(i0 + 1, j0 + 1));
    const double raw = r == 0.0 ? phi_bar_raw(theta) : phi_raw(r, theta);
    return raw + kPi * std::round((interp - raw) / kPi);
}

BlowupField lift_phi(const ProtoLineField& L, Vec2 p, double delta, int n_r, int n_theta) {
    Linearization lin = linearize(L, p);

    // p must be the only singularity within the normalized disc of radius
    // delta: search both fields in a bounding box of the mapped disc.
    const double reach = delta * lin.S.frobenius();
    Domain box{p.x - reach, p.x + reach, p.y - reach, p.y + reach, false};
    const Mat2 Sinv = lin.S.inverse();
    for (const VectorField* V : {&L.X(), &L.Y()}) {
        for (const Zero& z : find_zeros(*V, box, 48).zeros) {
            const double rn = (Sinv * (z.p - p)).norm();
            if (rn <= delta && (z.p - p).norm() > 1e-7)
                throw PreconditionError(
                    "lift_phi: another singularity inside the blow-up disc");
        }
    }

    BlowupField B(L, lin, delta);
    if (!B.build(n_r, n_theta) && !B.build(2 * n_r, 2 * n_theta))
        throw NumericalFailure("lift_phi: unwrap failed after one refinement");
    return B;
}

std::vector<BlowupZero> blowup_zeros(const BlowupField& B, const Classification& cl) {
    if (cl.case_label == CaseLabel::Degenerate)
        throw PreconditionError("blowup_zeros: degenerate linear classification");
    const double h = 1e-5;
    std::vector<BlowupZero> out;
    for (const FixedPoint& fp : cl.points) {
        for (int rep = 0; rep < 2; ++rep) {
            const double th0 = wrap_two_pi(fp.theta) + rep * kTwoPi;
            BlowupZero z;
            z.theta0 = th0;
            z.stability = fp.stability;
            const Vec2 pr = (B.P(h, th0) - B.P(-h, th0)) / (2.0 * h);
            const Vec2 pt = (B.P(0.0, th0 + h) - B.P(0.0, th0 - h)) / (2.0 * h);
            z.DP = {pr.x, pt.x, pr.y, pt.y};

            const double cd = std::cos(B.phi_lift(0.0, th0) - th0);
            const Mat2 expected{cd, 0.0, 0.0, cd * (fp.slope - 1.0)};
            z.rel_error = (z.DP - expected).frobenius() / expected.frobenius();
            if (z.rel_error > 1e-3)
                throw NumericalFailure(
                    "blowup_zeros: DP disagrees with cos(phi - theta) diag(1, slope-1)");

            const double dn = z.DP.frobenius();
            const double det = z.DP.det();
            if (std::abs(det) < 1e-6 * dn * dn) {
                z.degenerate = true;
            } else {
                z.type = det < 0.0 ? ZeroType::Saddle : ZeroType::Node;
            }
            out.push_back(z);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const BlowupZero& a, const BlowupZero& b) { return a.theta0 < b.theta0; });
    return out;
}

JumpReport jump_check(const ProtoLineField& L, Vec2 p, Vec2 direction) {
    if (direction.norm2() == 0.0)
        throw PreconditionError("jump_check: zero direction");
    const Vec2 u = direction.unit();
    JumpReport rep;
    rep.singular = is_singular_point(L, p, 1e-9);

    const auto one_sided = [&](double sign) {
        // Log-spaced samples from 1e-2 down to 1e-6, aligned mod pi along the
        // way, then linear extrapolation to t = 0 from the two innermost
        // (the angle is C^1 in t on each side of the singularity).
        const int m = 9;
        double t1 = 0.0, t2 = 0.0, v1 = 0.0, v2 = 0.0;
        double prev = 0.0;
        for (int k = 0; k < m; ++k) {
            const double t = 1e-2 * std::pow(1e-4, double(k) / (m - 1));
            const Vec2 q = p + u * (sign * t);
            double v = wrap_pi(bisector(L, q).value - frame_angle(L.metric(), q, u));
            if (k > 0) v = prev + wrap_signed_half(v - prev);
            prev = v;
            t2 = t1; v2 = v1;
            t1 = t; v1 = v;
        }
        return v1 + (v1 - v2) * t1 / (t2 - t1);
    };

    rep.limit_plus = one_sided(+1.0);
    rep.limit_minus = one_sided(-1.0);
    rep.jump = wrap_signed_half(rep.limit_plus - rep.limit_minus);
    rep.holds = rep.singular &&
                std::abs(wrap_signed_half(rep.jump - kPi / 2.0)) < 1e-3;
    return rep;
}

}  // namespace linefield
