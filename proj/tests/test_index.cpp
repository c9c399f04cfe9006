#include <doctest.h>

#include <cmath>
#include <random>

#include "linefield/errors.hpp"
#include "linefield/index.hpp"

using namespace linefield;

namespace {

ProtoLineField plf(const char* x1, const char* x2, const char* y1, const char* y2,
                   Domain dom = {-2, 2, -2, 2, false}) {
    return ProtoLineField(VectorField(Expr::parse(x1), Expr::parse(x2)),
                          VectorField(Expr::parse(y1), Expr::parse(y2)),
                          Metric::euclidean(), dom);
}

// Independent index oracle: dense-sample unwrapping with 10^4 nodes, written
// without the production retry/rejection machinery.
int oracle_vf_index(const VectorField& V, Vec2 c, double r) {
    const int n = 10000;
    double total = 0.0, prev = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double t = kTwoPi * k / n;
        const Vec2 v = V({c.x + r * std::cos(t), c.y + r * std::sin(t)});
        const double a = std::atan2(v.y, v.x);
        if (k > 0) total += std::remainder(a - prev, kTwoPi);
        prev = a;
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace

TEST_CASE("vector-field winding: focus, saddle, constant") {
    const VectorField XL(Expr::parse("x + y"), Expr::parse("y - x"));
    const IndexResult rl = winding_index_vf(XL, {0, 0}, 1.0);
    CHECK(rl.twice_index == 2);  // focus has index +1
    CHECK(rl.twice_index / 2 == oracle_vf_index(XL, {0, 0}, 1.0));

    const VectorField XS(Expr::parse("x"), Expr::parse("-y"));
    CHECK(winding_index_vf(XS, {0, 0}, 1.0).twice_index == -2);

    const VectorField K(Expr::parse("1"), Expr::parse("1"));
    CHECK(winding_index_vf(K, {0, 0}, 1.0).twice_index == 0);

    CHECK(winding_index_vf(XS, {0, 0}, 1.0).max_step < kPi / 2);
    CHECK_THROWS_AS(winding_index_vf(XS, {0.5, 0}, 0.5), PreconditionError);
}

TEST_CASE("line-field winding: Lemon +1/2, Star -1/2, z^{5/2} gives +5/2") {
    const IndexResult lemon = winding_index_lf(plf("x + y", "y - x", "1", "1"), {0, 0}, 1.0);
    CHECK(lemon.twice_index == 1);

    const IndexResult star = winding_index_lf(plf("x", "-y", "1", "0"), {0, 0}, 1.0);
    CHECK(star.twice_index == -1);

    // Section arg(z^j) mod pi with j = 5/2 has index 5/2.
    const auto section = [](Vec2 p) {
        return LineAngle::of(2.5 * std::atan2(p.y, p.x));
    };
    CHECK(winding_index_lf(section, {0, 0}, 1.0).twice_index == 5);
    const auto section_neg = [](Vec2 p) {
        return LineAngle::of(-1.5 * std::atan2(p.y, p.x));
    };
    CHECK(winding_index_lf(section_neg, {0, 0}, 1.0).twice_index == -3);
}

TEST_CASE("index identity: Lemon and Star check out, shared zero is an error") {
    const IndexIdentity a = check_index_identity(plf("x + y", "y - x", "1", "1"), {0, 0}, 1.0);
    CHECK(a.x.twice_index == 2);
    CHECK(a.y.twice_index == 0);
    CHECK(a.line.twice_index == 1);
    CHECK(a.holds);

    const IndexIdentity b = check_index_identity(plf("x", "-y", "1", "0"), {0, 0}, 1.0);
    CHECK(b.x.twice_index == -2);
    CHECK(b.line.twice_index == -1);
    CHECK(b.holds);

    // Both fields vanish at the origin: precondition violation.
    CHECK_THROWS_AS(
        check_index_identity(plf("x + y", "y - x", "x", "-y"), {0, 0}, 1.0),
        PreconditionError);
}

TEST_CASE("hyperbolic zero types") {
    CHECK(hyperbolic_zero_type(VectorField(Expr::parse("x"), Expr::parse("3*y")), {0, 0}) ==
          ZeroType::Node);
    CHECK(hyperbolic_zero_type(VectorField(Expr::parse("x + y"), Expr::parse("y - x")),
                               {0, 0}) == ZeroType::Focus);
    CHECK(hyperbolic_zero_type(VectorField(Expr::parse("x"), Expr::parse("-y")), {0, 0}) ==
          ZeroType::Saddle);
    CHECK(hyperbolic_zero_type(VectorField(Expr::parse("x^2"), Expr::parse("y^2")),
                               {0, 0}) == ZeroType::Degenerate);
    CHECK_THROWS_AS(
        hyperbolic_zero_type(VectorField(Expr::parse("x + 1"), Expr::parse("y")), {0, 0}),
        PreconditionError);
}

TEST_CASE("Poincare-Hopf on the flat torus: sine field") {
    const Domain torus{0, kTwoPi, 0, kTwoPi, true};
    const PoincareHopfReport rep =
        poincare_hopf_torus(plf("sin(x)", "sin(y)", "1", "0", torus));
    REQUIRE(rep.singularities.size() == 4);
    int plus = 0, minus = 0;
    for (const TorusSingularity& s : rep.singularities) {
        if (s.twice_index == 1) ++plus;
        if (s.twice_index == -1) ++minus;
    }
    CHECK(plus == 2);
    CHECK(minus == 2);
    CHECK(rep.twice_sum == 0);
    CHECK(rep.holds);
}

TEST_CASE("Poincare-Hopf: empty singular set sums to zero") {
    const Domain torus{0, kTwoPi, 0, kTwoPi, true};
    const PoincareHopfReport rep = poincare_hopf_torus(plf("1", "0", "1", "0", torus));
    CHECK(rep.singularities.empty());
    CHECK(rep.twice_sum == 0);
    CHECK(rep.holds);
}

TEST_CASE("Poincare-Hopf: overlapping zeros of X and Y are a precondition failure") {
    const Domain torus{0, kTwoPi, 0, kTwoPi, true};
    CHECK_THROWS_AS(
        poincare_hopf_torus(plf("sin(x)", "sin(y)", "sin(x)", "sin(y)", torus)),
        PreconditionError);
}

TEST_CASE("property: index is stable under sample doubling and radius changes") {
    const VectorField XL(Expr::parse("x + y"), Expr::parse("y - x"));
    const VectorField XS(Expr::parse("x"), Expr::parse("-y"));
    for (const double r : {0.5, 1.0, 2.0}) {
        CHECK(winding_index_vf(XL, {0, 0}, r, 64).twice_index == 2);
        CHECK(winding_index_vf(XL, {0, 0}, r, 128).twice_index == 2);
        CHECK(winding_index_vf(XS, {0, 0}, r, 64).twice_index == -2);
        CHECK(winding_index_vf(XS, {0, 0}, r, 256).twice_index == -2);
    }
}

TEST_CASE("property: winding of the bisector agrees between frame and Euclidean angles") {
    // The index does not depend on the metric used to measure angles: unwrap
    // the same line field through g-frame angles and through the Euclidean
    // angle of its direction vectors.
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> c(-1.5, 1.5), m(0.4, 2.5), off(-0.4, 0.4);
    int done = 0;
    while (done < 20) {
        const Mat2 A{c(rng), c(rng), c(rng), c(rng)};
        if (std::abs(A.det()) < 0.1) continue;
        const Vec2 y0{c(rng), c(rng)};
        if (y0.norm() < 0.3) continue;
        const double g11 = m(rng), g22 = m(rng);
        const double g12 = off(rng) * std::sqrt(g11 * g22);
        const Metric g(Expr::num(g11), Expr::num(g12), Expr::num(g22));
        const ProtoLineField L(
            VectorField(Expr::num(A.a11) * Expr::var('x') + Expr::num(A.a12) * Expr::var('y'),
                        Expr::num(A.a21) * Expr::var('x') + Expr::num(A.a22) * Expr::var('y')),
            VectorField(Expr::num(y0.x), Expr::num(y0.y)), g, {-2, 2, -2, 2, false});

        const int via_frame = winding_index_lf(L, {0, 0}, 1.0).twice_index;
        const auto euclid_section = [&](Vec2 p) {
            const Frame f = orthonormal_frame(g, p);
            const double b = bisector(L, p).value;
            const Vec2 dir = f.e1 * std::cos(b) + f.e2 * std::sin(b);
            return LineAngle::of(std::atan2(dir.y, dir.x));
        };
        const int via_euclid = winding_index_lf(euclid_section, {0, 0}, 1.0).twice_index;
        CHECK(via_frame == via_euclid);
        ++done;
    }
}
