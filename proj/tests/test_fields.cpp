#include <doctest.h>

#include <cmath>
#include <random>

#include "linefield/errors.hpp"
#include "linefield/fields.hpp"

using namespace linefield;

namespace {

ProtoLineField canonical(const char* x1, const char* x2, const char* y1, const char* y2,
                         Domain dom = {-2, 2, -2, 2, false}) {
    return ProtoLineField(VectorField(Expr::parse(x1), Expr::parse(x2)),
                          VectorField(Expr::parse(y1), Expr::parse(y2)),
                          Metric::euclidean(), dom);
}

ProtoLineField lemon_trio() { return canonical("x + y", "y - x", "1", "1"); }
ProtoLineField star_trio() { return canonical("x", "-y", "1", "0"); }

Metric g_lambda(double lambda) {
    return Metric(Expr::num(1), Expr::num(0), Expr::num(lambda * lambda));
}

}  // namespace

TEST_CASE("orthonormal frame: Euclidean, g_lambda, constant conformal") {
    const Frame fe = orthonormal_frame(Metric::euclidean(), {0.3, -0.7});
    CHECK(fe.e1.x == 1.0);
    CHECK(fe.e1.y == 0.0);
    CHECK(fe.e2.x == 0.0);
    CHECK(fe.e2.y == 1.0);

    const Frame f3 = orthonormal_frame(g_lambda(3), {1.0, 1.0});
    CHECK(f3.e1.x == doctest::Approx(1.0));
    CHECK(f3.e2.y == doctest::Approx(1.0 / 3.0));
    CHECK(f3.e2.x == doctest::Approx(0.0));

    const Metric g2(Expr::num(2), Expr::num(0), Expr::num(2));
    const Frame f2 = orthonormal_frame(g2, {0, 0});
    CHECK(f2.e1.x == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(f2.e2.y == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("frame is g-orthonormal and positively oriented for random SPD metrics") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> c(0.2, 2.0), off(-0.5, 0.5);
    for (int k = 0; k < 25; ++k) {
        const double a = c(rng), d = c(rng);
        const double b = off(rng) * std::sqrt(a * d);
        const Metric g(Expr::num(a), Expr::num(b), Expr::num(d));
        const Vec2 p{0, 0};
        const Frame f = orthonormal_frame(g, p);
        const Mat2 G = g(p);
        CHECK(f.e1.dot(G * f.e1) == doctest::Approx(1.0));
        CHECK(f.e2.dot(G * f.e2) == doctest::Approx(1.0));
        CHECK(f.e1.dot(G * f.e2) == doctest::Approx(0.0));
        CHECK(f.e1.cross(f.e2) > 0.0);
    }
}

TEST_CASE("metric SPD violations are errors") {
    const Metric bad(Expr::parse("x"), Expr::num(0), Expr::num(1));
    CHECK_THROWS_AS(bad({-1.0, 0.0}), MetricError);
    CHECK_NOTHROW(bad({1.0, 0.0}));
}

TEST_CASE("angle_between examples") {
    CHECK(angle_between(Metric::euclidean(), {0, 0}, {1, 0}, {0, 1}).value ==
          doctest::Approx(kPi / 2));
    // g_lambda with lambda = 3: tan(phi) = 3 tan(theta) at theta = pi/4
    const double th = kPi / 4;
    const double got =
        angle_between(g_lambda(3), {0, 0}, {1, 0}, {std::cos(th), std::sin(th)}).value;
    CHECK(got == doctest::Approx(std::atan(3.0)).epsilon(1e-12));
    CHECK(angle_between(g_lambda(2), {1, 1}, {2, 1}, {2, 1}).value == doctest::Approx(0.0));
    CHECK_THROWS_AS(angle_between(Metric::euclidean(), {0, 0}, {0, 0}, {1, 0}),
                    PreconditionError);
}

TEST_CASE("property: angle additivity mod 2pi at random triples") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> c(-1.0, 1.0), m(0.3, 2.0);
    for (int k = 0; k < 50; ++k) {
        const Metric g(Expr::num(m(rng)), Expr::num(0.3 * c(rng)), Expr::num(m(rng)));
        const Vec2 p{c(rng), c(rng)};
        const Vec2 u{c(rng) + 1.5, c(rng)}, v{c(rng), c(rng) + 1.5}, w{c(rng) - 1.5, c(rng)};
        const double uv = angle_between(g, p, u, v).value;
        const double vw = angle_between(g, p, v, w).value;
        const double uw = angle_between(g, p, u, w).value;
        CHECK(std::abs(wrap_signed(uv + vw - uw)) < 1e-12);
    }
}

TEST_CASE("bisector: canonical examples") {
    // Lemon at (1,0): X=(1,-1), Y=(1,1) -> horizontal line
    CHECK(bisector(lemon_trio(), {1, 0}).value == doctest::Approx(0.0).epsilon(1e-12));
    // Star at (0,1): X=(0,-1), Y=(1,0) -> line angle 3pi/4
    CHECK(bisector(star_trio(), {0, 1}).value == doctest::Approx(3 * kPi / 4));
    // X = Y -> the line of X
    const ProtoLineField same = canonical("1", "2", "1", "2");
    CHECK(bisector(same, {0.5, 0.5}).value == doctest::Approx(std::atan2(2, 1)));
    // vanishing field is an error
    CHECK_THROWS_AS(bisector(star_trio(), {0, 0}), PreconditionError);
}

TEST_CASE("property: bisector invariant under swapping X and Y") {
    // Swapping the pair changes the measured rotation to its complement;
    // the returned line is the same mod pi.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    const ProtoLineField L = lemon_trio();
    const ProtoLineField Lswap = canonical("1", "1", "x + y", "y - x");
    for (int k = 0; k < 40; ++k) {
        Vec2 p{c(rng) + 1.2, c(rng) + 1.2};
        CHECK(line_angle_dist(bisector(L, p).value, bisector(Lswap, p).value) < 1e-12);
    }
}

TEST_CASE("property: bisector invariant under positive scaling of either field") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    const ProtoLineField L = star_trio();
    // scale X by 2 + x^2 (positive), Y by 3
    const ProtoLineField Ls = canonical("(2 + x^2)*x", "(2 + x^2)*(-y)", "3", "0");
    for (int k = 0; k < 40; ++k) {
        Vec2 p{c(rng) + 1.1, c(rng) + 1.1};
        CHECK(line_angle_dist(bisector(L, p).value, bisector(Ls, p).value) < 1e-12);
    }
}

TEST_CASE("realize_line_field: horizontal and 45-degree sections") {
    const VectorField X(Expr::num(1), Expr::num(0));
    const VectorField Yh = realize_line_field(
        [](Vec2) { return LineAngle::of(0.0); }, X, Expr::num(1));
    CHECK(Yh({0.3, 0.4}).x == doctest::Approx(1.0));
    CHECK(Yh({0.3, 0.4}).y == doctest::Approx(0.0));

    const VectorField Y45 = realize_line_field(
        [](Vec2) { return LineAngle::of(kPi / 4); }, X, Expr::num(1));
    CHECK(Y45({0, 0}).x == doctest::Approx(0.0));
    CHECK(Y45({0, 0}).y == doctest::Approx(1.0));
}

TEST_CASE("realize_line_field reproduces the Lemon bisector on an annulus") {
    const ProtoLineField lemon = lemon_trio();
    const SectionFn section = [&lemon](Vec2 p) { return bisector(lemon, p); };
    const VectorField X(Expr::num(1), Expr::num(0));
    const VectorField Y = realize_line_field(section, X, Expr::num(1));
    const ProtoLineField L(X, Y, Metric::euclidean(), {-2, 2, -2, 2, false});
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi), rad(0.5, 1.5);
    for (int k = 0; k < 100; ++k) {
        const double t = ang(rng), r = rad(rng);
        const Vec2 p{r * std::cos(t), r * std::sin(t)};
        CHECK(line_angle_dist(bisector(L, p).value, section(p).value) < 1e-9);
    }
}

TEST_CASE("find_zeros: linear, sine and factorized examples") {
    const VectorField XL(Expr::parse("x + y"), Expr::parse("y - x"));
    const auto zl = find_zeros(XL, {-2, 2, -2, 2, false});
    REQUIRE(zl.zeros.size() == 1);
    CHECK(zl.zeros[0].p.norm() < 1e-9);
    CHECK(zl.zeros[0].det_jacobian == doctest::Approx(2.0));
    CHECK_FALSE(zl.zeros[0].degenerate);

    const VectorField XS(Expr::parse("sin(x)"), Expr::parse("sin(y)"));
    const auto zs = find_zeros(XS, {-0.5, kTwoPi - 0.5, -0.5, kTwoPi - 0.5, false});
    REQUIRE(zs.zeros.size() == 4);
    const Vec2 expected[4] = {{0, 0}, {0, kPi}, {kPi, 0}, {kPi, kPi}};
    for (const Vec2& e : expected) {
        bool found = false;
        for (const Zero& z : zs.zeros)
            if ((z.p - e).norm() < 1e-8) found = true;
        CHECK(found);
    }

    const VectorField XF(Expr::parse("x^2 - 1"), Expr::parse("y"));
    const auto zf = find_zeros(XF, {-2, 2, -2, 2, false});
    REQUIRE(zf.zeros.size() == 2);
    CHECK(zf.zeros[0].p.x == doctest::Approx(-1.0));
    CHECK(zf.zeros[1].p.x == doctest::Approx(1.0));
}

TEST_CASE("find_zeros flags degenerate roots") {
    const VectorField V(Expr::parse("x^2"), Expr::parse("y"));  // det J = 0 at root
    const auto z = find_zeros(V, {-1, 1, -1, 1, false});
    for (const Zero& zz : z.zeros)
        if (zz.p.norm() < 1e-3) CHECK(zz.degenerate);
}

TEST_CASE("torus periodicity is enforced at construction") {
    const Domain torus{0, kTwoPi, 0, kTwoPi, true};
    CHECK_NOTHROW(canonical("sin(x)", "sin(y)", "1", "0", torus));
    CHECK_THROWS_AS(canonical("x", "y", "1", "0", torus), PreconditionError);
}

TEST_CASE("vector field jacobian consistency is checked at construction") {
    // A well-formed field passes; the check exercises the symbolic partials.
    CHECK_NOTHROW(VectorField(Expr::parse("sin(x)*cos(y)"), Expr::parse("exp(x*y)")));
}
