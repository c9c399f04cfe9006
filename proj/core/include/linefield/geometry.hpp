#pragma once

#include <cmath>
#include <numbers>

namespace linefield {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    Vec2 unit() const {
        const double n = norm();
        return {x / n, y / n};
    }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

struct Mat2 {
    // Row-major: [[a11, a12], [a21, a22]].
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 rotation(double t) {
        const double c = std::cos(t), s = std::sin(t);
        return {c, -s, s, c};
    }
    static Mat2 diag(double a, double b) { return {a, 0.0, 0.0, b}; }

    Vec2 operator*(Vec2 v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
    double frobenius() const {
        return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
    }
    Mat2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }
};

// Canonical representative in [0, 2pi).
inline double wrap_two_pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

// Canonical representative in [0, pi). Line angles live here.
inline double wrap_pi(double a) {
    double r = std::fmod(a, kPi);
    if (r < 0.0) r += kPi;
    if (r >= kPi) r = 0.0;
    return r;
}

// Representative in (-pi, pi]. The natural reduction for angle increments.
inline double wrap_signed(double a) {
    double r = std::remainder(a, kTwoPi);
    if (r <= -kPi) r = kPi;
    return r;
}

// Representative in (-pi/2, pi/2]. Increment reduction for line angles.
inline double wrap_signed_half(double a) {
    double r = std::remainder(a, kPi);
    if (r <= -kPi / 2.0) r = kPi / 2.0;
    return r;
}

// Distance between two line angles, mod pi (in [0, pi/2]).
inline double line_angle_dist(double a, double b) {
    return std::abs(wrap_signed_half(a - b));
}

// The angle of a vector, canonical in [0, 2pi).
struct VecAngle {
    double value = 0.0;  // in [0, 2pi)
    static VecAngle of(double raw) { return {wrap_two_pi(raw)}; }
    static VecAngle of(Vec2 v) { return of(std::atan2(v.y, v.x)); }
};

// The angle of a line (an unoriented direction), canonical in [0, pi).
struct LineAngle {
    double value = 0.0;  // in [0, pi)
    static LineAngle of(double raw) { return {wrap_pi(raw)}; }
    Vec2 direction() const { return {std::cos(value), std::sin(value)}; }
};

}  // namespace linefield
