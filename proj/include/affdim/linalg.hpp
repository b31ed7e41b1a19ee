#pragma once

#include <cmath>
#include <utility>

namespace affdim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr bool operator==(const Vec2&) const = default;

    double norm() const { return std::hypot(x, y); }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

struct SingularValues {
    double major; // α1, the operator norm
    double minor; // α2
};

/// Real 2x2 matrix [[a, b], [c, d]] acting on column vectors.
///
/// Construction through `Matrix2::checked` rejects matrices whose determinant
/// vanishes at double precision; products of invertible matrices stay
/// invertible so arithmetic results are not re-checked.
struct Matrix2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static Matrix2 checked(double a, double b, double c, double d);
    static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Matrix2 diagonal(double p, double q) { return {p, 0.0, 0.0, q}; }
    static Matrix2 rotation(double angle);

    constexpr double det() const { return a * d - b * c; }
    constexpr double trace() const { return a + d; }
    constexpr Matrix2 transpose() const { return {a, c, b, d}; }
    Matrix2 inverse() const;

    constexpr Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    constexpr Matrix2 operator*(const Matrix2& m) const {
        return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
    }
    constexpr Matrix2 operator*(double k) const { return {a * k, b * k, c * k, d * k}; }
    constexpr bool operator==(const Matrix2&) const = default;

    double frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }
};

/// Singular values α1 ≥ α2 > 0, computed so that α1·α2 = |det| to rounding.
SingularValues singular_values(const Matrix2& m);

inline double operator_norm(const Matrix2& m) { return singular_values(m).major; }

/// Singular value function φ^s evaluated from precomputed singular values.
double svf(SingularValues sv, double s);
double svf(const Matrix2& m, double s);

/// log φ^s, finite even when φ^s underflows.
double log_svf(SingularValues sv, double s);

/// Right singular vector belonging to α1 (the most expanded input direction).
Vec2 top_singular_direction(const Matrix2& m);

} // namespace affdim
