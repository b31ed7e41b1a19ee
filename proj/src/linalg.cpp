#include "affdim/linalg.hpp"

#include "affdim/error.hpp"

#include <algorithm>
#include <cfloat>
#include <limits>

namespace affdim {

Matrix2 Matrix2::checked(double a, double b, double c, double d) {
    Matrix2 m{a, b, c, d};
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    const double det = m.det();
    if (!std::isfinite(det) || scale == 0.0 || std::abs(det) <= 64.0 * DBL_EPSILON * scale * scale) {
        throw SingularMatrix("matrix is singular at double precision");
    }
    return m;
}

Matrix2 Matrix2::rotation(double angle) {
    const double cs = std::cos(angle);
    const double sn = std::sin(angle);
    return {cs, -sn, sn, cs};
}

Matrix2 Matrix2::inverse() const {
    const double dt = det();
    if (dt == 0.0 || !std::isfinite(dt)) {
        throw SingularMatrix("cannot invert a singular matrix");
    }
    return {d / dt, -b / dt, -c / dt, a / dt};
}

SingularValues singular_values(const Matrix2& m) {
    // α1 = (|q| + |r|)/2 with q, r the conformal and anticonformal parts.
    const double q = std::hypot(m.a + m.d, m.c - m.b);
    const double r = std::hypot(m.a - m.d, m.c + m.b);
    const double major = 0.5 * (q + r);
    const double adet = std::abs(m.det());
    if (!(major > 0.0)) {
        throw SingularMatrix("singular values of a zero matrix");
    }
    // Long dominated products may lose det to cancellation; callers that
    // need α2 of such products track log|det| themselves.
    return {major, adet / major};
}

double log_svf(SingularValues sv, double s) {
    const double l1 = std::log(sv.major);
    const double l2 = std::log(sv.minor);
    if (s <= 1.0) {
        return s * l1;
    }
    if (s <= 2.0) {
        return l1 + (s - 1.0) * l2;
    }
    return 0.5 * s * (l1 + l2);
}

double svf(SingularValues sv, double s) {
    if (s == 0.0) {
        return 1.0;
    }
    if (s <= 1.0) {
        return std::pow(sv.major, s);
    }
    if (s <= 2.0) {
        return sv.major * std::pow(sv.minor, s - 1.0);
    }
    return std::pow(sv.major * sv.minor, 0.5 * s);
}

double svf(const Matrix2& m, double s) { return svf(singular_values(m), s); }

Vec2 top_singular_direction(const Matrix2& m) {
    // Eigenvector of AᵀA for its largest eigenvalue.
    const Matrix2 g = m.transpose() * m;
    const double p = g.a;
    const double q = g.b;
    const double r = g.d;
    const double lambda = 0.5 * (p + r) + std::hypot(0.5 * (p - r), q);
    Vec2 v = std::abs(p - lambda) + std::abs(q) > std::abs(r - lambda) + std::abs(q)
                 ? Vec2{-q, p - lambda}
                 : Vec2{r - lambda, -q};
    const double n = v.norm();
    if (n == 0.0) {
        return {1.0, 0.0};
    }
    return v * (1.0 / n);
}

} // namespace affdim
