#pragma once

#include "affdim/ifs.hpp"

#include <vector>

namespace affdim {

struct Interval1 {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

/// Certified outer description of the attractor X.
///
/// Built from on-set points φ_w(x0) (x0 the fixed point of φ_1, so every
/// sample lies in X) at one depth. With a = max α1(A_w) over that depth,
/// diam X ≤ diam(points) + 2a·diam X, hence diam_hi = diam(points)/(1-2a).
class AttractorExtent {
public:
    static constexpr int kDirections = 720;

    explicit AttractorExtent(const Ifs& ifs, std::size_t max_points = 200'000);

    double diam_lo() const { return diam_lo_; }
    double diam_hi() const { return diam_hi_; }
    const Vec2& origin() const { return origin_; }
    const Vec2& seed() const { return seed_; }
    std::size_t depth() const { return depth_; }

    /// Upper bound for max_{x∈X} u·(x - origin), u a unit vector.
    double support(Vec2 u) const;
    /// Upper bound for the width of proj_u X = {u·x}.
    double width(Vec2 u) const { return support(u) + support(-u); }
    /// Interval containing {u·φ(x) : x ∈ X} for a composed map φ.
    Interval1 projected(const AffineMap& phi, Vec2 u) const;
    /// Upper bound for diam proj_u φ(X).
    double projected_width(const Matrix2& linear, Vec2 u) const;

private:
    Vec2 origin_;
    Vec2 seed_;
    std::size_t depth_ = 0;
    double diam_lo_ = 0.0;
    double diam_hi_ = 0.0;
    double lipschitz_ = 0.0;
    std::vector<double> table_;
};

/// Points of X: φ_w(x0) with x0 the fixed point of the first map.
Vec2 on_set_point(const Ifs& ifs, const AffineMap& phi_w);

/// Convex hull (counter-clockwise, no collinear points).
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

} // namespace affdim
