#include "affdim/extent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace affdim {

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 p, Vec2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) {
        return pts;
    }
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) {
            --k;
        }
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) {
            --k;
        }
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

Vec2 on_set_point(const Ifs& ifs, const AffineMap& phi_w) { return phi_w(ifs[0].fixed_point()); }

AttractorExtent::AttractorExtent(const Ifs& ifs, std::size_t max_points) {
    origin_ = ifs.ball().center;
    seed_ = ifs[0].fixed_point();
    const double n = static_cast<double>(ifs.size());
    const double limit = static_cast<double>(std::min(max_points, word_cap()));
    std::size_t depth = 1;
    while (depth < 8 && std::pow(n, static_cast<double>(depth + 1)) <= limit) {
        ++depth;
    }
    if (ifs.size() == 1) {
        depth = 8;
    }
    depth_ = depth;

    const CylinderTable table(ifs, depth);
    std::vector<Vec2> pts;
    pts.reserve(table.size());
    double a = 0.0;
    for (const auto& m : table.maps()) {
        pts.push_back(m(seed_));
        a = std::max(a, singular_values(m.linear).major);
    }
    const auto hull = convex_hull(pts);

    double dpts = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        for (std::size_t j = i + 1; j < hull.size(); ++j) {
            dpts = std::max(dpts, distance(hull[i], hull[j]));
        }
    }
    diam_lo_ = dpts;
    diam_hi_ = 2.0 * a < 1.0 ? dpts / (1.0 - 2.0 * a) : 2.0 * ifs.ball().radius;
    diam_hi_ = std::min(diam_hi_, 2.0 * ifs.ball().radius);
    const double slack = a * diam_hi_;

    double radius = 0.0;
    for (const auto& p : hull) {
        radius = std::max(radius, distance(p, origin_));
    }
    lipschitz_ = radius + slack;

    table_.resize(kDirections);
    for (int k = 0; k < kDirections; ++k) {
        const double th = 2.0 * std::numbers::pi * k / kDirections;
        const Vec2 u{std::cos(th), std::sin(th)};
        double best = -1e300;
        for (const auto& p : hull) {
            best = std::max(best, dot(u, p - origin_));
        }
        table_[static_cast<std::size_t>(k)] = best + slack;
    }
}

double AttractorExtent::support(Vec2 u) const {
    double th = std::atan2(u.y, u.x);
    if (th < 0.0) {
        th += 2.0 * std::numbers::pi;
    }
    const double step = 2.0 * std::numbers::pi / kDirections;
    const double pos = th / step;
    const auto k0 = static_cast<std::size_t>(std::floor(pos)) % kDirections;
    const auto k1 = (k0 + 1) % kDirections;
    const double f = pos - std::floor(pos);
    // h is Lipschitz in the angle with constant max|x - origin|.
    const double b0 = table_[k0] + lipschitz_ * f * step;
    const double b1 = table_[k1] + lipschitz_ * (1.0 - f) * step;
    return std::min(b0, b1);
}

double AttractorExtent::projected_width(const Matrix2& linear, Vec2 u) const {
    const Vec2 e = linear.transpose() * u;
    const double rho = e.norm();
    if (rho == 0.0) {
        return 0.0;
    }
    return rho * width(e * (1.0 / rho));
}

Interval1 AttractorExtent::projected(const AffineMap& phi, Vec2 u) const {
    const Vec2 e = phi.linear.transpose() * u;
    const double rho = e.norm();
    const double base = dot(u, phi.translation) + dot(e, origin_);
    if (rho == 0.0) {
        return {base, base};
    }
    const Vec2 eh = e * (1.0 / rho);
    return {base - rho * support(-eh), base + rho * support(eh)};
}

} // namespace affdim
