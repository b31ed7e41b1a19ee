#include "affdim/estimators.hpp"

#include "affdim/error.hpp"
#include "affdim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace affdim {
namespace {

std::uint64_t cell_key(std::int64_t ix, std::int64_t iy) {
    return (static_cast<std::uint64_t>(ix) << 32) ^ (static_cast<std::uint64_t>(iy) & 0xffffffffULL);
}

std::size_t count_keys(std::vector<std::uint64_t>& keys) {
    std::sort(keys.begin(), keys.end());
    return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

bool by_x(Vec2 p, Vec2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); }

struct LineFit {
    double slope = 0.0;
    double rms = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto m = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    LineFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    double rss = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double e = ys[k] - (my + fit.slope * (xs[k] - mx));
        rss += e * e;
    }
    fit.rms = std::sqrt(rss / m);
    return fit;
}

} // namespace

PointCloud PointCloud::from_points(std::vector<Vec2> points, double resolution) {
    if (!(resolution > 0.0)) {
        throw InvalidInput("cloud resolution must be positive");
    }
    PointCloud c;
    c.points = std::move(points);
    c.resolution = resolution;
    if (!c.points.empty()) {
        c.lo = c.hi = c.points.front();
        for (const auto& p : c.points) {
            c.lo = {std::min(c.lo.x, p.x), std::min(c.lo.y, p.y)};
            c.hi = {std::max(c.hi.x, p.x), std::max(c.hi.y, p.y)};
        }
    }
    return c;
}

std::size_t grid_count(std::span<const Vec2> pts, Vec2 corner, double delta) {
    std::vector<std::uint64_t> keys;
    keys.reserve(pts.size());
    for (const auto& p : pts) {
        keys.push_back(cell_key(static_cast<std::int64_t>(std::floor((p.x - corner.x) / delta)),
                                static_cast<std::int64_t>(std::floor((p.y - corner.y) / delta))));
    }
    return count_keys(keys);
}

CoverReport box_dim(const PointCloud& cloud, double scale_lo, double scale_hi) {
    if (cloud.empty()) {
        throw DegenerateRange("box counting on an empty cloud");
    }
    if (scale_lo < 2.0 * cloud.resolution * (1.0 - 1e-12)) {
        throw DegenerateRange("box counting below twice the cloud resolution");
    }
    CoverReport rep;
    rep.scale_hi = scale_hi;
    for (double d = scale_hi; d >= scale_lo * (1.0 - 1e-12); d *= 0.5) {
        rep.scales.push_back(d);
        rep.scale_lo = d;
    }
    if (rep.scales.size() < 5) {
        throw DegenerateRange("box counting needs at least five dyadic scales");
    }
    rep.counts.resize(rep.scales.size());
    parallel::for_each_index(rep.scales.size(), [&](std::size_t k) {
        rep.counts[k] = grid_count(cloud.points, cloud.lo, rep.scales[k]);
    });
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < rep.scales.size(); ++k) {
        xs.push_back(-std::log(rep.scales[k]));
        ys.push_back(std::log(static_cast<double>(rep.counts[k])));
    }
    const auto fit = least_squares(xs, ys);
    const double slope = fit.slope;
    rep.dimension = std::clamp(slope, 0.0, 2.0);
    rep.residual = fit.rms;
    return rep;
}

double local_exponent(std::span<const Vec2> sorted_by_x, Vec2 x, ScalePair pair) {
    const double R = pair.big;
    const Vec2 corner{x.x - R, x.y - R};
    const auto first = std::lower_bound(sorted_by_x.begin(), sorted_by_x.end(), Vec2{x.x - R, -1e300}, by_x);
    std::vector<Vec2> inside;
    for (auto it = first; it != sorted_by_x.end() && it->x < x.x + R; ++it) {
        if (it->y >= x.y - R && it->y < x.y + R) {
            inside.push_back(*it - corner);
        }
    }
    if (inside.size() < 2) {
        return 0.0;
    }
    // Slope of log N_δ against log(1/δ) for δ = R, R/2, …, r on grids
    // anchored at the window corner; multiplicative constants cancel.
    std::vector<double> xs;
    std::vector<double> ys;
    for (double delta = R; delta >= pair.small * (1.0 - 1e-12); delta *= 0.5) {
        const auto n = static_cast<std::int64_t>(std::llround(2.0 * R / delta));
        std::vector<std::uint64_t> keys;
        keys.reserve(inside.size());
        for (const auto& p : inside) {
            const auto ix = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(p.x / delta)), 0, n - 1);
            const auto iy = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(p.y / delta)), 0, n - 1);
            keys.push_back(cell_key(ix, iy));
        }
        xs.push_back(-std::log(delta));
        ys.push_back(std::log(static_cast<double>(count_keys(keys))));
    }
    return least_squares(xs, ys).slope;
}

namespace {

TwoScaleReport two_scale(const PointCloud& cloud, std::span<const ScalePair> pairs, std::span<const Vec2> centers,
                         bool take_max) {
    if (pairs.empty() || centers.empty()) {
        throw DegenerateRange("two-scale estimate needs scale pairs and centers");
    }
    for (const auto& p : pairs) {
        if (p.small < 2.0 * cloud.resolution * (1.0 - 1e-12) || p.big < 8.0 * p.small * (1.0 - 1e-12)) {
            throw DegenerateRange("scale pair violates r >= 2*resolution or R/r >= 8");
        }
    }
    std::vector<Vec2> sorted = cloud.points;
    std::sort(sorted.begin(), sorted.end(), by_x);
    TwoScaleReport rep;
    rep.exponents.resize(centers.size() * pairs.size());
    parallel::for_each_index(centers.size(), [&](std::size_t c) {
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            rep.exponents[c * pairs.size() + k] = local_exponent(sorted, centers[c], pairs[k]);
        }
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < rep.exponents.size(); ++i) {
        if (take_max ? rep.exponents[i] > rep.exponents[best] : rep.exponents[i] < rep.exponents[best]) {
            best = i;
        }
    }
    rep.estimate = rep.exponents[best];
    rep.center = centers[best / pairs.size()];
    rep.pair = pairs[best % pairs.size()];
    return rep;
}

} // namespace

TwoScaleReport assouad_two_scale(const PointCloud& cloud, std::span<const ScalePair> pairs,
                                 std::span<const Vec2> centers) {
    return two_scale(cloud, pairs, centers, true);
}

TwoScaleReport lower_two_scale(const PointCloud& cloud, std::span<const ScalePair> pairs,
                               std::span<const Vec2> centers) {
    return two_scale(cloud, pairs, centers, false);
}

std::vector<ScalePair> dyadic_pairs(double r_max, double resolution, int gap, int count) {
    std::vector<ScalePair> out;
    const double ratio = std::ldexp(1.0, gap);
    double R = r_max;
    for (int k = 0; k < count; ++k, R *= 0.5) {
        const double r = R / ratio;
        if (r < 2.0 * resolution) {
            break;
        }
        out.push_back({R, r});
    }
    return out;
}

std::vector<ScalePair> widest_pairs(double r_max, double resolution, int count) {
    const int top = static_cast<int>(std::floor(std::log2(r_max / (2.0 * resolution))));
    const int gap = top - (count - 1);
    if (gap < 3) {
        throw DegenerateRange("scale range too short for R/r >= 8");
    }
    return dyadic_pairs(r_max, resolution, gap, count);
}

RegularityReport regularity_diagnostic(std::span<const Vec2> points, std::span<const double> weights, double s,
                                       std::span<const Vec2> centers, std::span<const double> radii,
                                       double threshold) {
    if (points.size() != weights.size() || centers.empty() || radii.empty()) {
        throw InvalidInput("regularity diagnostic needs matching weights, centers and radii");
    }
    std::vector<double> ratios(centers.size() * radii.size());
    parallel::for_each_index(centers.size(), [&](std::size_t c) {
        for (std::size_t k = 0; k < radii.size(); ++k) {
            const double r2 = radii[k] * radii[k];
            std::vector<double> inside;
            for (std::size_t i = 0; i < points.size(); ++i) {
                const Vec2 d = points[i] - centers[c];
                if (dot(d, d) <= r2) {
                    inside.push_back(weights[i]);
                }
            }
            ratios[c * radii.size() + k] = parallel::pairwise_sum(inside) / std::pow(radii[k], s);
        }
    });
    RegularityReport rep;
    rep.max_ratio = *std::max_element(ratios.begin(), ratios.end());
    rep.min_ratio = *std::min_element(ratios.begin(), ratios.end());
    rep.spread = rep.min_ratio > 0.0 ? rep.max_ratio / rep.min_ratio : INFINITY;
    rep.regular = rep.spread <= threshold;
    return rep;
}

} // namespace affdim
