#include "affdim/error.hpp"
#include "affdim/geometry.hpp"
#include "affdim/parallel.hpp"
#include "affdim/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace affdim {

std::vector<Vec2> local_sample(const Ifs& ifs, const AttractorExtent& ext, Vec2 center, double radius,
                               double resolution) {
    if (!(resolution > 0.0) || !(radius > 0.0)) {
        throw InvalidInput("local sample needs positive radius and resolution");
    }
    const Vec2 x0 = ext.seed();
    const double diam = ext.diam_hi();
    const std::size_t cap = word_cap();
    std::vector<Vec2> out;
    std::vector<std::pair<std::size_t, AffineMap>> stack;
    for (std::size_t i = ifs.size(); i-- > 0;) {
        stack.emplace_back(1, ifs[i]);
    }
    std::size_t visited = 0;
    while (!stack.empty()) {
        auto [len, map] = stack.back();
        stack.pop_back();
        if (++visited > cap) {
            throw BudgetExceeded(cap);
        }
        const Vec2 p = map(x0);
        const double err = singular_values(map.linear).major * diam;
        const double dist = distance(p, center);
        if (dist - err > radius) {
            continue;
        }
        if (err <= resolution) {
            if (dist <= radius) {
                out.push_back(p);
            }
            continue;
        }
        for (std::size_t i = ifs.size(); i-- > 0;) {
            stack.emplace_back(len + 1, map.compose(ifs[i]));
        }
    }
    return out;
}

TangentCloud weak_tangent(const Ifs& ifs, const AttractorExtent& ext, Vec2 x, double r, double resolution) {
    if (!(r > 0.0)) {
        throw InvalidInput("tangent scale must be positive");
    }
    TangentCloud t;
    t.base = x;
    t.r = r;
    t.resolution = resolution;
    for (const auto& p : local_sample(ifs, ext, x, r, resolution * r)) {
        t.points.push_back(magnify(p, x, r));
    }
    return t;
}

TangentScan tangent_dimension_scan(const Ifs& ifs, const AttractorExtent& ext, int n_tangents,
                                   std::span<const double> scales, std::uint64_t seed, const GibbsWeights* weights,
                                   double resolution) {
    if (n_tangents < 1 || scales.empty()) {
        throw InvalidInput("tangent scan needs at least one tangent and one scale");
    }
    std::vector<double> cumulative;
    if (weights != nullptr) {
        double acc = 0.0;
        for (double w : weights->weights) {
            acc += w;
            cumulative.push_back(acc);
        }
    }
    const double finest = *std::min_element(scales.begin(), scales.end()) * resolution * 1e-3;
    TangentScan scan;
    std::vector<double> dims(static_cast<std::size_t>(n_tangents), -1.0);
    parallel::for_each_index(dims.size(), [&](std::size_t t) {
        parallel::CounterRng rng(seed, t);
        AffineMap map = AffineMap::identity();
        while (singular_values(map.linear).major * ext.diam_hi() > finest) {
            if (!cumulative.empty()) {
                const Word w = word_from_index(rng.pick(cumulative), ifs.size(), static_cast<std::size_t>(weights->depth));
                map = map.compose(compose_word(ifs, w));
            } else {
                map = map.compose(ifs[rng.below(ifs.size())]);
            }
        }
        const Vec2 x = map(ext.seed());
        const double r = scales[rng.below(scales.size())];
        const auto tan = weak_tangent(ifs, ext, x, r, resolution);
        const bool interior = std::any_of(tan.points.begin(), tan.points.end(),
                                          [](Vec2 p) { return p.norm() < 1.0; });
        if (!interior || tan.points.size() < 2) {
            return;
        }
        try {
            const auto cloud = PointCloud::from_points(tan.points, resolution);
            dims[t] = box_dim(cloud, 2.0 * resolution, 0.5).dimension;
        } catch (const DegenerateRange&) {
        }
    });
    for (double d : dims) {
        if (d < 0.0) {
            ++scan.discarded;
        } else {
            scan.dims.push_back(d);
        }
    }
    if (!scan.dims.empty()) {
        scan.max_dim = *std::max_element(scan.dims.begin(), scan.dims.end());
        scan.min_dim = *std::min_element(scan.dims.begin(), scan.dims.end());
    }
    return scan;
}

} // namespace affdim
