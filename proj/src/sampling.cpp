#include "affdim/sampling.hpp"

#include "affdim/error.hpp"
#include "affdim/parallel.hpp"
#include "affdim/stopping.hpp"

#include <cmath>

namespace affdim {

PointCloud attractor_sample(const Ifs& ifs, const AttractorExtent& ext, double resolution) {
    if (!(resolution > 0.0)) {
        throw InvalidInput("resolution must be positive");
    }
    const StoppingSet stop = stopping_set(ifs, ext, resolution);
    std::vector<Vec2> pts(stop.size());
    const Vec2 x0 = ext.seed();
    for (std::size_t k = 0; k < stop.size(); ++k) {
        pts[k] = stop.maps[k](x0);
    }
    return PointCloud::from_points(std::move(pts), resolution);
}

PointCloud attractor_sample(const Ifs& ifs, double resolution) {
    const AttractorExtent ext(ifs);
    return attractor_sample(ifs, ext, resolution);
}

PointCloud chaos_game(const Ifs& ifs, const AttractorExtent& ext, double resolution, std::uint64_t seed,
                      std::size_t count) {
    if (!(resolution > 0.0)) {
        throw InvalidInput("resolution must be positive");
    }
    check_budget(static_cast<double>(count));
    const double a = ifs.max_norm();
    const double diam = std::max(ext.diam_hi(), resolution);
    const auto length = static_cast<std::size_t>(std::max(1.0, std::ceil(std::log(resolution / diam) / std::log(a))));
    std::vector<Vec2> pts(count);
    const Vec2 x0 = ext.seed();
    parallel::for_each_index(count, [&](std::size_t k) {
        parallel::CounterRng rng(seed, k);
        // Apply maps innermost first: φ_{w1}∘…∘φ_{wL}(x0).
        Vec2 p = x0;
        for (std::size_t step = 0; step < length; ++step) {
            p = ifs[rng.below(ifs.size())](p);
        }
        pts[k] = p;
    });
    return PointCloud::from_points(std::move(pts), resolution);
}

} // namespace affdim
