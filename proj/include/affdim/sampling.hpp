#pragma once

#include "affdim/estimators.hpp"
#include "affdim/extent.hpp"
#include "affdim/ifs.hpp"

#include <cstdint>

namespace affdim {

/// One on-set point φ_w(x0) per by-α1 stopping word at scale `resolution`;
/// the result is a resolution-net of X contained in X.
PointCloud attractor_sample(const Ifs& ifs, const AttractorExtent& ext, double resolution);
PointCloud attractor_sample(const Ifs& ifs, double resolution);

/// Chaos-game sample: point k applies a random word (stream k of the seed)
/// long enough that its distance to X is below `resolution`. The points are
/// random samples, not a net, but they are reproducible for a fixed seed.
PointCloud chaos_game(const Ifs& ifs, const AttractorExtent& ext, double resolution, std::uint64_t seed,
                      std::size_t count);

/// Magnification M_{x,r}(z) = (z - x)/r.
inline Vec2 magnify(Vec2 z, Vec2 x, double r) { return (z - x) * (1.0 / r); }

} // namespace affdim
