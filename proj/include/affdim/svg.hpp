#pragma once

#include "affdim/estimators.hpp"
#include "affdim/projective.hpp"

#include <optional>
#include <string>
#include <vector>

namespace affdim {

struct DirectionOverlay {
    std::vector<ProjInterval> directions; // drawn as wedges, class "xf"
    std::vector<ProjInterval> cone;       // drawn as arcs, class "cone"
};

/// Points as unit squares on a 512×512 canvas, sorted, three decimals. The
/// overlay adds a direction fan to the right of the attractor.
std::string render_svg(const PointCloud& cloud, const std::optional<DirectionOverlay>& overlay = std::nullopt);

} // namespace affdim
