#include "affdim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>

namespace affdim {

namespace {

constexpr double kCanvas = 512.0;
constexpr double kMargin = 16.0;
constexpr double kFanRadius = 150.0;

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s = buf;
    return s == "-0.000" ? "0.000" : s;
}

// Both halves of the double cone {±(cos t, sin t) : t in arc}.
std::string wedge(Vec2 c, const ProjInterval& arc) {
    std::string d;
    for (double flip : {0.0, std::numbers::pi}) {
        const double a0 = arc.start + flip;
        const double a1 = arc.start + arc.width + flip;
        // SVG y grows downwards.
        d += "M" + fixed(c.x) + " " + fixed(c.y) + "L" + fixed(c.x + kFanRadius * std::cos(a0)) + " " +
             fixed(c.y - kFanRadius * std::sin(a0)) + "A" + fixed(kFanRadius) + " " + fixed(kFanRadius) + " 0 0 0 " +
             fixed(c.x + kFanRadius * std::cos(a1)) + " " + fixed(c.y - kFanRadius * std::sin(a1)) + "Z";
    }
    return d;
}

std::string arc_path(Vec2 c, double radius, const ProjInterval& arc) {
    std::string d;
    for (double flip : {0.0, std::numbers::pi}) {
        const double a0 = arc.start + flip;
        const double a1 = arc.start + arc.width + flip;
        d += "M" + fixed(c.x + radius * std::cos(a0)) + " " + fixed(c.y - radius * std::sin(a0)) + "A" + fixed(radius) +
             " " + fixed(radius) + " 0 0 0 " + fixed(c.x + radius * std::cos(a1)) + " " +
             fixed(c.y - radius * std::sin(a1));
    }
    return d;
}

} // namespace

std::string render_svg(const PointCloud& cloud, const std::optional<DirectionOverlay>& overlay) {
    double x0 = std::numeric_limits<double>::infinity();
    double y0 = x0;
    double x1 = -x0;
    double y1 = -x0;
    for (const auto& p : cloud.points) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const double span = std::max({x1 - x0, y1 - y0, 1e-12});
    const double scale = (kCanvas - 2.0 * kMargin) / span;

    std::set<std::pair<std::string, std::string>> cells;
    for (const auto& p : cloud.points) {
        const double sx = kMargin + std::floor((p.x - x0) * scale);
        const double sy = kMargin + std::floor((y1 - p.y) * scale);
        cells.insert({fixed(sy), fixed(sx)});
    }

    const double width = overlay ? kCanvas + 2.0 * kFanRadius + 2.0 * kMargin : kCanvas;
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width) + "\" height=\"" + fixed(kCanvas) +
           "\" viewBox=\"0 0 " + fixed(width) + " " + fixed(kCanvas) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<g class=\"attractor\" fill=\"black\">\n";
    for (const auto& [y, x] : cells) {
        out += "<rect x=\"" + x + "\" y=\"" + y + "\" width=\"1\" height=\"1\"/>\n";
    }
    out += "</g>\n";
    if (overlay) {
        const Vec2 c{kCanvas + kFanRadius + kMargin, kCanvas / 2.0};
        out += "<g class=\"fan\">\n";
        out += "<circle cx=\"" + fixed(c.x) + "\" cy=\"" + fixed(c.y) + "\" r=\"" + fixed(kFanRadius) +
               "\" fill=\"none\" stroke=\"#bbbbbb\"/>\n";
        auto dirs = overlay->directions;
        auto cone = overlay->cone;
        auto by_start = [](const ProjInterval& a, const ProjInterval& b) { return a.start < b.start; };
        std::sort(dirs.begin(), dirs.end(), by_start);
        std::sort(cone.begin(), cone.end(), by_start);
        for (const auto& arc : cone) {
            out += "<path class=\"cone\" d=\"" + arc_path(c, kFanRadius + 8.0, arc) +
                   "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"3\"/>\n";
        }
        for (const auto& arc : dirs) {
            out += "<path class=\"xf\" d=\"" + wedge(c, arc) + "\" fill=\"#d62728\" stroke=\"#d62728\"/>\n";
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace affdim
