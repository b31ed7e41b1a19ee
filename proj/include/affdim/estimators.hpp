#pragma once

#include "affdim/linalg.hpp"

#include <span>
#include <vector>

namespace affdim {

/// Finite sample of a planar set. Every point of the sampled set lies within
/// `resolution` of some sample. One-dimensional clouds keep y = 0.
struct PointCloud {
    std::vector<Vec2> points;
    double resolution = 0.0;
    Vec2 lo;
    Vec2 hi;

    static PointCloud from_points(std::vector<Vec2> points, double resolution);
    bool empty() const { return points.empty(); }
};

struct CoverReport {
    std::vector<double> scales;
    std::vector<std::size_t> counts;
    double dimension = 0.0;
    double residual = 0.0;
    double scale_lo = 0.0;
    double scale_hi = 0.0;
};

/// Number of occupied cells of side δ on the grid anchored at `corner`.
std::size_t grid_count(std::span<const Vec2> pts, Vec2 corner, double delta);

/// Least-squares box dimension over dyadic scales δ = scale_hi·2^{-k} ≥ scale_lo.
/// Needs at least five scales and scale_lo ≥ 2·resolution.
CoverReport box_dim(const PointCloud& cloud, double scale_lo, double scale_hi);

struct ScalePair {
    double big;   // R
    double small; // r
};

struct TwoScaleReport {
    double estimate = 0.0;
    Vec2 center;
    ScalePair pair{0.0, 0.0};
    /// Exponent for every (center, pair), centers outer.
    std::vector<double> exponents;
};

/// Least-squares slope of log N_δ(W) over δ = R, R/2, …, ≥ r for the window
/// W = [x - R, x + R)², grids anchored at the window corner.
double local_exponent(std::span<const Vec2> sorted_by_x, Vec2 x, ScalePair pair);

/// Maximum local exponent: a localized lower estimate of the Assouad dimension.
TwoScaleReport assouad_two_scale(const PointCloud& cloud, std::span<const ScalePair> pairs,
                                 std::span<const Vec2> centers);
/// Minimum local exponent: an upper estimate of the lower dimension.
TwoScaleReport lower_two_scale(const PointCloud& cloud, std::span<const ScalePair> pairs,
                               std::span<const Vec2> centers);

/// Dyadic (R, r) pairs with R/r = 2^gap, r ≥ 2·resolution, R ≤ r_max.
std::vector<ScalePair> dyadic_pairs(double r_max, double resolution, int gap, int count);
/// `count` dyadic pairs with the largest ratio R/r the range allows (≥ 8).
std::vector<ScalePair> widest_pairs(double r_max, double resolution, int count = 3);

struct RegularityReport {
    double max_ratio = 0.0;
    double min_ratio = 0.0;
    double spread = 0.0;
    bool regular = false;
};

/// Envelope of μ(B(x, r))/r^s where μ puts `weights[k]` at `points[k]`.
RegularityReport regularity_diagnostic(std::span<const Vec2> points, std::span<const double> weights, double s,
                                       std::span<const Vec2> centers, std::span<const double> radii,
                                       double threshold = 20.0);

} // namespace affdim
