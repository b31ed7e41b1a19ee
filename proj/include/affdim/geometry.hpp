#pragma once

#include "affdim/estimators.hpp"
#include "affdim/extent.hpp"
#include "affdim/ifs.hpp"
#include "affdim/projective.hpp"
#include "affdim/thermo.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace affdim {

// ---- separation -------------------------------------------------------

enum class Separation { Certified, Overlap, Unknown };
const char* to_string(Separation s);

struct SscReport {
    double delta_lower = 0.0;
    double delta_upper = 0.0;
    Separation separated = Separation::Unknown;
    int depth = 0;
};

/// Best-first search over cylinder pairs with different first letters. The
/// first pair of full depth popped gives the certified lower bound. Runs at
/// depth, depth+1 and depth+2; Overlap needs intersecting balls at all three.
SscReport ssc_check(const Ifs& ifs, const AttractorExtent& ext, int depth);
SscReport ssc_check(const Ifs& ifs, int depth = 6);

/// Root in [0, 1] of M^{1-s} (1 - (M-1)c)^s = 1.
double slice_bound_root(int M, double c);

/// max over M = 2..N of the roots above with c = δ/(3 diam X + 2δ), using the
/// certified δ lower bound and diam upper bound. Throws NotSeparated.
double slice_upper_bound(const Ifs& ifs, const AttractorExtent& ext, const SscReport& ssc);
double slice_upper_bound(const Ifs& ifs);

// ---- projections ------------------------------------------------------

struct PoscReport {
    double eta_hat = 0.0;
    /// eta_hat restricted to each dyadic scale 2^{-k}, k = 1..depth.
    std::vector<double> per_depth;
    double slope = 0.0; // least-squares slope of log per_depth vs k
    bool appears_to_hold = false;
    double witness_theta = 0.0;
    Word witness_i;
    Word witness_j;
};

struct PoscOptions {
    int depth = 8;
    int v_grid = 8;
    int x_samples = 64;
    int directions_depth = 10;
    double slope_threshold = -0.05;
    double floor = 1e-6;
};

/// Needs a certified multicone and X_F not a singleton.
PoscReport posc_check(const Ifs& ifs, const PoscOptions& opt = {});

/// Normalized separation max_x |u·(φ_i(x) - φ_j(x))| / max(diam proj φ_i X, diam proj φ_j X)
/// over the sample points, u the unit normal of the line θ.
double posc_separation(const AttractorExtent& ext, const AffineMap& fi, const AffineMap& fj, double theta,
                       std::span<const Vec2> xs);

struct SigmaCount {
    std::size_t count = 0;
    std::vector<Word> words;
};

/// Words stopped by projected diameter (direction θ) at scale r whose
/// projected interval meets [u·x - r, u·x + r]. Projected intervals are
/// intersected with the parent's, so ambiguous words are included.
SigmaCount sigma_count(const Ifs& ifs, const AttractorExtent& ext, double theta, Vec2 x, double r);

/// Sample of X inside the tube |u·(y - x)| ≤ tube_width, as along-line
/// coordinates v·(y - x) (stored in x, with y = 0).
PointCloud slice_points(const Ifs& ifs, const AttractorExtent& ext, double theta, Vec2 x, double tube_width,
                        double resolution);
PointCloud slice_points(const PointCloud& cloud, double theta, Vec2 x, double tube_width);

struct BochiMorrisReport {
    double d = 1.0;
    std::vector<double> per_depth; // running maximum up to each depth
    std::size_t left_violations = 0;
    std::size_t samples = 0;
};

/// max α1(A_w)/‖A_wᵀ|V^⊥‖ over |w| ≤ depth and V on a grid of X_F.
BochiMorrisReport bochi_morris_scan(std::span<const Matrix2> mats, int depth, int v_grid = 16,
                                    int directions_depth = 10);

/// Evenly spaced angles on a union of arcs (arc endpoints excluded).
std::vector<double> grid_on_arcs(std::span<const ProjInterval> arcs, int count);

// ---- tangents ---------------------------------------------------------

struct TangentCloud {
    Vec2 base;
    double r = 0.0;
    double resolution = 0.0; // in magnified units
    std::vector<Vec2> points;
};

/// On-set points of X ∩ B(center, radius) at the given resolution.
std::vector<Vec2> local_sample(const Ifs& ifs, const AttractorExtent& ext, Vec2 center, double radius,
                               double resolution);

/// M_{x,r}(X) ∩ B(0, 1) sampled at `resolution` (magnified units).
TangentCloud weak_tangent(const Ifs& ifs, const AttractorExtent& ext, Vec2 x, double r, double resolution);

struct TangentScan {
    double max_dim = 0.0;
    double min_dim = 0.0;
    std::vector<double> dims;
    std::size_t discarded = 0;
};

/// Box dimensions of weak tangents at random (x, r); x drawn from cylinder
/// weights (uniform when none are given).
TangentScan tangent_dimension_scan(const Ifs& ifs, const AttractorExtent& ext, int n_tangents,
                                   std::span<const double> scales, std::uint64_t seed,
                                   const GibbsWeights* weights = nullptr, double resolution = 1.0 / 128);

// ---- content ----------------------------------------------------------

/// 𝓗^s_∞ of a finite union of closed intervals, s ∈ (0, 1].
double interval_union_content(std::vector<Interval1> intervals, double s);

struct ContentEstimate {
    double s = 0.0;
    double theta = 0.0; // V
    double value = 0.0;
    int depth = 0;
    const char* method = "interval-dp";
};

/// Content of the projection of X to V^⊥ from depth-n cylinder intervals.
ContentEstimate hausdorff_content_projection(const Ifs& ifs, const AttractorExtent& ext, double theta, double s,
                                             int depth);
/// Contents for several depths, reusing one tree walk.
std::vector<double> content_by_depth(const Ifs& ifs, const AttractorExtent& ext, double theta, double s,
                                     std::span<const int> depths);

struct ContentConsistency {
    double cv = 0.0;
    double s = 0.0;
    std::vector<Word> cylinders;
    std::vector<double> contents;
    std::vector<double> h;
    std::vector<double> ratios;
};

ContentConsistency content_consistency(const Ifs& ifs, int n_cylinders, int depth, std::uint64_t seed, int m = 6);

// ---- transversality ---------------------------------------------------

struct TransversalityValue {
    double derivative = 0.0; // d/dθ |u·(π(i) - π(j))|
    double magnitude = 0.0;  // |d/dθ u·(π(i) - π(j))|
    double difference = 0.0; // u·(π(i) - π(j))
    double tail = 0.0;
};

/// Translation v_{i1} is moved along the unit normal u of W = span(w) and the
/// projection is u·x. Words are repeated periodically up to `depth` letters.
TransversalityValue transversality_derivative(std::span<const Matrix2> mats, std::span<const Vec2> translations,
                                              Vec2 w, const Word& i, const Word& j, int depth);

/// u·π_depth(i) with the given translations.
double projected_coding(std::span<const Matrix2> mats, std::span<const Vec2> translations, Vec2 u, const Word& i,
                        int depth);

} // namespace affdim
