#pragma once

#include "affdim/ifs.hpp"
#include "affdim/linalg.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace affdim {

/// Reduces an angle to [0, π).
double reduce_angle(double theta);

/// The line span(cos θ, sin θ), θ ∈ [0, π).
struct ProjPoint {
    double theta = 0.0;

    static ProjPoint from_angle(double theta) { return {reduce_angle(theta)}; }
    static ProjPoint from_vector(Vec2 v);
    Vec2 unit() const;
    /// The orthogonal line V^⊥.
    ProjPoint perp() const;
};

/// d(V, W) = |sin ∠(V, W)|.
double proj_distance(ProjPoint v, ProjPoint w);

/// Closed arc [start, start + width] of ℝP¹, 0 ≤ width < π.
struct ProjInterval {
    double start = 0.0;
    double width = 0.0;

    double end() const { return start + width; }
    double mid() const { return reduce_angle(start + 0.5 * width); }
    bool contains(double theta, double tol = 0.0) const;
    /// Whether `inner` sits in this arc at least `margin` away from its ends.
    bool contains(const ProjInterval& inner, double margin = 0.0) const;
};

ProjPoint act(const Matrix2& m, ProjPoint v);
/// Image arc; it contains the image of the arc midpoint.
ProjInterval act(const Matrix2& m, const ProjInterval& arc);

/// |m u| for a unit vector u spanning v.
double norm_on_line(const Matrix2& m, ProjPoint v);

/// Union of arcs as disjoint sorted arcs; arcs closer than `tol` merge.
/// Returns nullopt when the union covers the whole projective line.
std::optional<std::vector<ProjInterval>> merge_arcs(std::vector<ProjInterval> arcs, double tol = 1e-9);

/// Smallest arc containing all arcs (complement of the widest gap).
ProjInterval hull_arc(std::span<const ProjInterval> arcs);

/// Proper closed subset given by pairwise disjoint arcs.
struct Multicone {
    std::vector<ProjInterval> intervals;

    bool contains(double theta, double tol = 0.0) const;
    /// Closure of the complement, as arcs.
    std::vector<ProjInterval> complement() const;
};

struct MulticoneSearch {
    int max_iters = 400;
    double margin = 1e-6;
};

/// Seeded cone iteration. Throws NotFound when no strongly invariant
/// multicone is certified.
Multicone find_invariant_multicone(std::span<const Matrix2> mats, const MulticoneSearch& opt = {});
std::optional<Multicone> try_invariant_multicone(std::span<const Matrix2> mats, const MulticoneSearch& opt = {});

/// Whether every A_i C lies inside C with the given angular margin.
bool strictly_invariant(std::span<const Matrix2> mats, const Multicone& cone, double margin);

struct DominationReport {
    bool certified = false;
    double fitted_tau = 1.0;
    double fitted_c = 1.0;
    int depth = 0;
    std::optional<Multicone> cone;
    /// max over |w| = n of α2/α1, n = 1..depth.
    std::vector<double> envelope;
};

/// The verdict comes from the multicone; (C, τ) is a diagnostic fit of the
/// per-depth envelope of α2/α1.
DominationReport is_dominated(std::span<const Matrix2> mats, int depth = 8);

enum class Irreducibility { StronglyIrreducible, IrreducibleNotStrongly, Reducible };
const char* to_string(Irreducibility c);

struct IrreducibilityClass {
    Irreducibility tag = Irreducibility::StronglyIrreducible;
    /// Common eigenline (Reducible) or the swapped pair (IrreducibleNotStrongly).
    std::vector<ProjPoint> witness;
    /// Proximal word certifying the strictly affine hypothesis.
    std::optional<Word> proximal;
};

struct StrictlyAffine {
    bool found = false;
    Word witness;
};

/// Shortest word up to `depth` whose product has real eigenvalues of distinct
/// moduli.
StrictlyAffine strictly_affine(std::span<const Matrix2> mats, int depth = 6);

/// Throws Inconclusive when strong irreducibility cannot be certified.
IrreducibilityClass classify_irreducibility(std::span<const Matrix2> mats, double tol = 1e-8, int depth = 6);

/// Real eigenlines of m (empty when complex, one when defective or scalar
/// matrices are excluded by the caller).
std::vector<ProjPoint> eigenlines(const Matrix2& m);

/// Approximation of the Furstenberg directions by depth-n images of the
/// closure K of the multicone complement: arc(w) = A_{w1}^{-1}⋯A_{wn}^{-1} K.
struct DirectionsApprox {
    int depth = 0;
    /// Disjoint sorted union.
    std::vector<ProjInterval> intervals;
    /// Largest single cylinder arc width.
    double width_bound = 0.0;
    /// Max distance between cylinder arc midpoints.
    double midpoint_spread = 0.0;
    /// All periodic points of period ≤ 2 agree to 1e-9.
    bool singleton = false;
};

class FurstenbergDirections {
public:
    FurstenbergDirections(std::span<const Matrix2> mats, const Multicone& cone);

    const Multicone& cone() const { return cone_; }
    const std::vector<ProjInterval>& complement() const { return complement_; }

    /// Arc hull of ⋃_{|v| = k} A_{←wv}^{-1} K, a set containing Π([w]).
    ProjInterval cylinder(const Word& w, int extra_depth = 0) const;
    /// Cylinder arcs for every word of length n, lexicographic.
    std::vector<ProjInterval> level(int n) const;
    DirectionsApprox approx(int n) const;
    /// Hulls for all words of length m using `extra_depth` more letters.
    std::vector<ProjInterval> cylinder_table(int m, int extra_depth) const;
    /// Exact points Π(w^∞) of X_F for 1 ≤ |w| ≤ max_period, sorted, with
    /// duplicates closer than 1e-12 removed.
    std::vector<double> periodic_points(int max_period) const;

private:
    /// Pullbacks of each complement component, K consecutive arcs per word.
    std::vector<ProjInterval> raw_level(int n) const;

    std::vector<Matrix2> inverses_;
    Multicone cone_;
    std::vector<ProjInterval> complement_;
};

/// Throws NotDominated unless a multicone is certified.
DirectionsApprox furstenberg_directions(std::span<const Matrix2> mats, int depth);

struct FurstenbergSample {
    std::vector<double> angles;
    std::vector<double> histogram;
    /// TV distance between the histogram and its one-step pushforward mix.
    double tv_residual = 0.0;
};

/// Backward chains V = A_{i1}^{-1}⋯A_{iL}^{-1} V0 with i.i.d. letters from
/// `probs`; chain k uses stream k of `seed`. With `check_uniqueness` the
/// system must be strictly affine and strongly irreducible.
FurstenbergSample furstenberg_measure_sample(std::span<const Matrix2> mats, std::span<const double> probs,
                                             std::size_t n_samples, int burn_in, std::uint64_t seed,
                                             std::optional<double> start = std::nullopt, int bins = 64,
                                             bool check_uniqueness = true);

} // namespace affdim
