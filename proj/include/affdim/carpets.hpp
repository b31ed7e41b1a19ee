#pragma once

#include "affdim/ifs.hpp"

#include <utility>
#include <vector>

namespace affdim {

/// Bedford–McMullen grid: maps x ↦ diag(1/p, 1/q) x + (j/p, k/q).
struct CarpetSpec {
    int p = 2;
    int q = 3;
    std::vector<std::pair<int, int>> digits; // (column j, row k)

    /// Throws InvalidInput on q ≤ p, p < 2, out-of-range or repeated digits.
    void validate() const;
    /// n_j for j = 0..p-1.
    std::vector<int> column_counts() const;
};

Ifs to_ifs(const CarpetSpec& spec);

double mackay_assouad(const CarpetSpec& spec);
double mcmullen_hausdorff(const CarpetSpec& spec);
double fraser_lower(const CarpetSpec& spec);
bool uniform_fibers(const CarpetSpec& spec);
/// log N/log p when N ≤ p, else 1 + log(N/p)/log q.
double carpet_affinity_formula(const CarpetSpec& spec);

/// p = 4, q = 5 with column counts (3, 0, 1, 1).
CarpetSpec example_carpet();

/// Default extra matrix ε·[[0.6, 0.3], [0.2, 0.5]].
Matrix2 default_extra_matrix(double eps);

/// Root of N φ^s(A) + φ^s(B) = 1 for the carpet linear part A.
double s_eps(const CarpetSpec& spec, const Matrix2& extra);

struct ExampleFixture {
    Ifs ifs;
    double eps = 0.0;
    double s_eps = 0.0;
    double affinity = 0.0; // of the carpet alone
    double mackay = 0.0;
    double fraser = 0.0;
    Vec2 placement;
};

/// The example carpet plus the extra matrix in an empty grid cell, with the
/// placement checked by the SSC certificate (PlacementFailed otherwise).
ExampleFixture example_fixture(double eps);
ExampleFixture example_fixture(double eps, const Matrix2& extra);

} // namespace affdim
