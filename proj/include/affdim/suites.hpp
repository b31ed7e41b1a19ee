#pragma once

#include "affdim/estimators.hpp"
#include "affdim/extent.hpp"
#include "affdim/ifs.hpp"
#include "affdim/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace affdim {

enum class Status { Pass, Fail, Skipped };
const char* to_string(Status s);

struct Check {
    std::string name;
    Status status = Status::Skipped;
    Json measured = Json::object();
    std::string note;
};

struct SuiteResult {
    std::string suite;
    Status status = Status::Skipped;
    std::vector<Check> checks;
};

Json to_json(const SuiteResult& r);

struct SuiteOptions {
    std::uint64_t seed = 1;
    /// Sampling depth for point clouds.
    int depth = 8;
};

// ---- shared recipes ----------------------------------------------------

/// max‖A_i‖^depth · diam(X), the cylinder size reached at that depth.
double depth_resolution(const Ifs& ifs, const AttractorExtent& ext, int depth);
/// One on-set point per cylinder of length `depth`.
std::vector<Vec2> cylinder_centers(const Ifs& ifs, int depth);

struct SliceScan {
    double max_dim = 0.0;
    double max_theta = 0.0;
    Vec2 max_center;
    std::size_t slices = 0;
};
/// Box dimensions of X ∩ (V + x) over the given directions and centres,
/// from tubes of width 2·resolution around each line.
SliceScan slice_scan(const PointCloud& cloud, double diam, std::span<const double> thetas,
                     std::span<const Vec2> centers);

/// sup of sigma_count over every `stride`-th cloud point, every direction and
/// r = diam · 2^{-j}, j = 1..depth.
std::size_t sigma_sup(const Ifs& ifs, const AttractorExtent& ext, std::span<const double> thetas,
                      const PointCloud& cloud, int depth, std::size_t stride = 7);

struct PfConsistency {
    double s = 0.0; // extrapolated affinity dimension
    double lambda = 0.0;
    double adjoint_error = 0.0; // max over the test functions
};
PfConsistency pf_consistency(std::span<const Matrix2> mats, std::uint64_t seed, int m = 6);

struct TransCase {
    double derivative = 0.0;
    double finite_difference = 0.0;
    double magnitude = 0.0;
    double tail = 0.0;
};
/// Random three-map systems with ‖A_i‖ = 1/4 and word pairs with distinct
/// first letters.
std::vector<TransCase> transversality_cases(std::uint64_t seed, int count);

// ---- suites ------------------------------------------------------------

SuiteResult verify_diml(const Ifs& ifs, const SuiteOptions& opt);
SuiteResult verify_dima(const Ifs& ifs, const SuiteOptions& opt);
SuiteResult verify_ahl(const Ifs& ifs, const SuiteOptions& opt);
SuiteResult verify_gibbs(const Ifs& ifs, const SuiteOptions& opt);
SuiteResult verify_content(const Ifs& ifs, const SuiteOptions& opt);
SuiteResult verify_trans(const SuiteOptions& opt);

std::vector<std::string> suite_names();
/// Fixture each suite runs on by default (empty for `trans`).
std::string default_fixture(const std::string& suite);

} // namespace affdim
