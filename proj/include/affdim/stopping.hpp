#pragma once

#include "affdim/extent.hpp"
#include "affdim/ifs.hpp"

#include <optional>
#include <vector>

namespace affdim {

enum class StoppingCriterion { ByAlpha1, ByProjectedDiameter, ByAlpha2Aspect };

const char* to_string(StoppingCriterion c);

struct StoppingOptions {
    StoppingCriterion criterion = StoppingCriterion::ByAlpha1;
    /// Line V (angle in [0, π)); required for ByProjectedDiameter.
    std::optional<double> direction;
    /// Aspect threshold ϱ; required for ByAlpha2Aspect.
    std::optional<double> rho;
};

/// Prefix-free, exhaustive set of words at scale r, in lexicographic order,
/// with the composed maps.
struct StoppingSet {
    StoppingCriterion criterion = StoppingCriterion::ByAlpha1;
    double r = 0.0;
    std::vector<Word> words;
    std::vector<AffineMap> maps;

    std::size_t size() const { return words.size(); }
};

/// Size of the cylinder φ_w(X) used by a criterion (upper bound).
double stopping_size(const AttractorExtent& ext, const Matrix2& linear, const StoppingOptions& opt);

StoppingSet stopping_set(const Ifs& ifs, const AttractorExtent& ext, double r, const StoppingOptions& opt = {});
StoppingSet stopping_set(const Ifs& ifs, double r, const StoppingOptions& opt = {});

} // namespace affdim
