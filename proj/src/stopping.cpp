#include "affdim/stopping.hpp"

#include "affdim/error.hpp"

#include <cmath>

namespace affdim {
namespace {

constexpr double kRelTol = 1e-12;

Vec2 normal_of(double theta) { return {-std::sin(theta), std::cos(theta)}; }

bool stops(const AttractorExtent& ext, const Matrix2& m, double r, const StoppingOptions& opt) {
    const double size = stopping_size(ext, m, opt);
    if (opt.criterion == StoppingCriterion::ByAlpha2Aspect) {
        const auto sv = singular_values(m);
        return sv.minor * ext.diam_hi() < *opt.rho * sv.major && size <= r * (1.0 + kRelTol);
    }
    return size <= r * (1.0 + kRelTol);
}

} // namespace

const char* to_string(StoppingCriterion c) {
    switch (c) {
    case StoppingCriterion::ByAlpha1:
        return "by-alpha1";
    case StoppingCriterion::ByProjectedDiameter:
        return "by-projected-diameter";
    case StoppingCriterion::ByAlpha2Aspect:
        return "by-alpha2-aspect";
    }
    return "?";
}

double stopping_size(const AttractorExtent& ext, const Matrix2& linear, const StoppingOptions& opt) {
    if (opt.criterion == StoppingCriterion::ByProjectedDiameter) {
        return ext.projected_width(linear, normal_of(*opt.direction));
    }
    return singular_values(linear).major * ext.diam_hi();
}

StoppingSet stopping_set(const Ifs& ifs, const AttractorExtent& ext, double r, const StoppingOptions& opt) {
    if (!(r > 0.0)) {
        throw InvalidInput("stopping scale must be positive");
    }
    if (opt.criterion == StoppingCriterion::ByProjectedDiameter && !opt.direction) {
        throw InvalidInput("projected-diameter stopping needs a direction");
    }
    if (opt.criterion == StoppingCriterion::ByAlpha2Aspect && !(opt.rho && *opt.rho > 0.0)) {
        throw InvalidInput("aspect stopping needs a positive rho");
    }
    StoppingSet out;
    out.criterion = opt.criterion;
    out.r = r;
    const std::size_t cap = word_cap();

    // Depth-first in lexicographic order; the empty word never stops so the
    // coarsest answer is the N single letters.
    struct Frame {
        std::vector<int> letters;
        AffineMap map;
    };
    std::vector<Frame> stack;
    for (std::size_t i = ifs.size(); i-- > 0;) {
        stack.push_back({{static_cast<int>(i)}, ifs[i]});
    }
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (stops(ext, f.map.linear, r, opt)) {
            if (out.words.size() >= cap) {
                throw BudgetExceeded(cap);
            }
            out.words.emplace_back(std::move(f.letters));
            out.maps.push_back(f.map);
            continue;
        }
        if (f.letters.size() > 4096) {
            throw BudgetExceeded(cap);
        }
        for (std::size_t i = ifs.size(); i-- > 0;) {
            std::vector<int> child = f.letters;
            child.push_back(static_cast<int>(i));
            stack.push_back({std::move(child), f.map.compose(ifs[i])});
        }
        if (stack.size() > cap) {
            throw BudgetExceeded(cap);
        }
    }
    return out;
}

StoppingSet stopping_set(const Ifs& ifs, double r, const StoppingOptions& opt) {
    const AttractorExtent ext(ifs);
    return stopping_set(ifs, ext, r, opt);
}

} // namespace affdim
