#include "affdim/error.hpp"
#include "affdim/geometry.hpp"
#include "affdim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace affdim {
namespace {

Vec2 normal_of(double theta) { return {-std::sin(theta), std::cos(theta)}; }

} // namespace

double interval_union_content(std::vector<Interval1> intervals, double s) {
    if (!(s > 0.0) || s > 1.0) {
        throw InvalidInput("content needs s in (0, 1]");
    }
    if (intervals.empty()) {
        return 0.0;
    }
    std::sort(intervals.begin(), intervals.end(), [](const Interval1& a, const Interval1& b) { return a.lo < b.lo; });
    std::vector<Interval1> merged;
    for (const auto& iv : intervals) {
        if (!merged.empty() && iv.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        } else {
            merged.push_back(iv);
        }
    }
    // Optimal covers use hulls of consecutive runs:
    // C[j] = min_i C[i-1] + (hi_j - lo_i)^s.
    const std::size_t n = merged.size();
    std::vector<double> best(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
        double b = INFINITY;
        for (std::size_t i = j; i >= 1; --i) {
            const double term = std::pow(merged[j - 1].hi - merged[i - 1].lo, s);
            if (term >= b) {
                break;
            }
            b = std::min(b, best[i - 1] + term);
        }
        best[j] = b;
    }
    return best[n];
}

std::vector<double> content_by_depth(const Ifs& ifs, const AttractorExtent& ext, double theta, double s,
                                     std::span<const int> depths) {
    if (depths.empty()) {
        return {};
    }
    const int top = *std::max_element(depths.begin(), depths.end());
    check_budget(std::pow(static_cast<double>(ifs.size()), top));
    const Vec2 u = normal_of(theta);
    std::vector<std::vector<Interval1>> levels(static_cast<std::size_t>(top) + 1);
    levels[0].push_back(ext.projected(AffineMap::identity(), u));
    std::vector<AffineMap> maps{AffineMap::identity()};
    for (int d = 1; d <= top; ++d) {
        std::vector<AffineMap> next;
        next.reserve(maps.size() * ifs.size());
        auto& out = levels[static_cast<std::size_t>(d)];
        const auto& prev = levels[static_cast<std::size_t>(d - 1)];
        out.reserve(maps.size() * ifs.size());
        for (std::size_t w = 0; w < maps.size(); ++w) {
            for (std::size_t i = 0; i < ifs.size(); ++i) {
                next.push_back(maps[w].compose(ifs[i]));
                Interval1 iv = ext.projected(next.back(), u);
                iv.lo = std::max(iv.lo, prev[w].lo);
                iv.hi = std::min(iv.hi, prev[w].hi);
                if (iv.hi < iv.lo) {
                    iv.hi = iv.lo;
                }
                out.push_back(iv);
            }
        }
        maps = std::move(next);
    }
    std::vector<double> out(depths.size());
    for (std::size_t k = 0; k < depths.size(); ++k) {
        out[k] = interval_union_content(levels[static_cast<std::size_t>(depths[k])], s);
    }
    return out;
}

ContentEstimate hausdorff_content_projection(const Ifs& ifs, const AttractorExtent& ext, double theta, double s,
                                             int depth) {
    const int d[] = {depth};
    ContentEstimate est;
    est.s = s;
    est.theta = theta;
    est.depth = depth;
    est.value = content_by_depth(ifs, ext, theta, s, d)[0];
    return est;
}

ContentConsistency content_consistency(const Ifs& ifs, int n_cylinders, int depth, std::uint64_t seed, int m) {
    const auto mats = ifs.matrices();
    auto cone = try_invariant_multicone(mats);
    if (!cone) {
        throw NotDominated();
    }
    const FurstenbergDirections dirs(mats, *cone);
    ContentConsistency out;
    out.s = affinity_dimension(mats).value;
    if (out.s > 1.0) {
        throw PreconditionFailed("content consistency needs affinity dimension <= 1");
    }
    const EqState eq = equilibrium_state(mats, dirs, out.s, m);
    const auto arcs = dirs.cylinder_table(m, direction_refinement(mats.size(), m));
    const AttractorExtent ext(ifs);

    std::set<std::size_t> chosen;
    std::vector<std::size_t> picks;
    const std::size_t total = eq.h.size();
    for (std::uint64_t k = 0; picks.size() < static_cast<std::size_t>(n_cylinders) && picks.size() < total; ++k) {
        parallel::CounterRng rng(seed, k);
        const std::size_t idx = rng.below(total);
        if (chosen.insert(idx).second) {
            picks.push_back(idx);
        }
    }
    out.contents.resize(picks.size());
    parallel::for_each_index(picks.size(), [&](std::size_t k) {
        const double theta = arcs[picks[k]].mid();
        out.contents[k] = hausdorff_content_projection(ifs, ext, theta, out.s, depth).value;
    });
    double mean = 0.0;
    for (std::size_t k = 0; k < picks.size(); ++k) {
        out.cylinders.push_back(word_from_index(picks[k], mats.size(), static_cast<std::size_t>(m)));
        out.h.push_back(eq.h[picks[k]]);
        out.ratios.push_back(out.contents[k] / eq.h[picks[k]]);
        mean += out.ratios.back();
    }
    mean /= static_cast<double>(out.ratios.size());
    double var = 0.0;
    for (double r : out.ratios) {
        var += (r - mean) * (r - mean);
    }
    var /= static_cast<double>(out.ratios.size());
    out.cv = mean > 0.0 ? std::sqrt(var) / mean : INFINITY;
    return out;
}

} // namespace affdim
