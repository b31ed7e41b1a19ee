#include "affdim/error.hpp"
#include "affdim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace affdim {
namespace {

struct Node {
    std::vector<int> a;
    std::vector<int> b;
    AffineMap fa;
    AffineMap fb;
    double ea = 0.0;
    double eb = 0.0;
    double lower = 0.0;
    std::uint64_t order = 0;
};

struct NodeCmp {
    bool operator()(const Node& x, const Node& y) const {
        return x.lower > y.lower || (x.lower == y.lower && x.order > y.order);
    }
};

struct SearchResult {
    double lower = 0.0;
    double upper = 0.0;
    bool budget_hit = false;
};

SearchResult search(const Ifs& ifs, const AttractorExtent& ext, std::size_t depth) {
    const Vec2 x0 = ext.seed();
    const double diam = ext.diam_hi();
    const std::size_t cap = word_cap();
    std::priority_queue<Node, std::vector<Node>, NodeCmp> heap;
    std::uint64_t order = 0;
    SearchResult res;
    res.upper = 1e300;
    const auto push = [&](std::vector<int> a, const AffineMap& fa, std::vector<int> b, const AffineMap& fb) {
        Node n{std::move(a), std::move(b), fa, fb, 0.0, 0.0, 0.0, order++};
        n.ea = singular_values(fa.linear).major * diam;
        n.eb = singular_values(fb.linear).major * diam;
        const double d = distance(fa(x0), fb(x0));
        res.upper = std::min(res.upper, d);
        n.lower = d - n.ea - n.eb;
        heap.push(std::move(n));
    };
    for (std::size_t i = 0; i < ifs.size(); ++i) {
        for (std::size_t j = i + 1; j < ifs.size(); ++j) {
            push({static_cast<int>(i)}, ifs[i], {static_cast<int>(j)}, ifs[j]);
        }
    }
    while (!heap.empty()) {
        Node n = heap.top();
        heap.pop();
        const bool a_done = n.a.size() >= depth;
        const bool b_done = n.b.size() >= depth;
        if (a_done && b_done) {
            res.lower = n.lower;
            return res;
        }
        if (order > cap) {
            res.budget_hit = true;
            res.lower = n.lower;
            return res;
        }
        const bool split_a = !a_done && (b_done || n.ea >= n.eb);
        for (std::size_t k = 0; k < ifs.size(); ++k) {
            if (split_a) {
                auto a = n.a;
                a.push_back(static_cast<int>(k));
                push(std::move(a), n.fa.compose(ifs[k]), n.b, n.fb);
            } else {
                auto b = n.b;
                b.push_back(static_cast<int>(k));
                push(n.a, n.fa, std::move(b), n.fb.compose(ifs[k]));
            }
        }
    }
    return res;
}

} // namespace

const char* to_string(Separation s) {
    switch (s) {
    case Separation::Certified:
        return "Certified";
    case Separation::Overlap:
        return "Overlap";
    case Separation::Unknown:
        return "Unknown";
    }
    return "?";
}

SscReport ssc_check(const Ifs& ifs, const AttractorExtent& ext, int depth) {
    if (depth < 2) {
        throw InvalidInput("SSC check needs depth >= 2");
    }
    SscReport rep;
    rep.depth = depth;
    if (ifs.size() < 2) {
        rep.separated = Separation::Certified;
        rep.delta_lower = rep.delta_upper = INFINITY;
        return rep;
    }
    rep.delta_upper = 1e300;
    double best = -1e300;
    int intersecting = 0;
    bool budget = false;
    for (int d = depth; d <= depth + 2; ++d) {
        const auto r = search(ifs, ext, static_cast<std::size_t>(d));
        rep.delta_upper = std::min(rep.delta_upper, r.upper);
        if (r.budget_hit) {
            budget = true;
            break;
        }
        if (r.lower > best) {
            best = r.lower;
            rep.depth = d;
        }
        if (r.lower > 0.0) {
            break;
        }
        ++intersecting;
    }
    rep.delta_lower = std::max(0.0, best);
    if (best > 0.0) {
        rep.separated = Separation::Certified;
    } else if (!budget && intersecting == 3) {
        rep.separated = Separation::Overlap;
    } else {
        rep.separated = Separation::Unknown;
    }
    return rep;
}

SscReport ssc_check(const Ifs& ifs, int depth) {
    const AttractorExtent ext(ifs);
    return ssc_check(ifs, ext, depth);
}

double slice_bound_root(int M, double c) {
    if (M <= 1) {
        return 0.0;
    }
    const double factor = 1.0 - (M - 1) * c;
    if (factor <= 0.0) {
        return 0.0;
    }
    // log f(s) = (1 - s) log M + s log factor is decreasing with f(0) = M > 1.
    const auto logf = [&](double s) { return (1.0 - s) * std::log(static_cast<double>(M)) + s * std::log(factor); };
    double lo = 0.0;
    double hi = 1.0;
    if (logf(hi) >= 0.0) {
        return 1.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (logf(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double slice_upper_bound(const Ifs& ifs, const AttractorExtent& ext, const SscReport& ssc) {
    if (ssc.separated != Separation::Certified || !(ssc.delta_lower > 0.0)) {
        throw NotSeparated();
    }
    const double delta = ssc.delta_lower;
    const double c = delta / (3.0 * ext.diam_hi() + 2.0 * delta);
    double best = 0.0;
    for (int M = 2; M <= static_cast<int>(ifs.size()); ++M) {
        best = std::max(best, slice_bound_root(M, c));
    }
    return best;
}

double slice_upper_bound(const Ifs& ifs) {
    const AttractorExtent ext(ifs);
    return slice_upper_bound(ifs, ext, ssc_check(ifs, ext, 6));
}

} // namespace affdim
