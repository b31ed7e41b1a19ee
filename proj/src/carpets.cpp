#include "affdim/carpets.hpp"

#include "affdim/error.hpp"
#include "affdim/geometry.hpp"
#include "affdim/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace affdim {

void CarpetSpec::validate() const {
    if (p < 2 || q <= p) {
        throw InvalidInput("carpet needs q > p >= 2");
    }
    if (digits.empty() || digits.size() > static_cast<std::size_t>(p * q)) {
        throw InvalidInput("carpet needs between 1 and p*q digits");
    }
    std::set<std::pair<int, int>> seen;
    for (const auto& [j, k] : digits) {
        if (j < 0 || j >= p || k < 0 || k >= q) {
            throw InvalidInput("carpet digit out of range");
        }
        if (!seen.insert({j, k}).second) {
            throw InvalidInput("repeated carpet digit");
        }
    }
}

std::vector<int> CarpetSpec::column_counts() const {
    std::vector<int> n(static_cast<std::size_t>(p), 0);
    for (const auto& d : digits) {
        ++n[static_cast<std::size_t>(d.first)];
    }
    return n;
}

Ifs to_ifs(const CarpetSpec& spec) {
    spec.validate();
    std::vector<AffineMap> maps;
    const Matrix2 a = Matrix2::diagonal(1.0 / spec.p, 1.0 / spec.q);
    for (const auto& [j, k] : spec.digits) {
        maps.push_back({a, {static_cast<double>(j) / spec.p, static_cast<double>(k) / spec.q}});
    }
    return Ifs(std::move(maps));
}

double mackay_assouad(const CarpetSpec& spec) {
    spec.validate();
    int cols = 0;
    int top = 0;
    for (int n : spec.column_counts()) {
        cols += n > 0;
        top = std::max(top, n);
    }
    return std::log(cols) / std::log(spec.p) + std::log(top) / std::log(spec.q);
}

double fraser_lower(const CarpetSpec& spec) {
    spec.validate();
    int cols = 0;
    int low = spec.q + 1;
    for (int n : spec.column_counts()) {
        if (n > 0) {
            ++cols;
            low = std::min(low, n);
        }
    }
    return std::log(cols) / std::log(spec.p) + std::log(low) / std::log(spec.q);
}

double mcmullen_hausdorff(const CarpetSpec& spec) {
    spec.validate();
    const double theta = std::log(spec.p) / std::log(spec.q);
    double acc = 0.0;
    for (int n : spec.column_counts()) {
        if (n > 0) {
            acc += std::pow(static_cast<double>(n), theta);
        }
    }
    return std::log(acc) / std::log(spec.p);
}

bool uniform_fibers(const CarpetSpec& spec) {
    spec.validate();
    int common = 0;
    for (int n : spec.column_counts()) {
        if (n == 0) {
            continue;
        }
        if (common != 0 && n != common) {
            return false;
        }
        common = n;
    }
    return true;
}

double carpet_affinity_formula(const CarpetSpec& spec) {
    spec.validate();
    const double N = static_cast<double>(spec.digits.size());
    if (N <= spec.p) {
        return std::log(N) / std::log(spec.p);
    }
    return 1.0 + std::log(N / spec.p) / std::log(spec.q);
}

CarpetSpec example_carpet() { return {4, 5, {{0, 0}, {0, 2}, {0, 4}, {2, 1}, {3, 3}}}; }

Matrix2 default_extra_matrix(double eps) { return Matrix2{0.6, 0.3, 0.2, 0.5} * eps; }

double s_eps(const CarpetSpec& spec, const Matrix2& extra) {
    spec.validate();
    const auto sa = singular_values(Matrix2::diagonal(1.0 / spec.p, 1.0 / spec.q));
    const auto sb = singular_values(extra);
    const double N = static_cast<double>(spec.digits.size());
    const auto f = [&](double s) { return N * svf(sa, s) + svf(sb, s) - 1.0; };
    double lo = 0.0;
    double hi = 2.0;
    while (f(hi) > 0.0) {
        hi *= 2.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ExampleFixture example_fixture(double eps) { return example_fixture(eps, default_extra_matrix(eps)); }

ExampleFixture example_fixture(double eps, const Matrix2& extra) {
    if (!(eps > 0.0 && eps < 0.5)) {
        throw InvalidInput("example fixture needs eps in (0, 0.5)");
    }
    const CarpetSpec spec = example_carpet();
    const Ifs carpet = to_ifs(spec);
    // Empty cells, ranked by distance from the occupied ones.
    std::set<std::pair<int, int>> used(spec.digits.begin(), spec.digits.end());
    std::vector<std::pair<double, std::pair<int, int>>> empty;
    for (int j = 0; j < spec.p; ++j) {
        for (int k = 0; k < spec.q; ++k) {
            if (used.count({j, k})) {
                continue;
            }
            double nearest = 1e300;
            for (const auto& [a, b] : spec.digits) {
                nearest = std::min(nearest, std::hypot(static_cast<double>(a - j) / spec.p,
                                                       static_cast<double>(b - k) / spec.q));
            }
            empty.push_back({-nearest, {j, k}});
        }
    }
    std::sort(empty.begin(), empty.end());
    const Vec2 image_mid = extra * Vec2{0.5, 0.5};
    for (const auto& [score, cell] : empty) {
        const Vec2 centre{(cell.first + 0.5) / spec.p, (cell.second + 0.5) / spec.q};
        const Vec2 t = centre - image_mid;
        std::vector<AffineMap> maps = carpet.maps();
        maps.push_back({extra, t});
        try {
            Ifs ifs(maps);
            if (ssc_check(ifs, 4).separated != Separation::Certified) {
                continue;
            }
            ExampleFixture out{std::move(ifs), eps, s_eps(spec, extra), 0.0, mackay_assouad(spec),
                               fraser_lower(spec), t};
            out.affinity = affinity_dimension(carpet.matrices()).value;
            return out;
        } catch (const InvalidInput&) {
            continue;
        }
    }
    throw PlacementFailed("no empty cell gives a separated placement");
}

} // namespace affdim
