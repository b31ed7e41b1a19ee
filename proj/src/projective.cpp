#include "affdim/projective.hpp"

#include "affdim/error.hpp"
#include "affdim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace affdim {
namespace {

constexpr double kPi = std::numbers::pi;

double ccw_offset(double from, double to) {
    double d = std::fmod(to - from, kPi);
    if (d < 0.0) {
        d += kPi;
    }
    return d;
}

ProjInterval fatten(const ProjInterval& a, double eps) {
    return {reduce_angle(a.start - eps), std::min(a.width + 2.0 * eps, kPi)};
}

bool is_scalar(const Matrix2& m, double tol) {
    const double scale = m.frobenius();
    return std::abs(m.b) <= tol * scale && std::abs(m.c) <= tol * scale && std::abs(m.a - m.d) <= tol * scale;
}

// Pair {p, q} mapped to itself by m; `swapped` reports p ↦ q.
bool preserves_pair(const Matrix2& m, ProjPoint p, ProjPoint q, double tol, bool& swapped) {
    const ProjPoint mp = act(m, p);
    const ProjPoint mq = act(m, q);
    if (proj_distance(mp, p) <= tol && proj_distance(mq, q) <= tol) {
        swapped = false;
        return true;
    }
    if (proj_distance(mp, q) <= tol && proj_distance(mq, p) <= tol) {
        swapped = true;
        return true;
    }
    return false;
}

} // namespace

double reduce_angle(double theta) {
    double t = std::fmod(theta, kPi);
    if (t < 0.0) {
        t += kPi;
    }
    if (t >= kPi) {
        t = 0.0;
    }
    return t;
}

ProjPoint ProjPoint::from_vector(Vec2 v) { return {reduce_angle(std::atan2(v.y, v.x))}; }

Vec2 ProjPoint::unit() const { return {std::cos(theta), std::sin(theta)}; }

ProjPoint ProjPoint::perp() const { return {reduce_angle(theta + 0.5 * kPi)}; }

double proj_distance(ProjPoint v, ProjPoint w) { return std::abs(std::sin(v.theta - w.theta)); }

bool ProjInterval::contains(double theta, double tol) const {
    const double off = ccw_offset(start, theta);
    return off <= width + tol || off >= kPi - tol;
}

bool ProjInterval::contains(const ProjInterval& inner, double margin) const {
    const double off = ccw_offset(start, inner.start);
    return off >= margin && off + inner.width <= width - margin;
}

ProjPoint act(const Matrix2& m, ProjPoint v) { return ProjPoint::from_vector(m * v.unit()); }

ProjInterval act(const Matrix2& m, const ProjInterval& arc) {
    const double s = act(m, ProjPoint{arc.start}).theta;
    const double e = act(m, ProjPoint{reduce_angle(arc.end())}).theta;
    ProjInterval out = m.det() > 0.0 ? ProjInterval{s, ccw_offset(s, e)} : ProjInterval{e, ccw_offset(e, s)};
    if (out.width > kPi - 1e-12 && arc.width < 0.5 * kPi) {
        // Rounding wrapped a degenerate image around.
        out.width = 0.0;
    }
    return out;
}

double norm_on_line(const Matrix2& m, ProjPoint v) { return (m * v.unit()).norm(); }

std::optional<std::vector<ProjInterval>> merge_arcs(std::vector<ProjInterval> arcs, double tol) {
    std::vector<ProjInterval> out;
    if (arcs.empty()) {
        return out;
    }
    for (auto& a : arcs) {
        if (a.width >= kPi - tol) {
            return std::nullopt;
        }
        a.start = reduce_angle(a.start);
    }
    std::sort(arcs.begin(), arcs.end(), [](const ProjInterval& x, const ProjInterval& y) {
        return x.start < y.start || (x.start == y.start && x.width > y.width);
    });
    double cs = arcs[0].start;
    double ce = arcs[0].end();
    for (std::size_t k = 1; k < arcs.size(); ++k) {
        if (arcs[k].start <= ce + tol) {
            ce = std::max(ce, arcs[k].end());
        } else {
            out.push_back({cs, ce - cs});
            cs = arcs[k].start;
            ce = arcs[k].end();
        }
    }
    out.push_back({cs, ce - cs});
    // Wraparound: the last arc may reach the first ones.
    while (out.size() > 1 && out.back().end() + tol >= out.front().start + kPi) {
        auto& last = out.back();
        const double e = std::max(last.end(), out.front().end() + kPi);
        last.width = e - last.start;
        out.erase(out.begin());
    }
    if (out.size() == 1 && out[0].width >= kPi - tol) {
        return std::nullopt;
    }
    for (const auto& a : out) {
        if (a.width >= kPi - tol) {
            return std::nullopt;
        }
    }
    std::sort(out.begin(), out.end(), [](const ProjInterval& x, const ProjInterval& y) { return x.start < y.start; });
    return out;
}

ProjInterval hull_arc(std::span<const ProjInterval> arcs) {
    auto merged = merge_arcs(std::vector<ProjInterval>(arcs.begin(), arcs.end()), 0.0);
    if (!merged) {
        return {0.0, kPi};
    }
    if (merged->empty()) {
        return {0.0, 0.0};
    }
    const auto& m = *merged;
    if (m.size() == 1) {
        return m[0];
    }
    std::size_t best = 0;
    double best_gap = -1.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const auto& next = m[(k + 1) % m.size()];
        const double gap = ccw_offset(reduce_angle(m[k].end()), next.start);
        if (gap > best_gap) {
            best_gap = gap;
            best = k;
        }
    }
    const auto& first = m[(best + 1) % m.size()];
    return {first.start, kPi - best_gap};
}

bool Multicone::contains(double theta, double tol) const {
    return std::any_of(intervals.begin(), intervals.end(),
                       [&](const ProjInterval& a) { return a.contains(theta, tol); });
}

std::vector<ProjInterval> Multicone::complement() const {
    std::vector<ProjInterval> out;
    if (intervals.empty()) {
        return {{0.0, kPi}};
    }
    for (std::size_t k = 0; k < intervals.size(); ++k) {
        const auto& cur = intervals[k];
        const auto& next = intervals[(k + 1) % intervals.size()];
        const double e = reduce_angle(cur.end());
        out.push_back({e, ccw_offset(e, next.start)});
    }
    std::sort(out.begin(), out.end(), [](const ProjInterval& x, const ProjInterval& y) { return x.start < y.start; });
    return out;
}

bool strictly_invariant(std::span<const Matrix2> mats, const Multicone& cone, double margin) {
    for (const auto& m : mats) {
        for (const auto& arc : cone.intervals) {
            const ProjInterval img = act(m, arc);
            const bool inside = std::any_of(cone.intervals.begin(), cone.intervals.end(),
                                            [&](const ProjInterval& c) { return c.contains(img, margin); });
            if (!inside) {
                return false;
            }
        }
    }
    return true;
}

namespace {

// Fewer arcs give tighter direction hulls; close any gap that can be closed
// without losing strict invariance, smallest first.
Multicone fill_gaps(std::span<const Matrix2> mats, Multicone cone, double margin) {
    bool changed = true;
    while (changed && cone.intervals.size() > 1) {
        changed = false;
        auto gaps = cone.complement();
        std::sort(gaps.begin(), gaps.end(),
                  [](const ProjInterval& x, const ProjInterval& y) { return x.width < y.width; });
        for (const auto& g : gaps) {
            auto arcs = cone.intervals;
            arcs.push_back(g);
            auto merged = merge_arcs(arcs);
            if (!merged) {
                continue;
            }
            Multicone trial{*merged};
            if (strictly_invariant(mats, trial, margin)) {
                cone = std::move(trial);
                changed = true;
                break;
            }
        }
    }
    return cone;
}

} // namespace

std::optional<Multicone> try_invariant_multicone(std::span<const Matrix2> mats, const MulticoneSearch& opt) {
    if (mats.empty()) {
        return std::nullopt;
    }
    std::vector<ProjInterval> seed;
    const std::vector<Matrix2> base(mats.begin(), mats.end());
    for (std::size_t depth = 1; depth <= 3; ++depth) {
        for (const auto& aw : words_products(base, depth)) {
            const double th = ProjPoint::from_vector(top_singular_direction(aw)).theta;
            seed.push_back(act(aw, ProjInterval{reduce_angle(th - 0.25 * kPi), 0.5 * kPi}));
        }
    }
    static constexpr double kEps[] = {0.05, 0.02, 0.01, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4};
    for (double eps : kEps) {
        std::vector<ProjInterval> fat;
        for (const auto& a : seed) {
            fat.push_back(fatten(a, eps));
        }
        auto cur = merge_arcs(fat);
        for (int it = 0; cur && it < opt.max_iters; ++it) {
            Multicone cone{*cur};
            if (strictly_invariant(mats, cone, opt.margin)) {
                return fill_gaps(mats, std::move(cone), opt.margin);
            }
            std::vector<ProjInterval> next;
            for (const auto& m : mats) {
                for (const auto& a : cone.intervals) {
                    next.push_back(fatten(act(m, a), eps));
                }
            }
            cur = merge_arcs(std::move(next));
        }
    }
    return std::nullopt;
}

Multicone find_invariant_multicone(std::span<const Matrix2> mats, const MulticoneSearch& opt) {
    auto cone = try_invariant_multicone(mats, opt);
    if (!cone) {
        throw NotFound("no strongly invariant multicone found");
    }
    return *cone;
}

DominationReport is_dominated(std::span<const Matrix2> mats, int depth) {
    if (depth < 3) {
        throw InvalidInput("domination check needs depth >= 3");
    }
    DominationReport rep;
    rep.depth = depth;
    rep.cone = try_invariant_multicone(mats);
    rep.certified = rep.cone.has_value();
    const std::vector<Matrix2> base(mats.begin(), mats.end());
    std::vector<Matrix2> level{Matrix2::identity()};
    for (int n = 1; n <= depth; ++n) {
        check_budget(static_cast<double>(level.size() * base.size()));
        std::vector<Matrix2> next;
        next.reserve(level.size() * base.size());
        double worst = 0.0;
        for (const auto& w : level) {
            for (const auto& a : base) {
                next.push_back(w * a);
                const auto sv = singular_values(next.back());
                worst = std::max(worst, sv.minor / sv.major);
            }
        }
        // Keep products well scaled; ratios are scale free.
        for (auto& m : next) {
            const double f = 1.0 / m.frobenius();
            m = m * f;
        }
        level = std::move(next);
        rep.envelope.push_back(worst);
    }
    double mx = 0.0, my = 0.0;
    for (int n = 1; n <= depth; ++n) {
        mx += n;
        my += std::log(rep.envelope[static_cast<std::size_t>(n - 1)]);
    }
    mx /= depth;
    my /= depth;
    double sxx = 0.0, sxy = 0.0;
    for (int n = 1; n <= depth; ++n) {
        const double y = std::log(rep.envelope[static_cast<std::size_t>(n - 1)]);
        sxx += (n - mx) * (n - mx);
        sxy += (n - mx) * (y - my);
    }
    const double slope = sxy / sxx;
    rep.fitted_tau = std::exp(slope);
    rep.fitted_c = std::exp(my - slope * mx);
    return rep;
}

const char* to_string(Irreducibility c) {
    switch (c) {
    case Irreducibility::StronglyIrreducible:
        return "StronglyIrreducible";
    case Irreducibility::IrreducibleNotStrongly:
        return "IrreducibleNotStrongly";
    case Irreducibility::Reducible:
        return "Reducible";
    }
    return "?";
}

std::vector<ProjPoint> eigenlines(const Matrix2& m) {
    const double tr = m.trace();
    const double det = m.det();
    const double disc = tr * tr - 4.0 * det;
    const double scale = tr * tr + 4.0 * std::abs(det);
    if (disc < -1e-14 * scale) {
        return {};
    }
    const double root = std::sqrt(std::max(disc, 0.0));
    std::vector<ProjPoint> out;
    for (double lam : {0.5 * (tr + root), 0.5 * (tr - root)}) {
        const Vec2 v1{m.b, lam - m.a};
        const Vec2 v2{lam - m.d, m.c};
        const Vec2 v = v1.norm() >= v2.norm() ? v1 : v2;
        if (v.norm() == 0.0) {
            continue;
        }
        const ProjPoint p = ProjPoint::from_vector(v);
        if (out.empty() || proj_distance(out[0], p) > 1e-12) {
            out.push_back(p);
        }
        if (root == 0.0) {
            break;
        }
    }
    return out;
}

StrictlyAffine strictly_affine(std::span<const Matrix2> mats, int depth) {
    const std::vector<Matrix2> base(mats.begin(), mats.end());
    for (int n = 1; n <= depth; ++n) {
        const auto prods = words_products(base, static_cast<std::size_t>(n));
        for (std::size_t k = 0; k < prods.size(); ++k) {
            const Matrix2& m = prods[k];
            const double tr = m.trace();
            const double det = m.det();
            const double disc = tr * tr - 4.0 * det;
            const bool real_distinct = disc > 1e-10 * (tr * tr + 4.0 * std::abs(det));
            const bool moduli_differ = std::abs(tr) > 1e-10 * std::sqrt(std::abs(det));
            if (real_distinct && moduli_differ) {
                return {true, word_from_index(k, base.size(), static_cast<std::size_t>(n))};
            }
        }
    }
    return {};
}

IrreducibilityClass classify_irreducibility(std::span<const Matrix2> mats, double tol, int depth) {
    IrreducibilityClass out;
    std::vector<ProjPoint> candidates;
    bool all_scalar = true;
    for (const auto& m : mats) {
        if (is_scalar(m, 1e-14)) {
            continue;
        }
        all_scalar = false;
        for (const auto& p : eigenlines(m)) {
            candidates.push_back(p);
        }
    }
    if (all_scalar) {
        out.tag = Irreducibility::Reducible;
        out.witness = {ProjPoint{0.0}};
        return out;
    }
    for (const auto& p : candidates) {
        const bool common = std::all_of(mats.begin(), mats.end(),
                                        [&](const Matrix2& m) { return proj_distance(act(m, p), p) <= tol; });
        if (common) {
            out.tag = Irreducibility::Reducible;
            out.witness = {p};
            return out;
        }
    }

    std::vector<std::pair<ProjPoint, ProjPoint>> pairs;
    auto add_pairs = [&](const Matrix2& m) {
        if (is_scalar(m, 1e-14)) {
            return;
        }
        const auto lines = eigenlines(m);
        if (lines.size() == 2) {
            pairs.emplace_back(lines[0], lines[1]);
        }
    };
    for (const auto& a : mats) {
        add_pairs(a);
        for (const auto& b : mats) {
            add_pairs(a * b);
        }
    }
    for (const auto& [p, q] : pairs) {
        bool ok = true;
        bool any_swap = false;
        for (const auto& m : mats) {
            bool swapped = false;
            if (!preserves_pair(m, p, q, tol, swapped)) {
                ok = false;
                break;
            }
            any_swap = any_swap || swapped;
        }
        if (ok && any_swap) {
            out.tag = Irreducibility::IrreducibleNotStrongly;
            out.witness = {p, q};
            if (out.witness[1].theta < out.witness[0].theta) {
                std::swap(out.witness[0], out.witness[1]);
            }
            return out;
        }
    }

    const auto sa = strictly_affine(mats, depth);
    if (!sa.found) {
        throw Inconclusive("no proximal word found; strong irreducibility not certified");
    }
    out.tag = Irreducibility::StronglyIrreducible;
    out.proximal = sa.witness;
    return out;
}

FurstenbergDirections::FurstenbergDirections(std::span<const Matrix2> mats, const Multicone& cone)
    : cone_(cone), complement_(cone.complement()) {
    for (const auto& m : mats) {
        inverses_.push_back(m.inverse());
    }
}

std::vector<ProjInterval> FurstenbergDirections::raw_level(int n) const {
    // Each complement component is pulled back on its own; the images
    // cluster around X_F, and only then is their hull taken.
    std::vector<ProjInterval> cur = complement_;
    const std::size_t N = inverses_.size();
    for (int k = 0; k < n; ++k) {
        check_budget(static_cast<double>(cur.size() * N));
        std::vector<ProjInterval> next(cur.size() * N);
        parallel::for_each_index(N, [&](std::size_t j) {
            for (std::size_t v = 0; v < cur.size(); ++v) {
                next[j * cur.size() + v] = act(inverses_[j], cur[v]);
            }
        });
        cur = std::move(next);
    }
    return cur;
}

std::vector<ProjInterval> FurstenbergDirections::level(int n) const {
    auto cur = raw_level(n);
    const std::size_t K = complement_.size();
    if (K == 1) {
        return cur;
    }
    std::vector<ProjInterval> out(cur.size() / K);
    parallel::for_each_index(out.size(), [&](std::size_t v) {
        out[v] = hull_arc(std::span<const ProjInterval>(cur).subspan(v * K, K));
    });
    return out;
}

ProjInterval FurstenbergDirections::cylinder(const Word& w, int extra_depth) const {
    std::vector<ProjInterval> arcs = raw_level(extra_depth);
    for (auto& a : arcs) {
        for (std::size_t k = w.size(); k-- > 0;) {
            a = act(inverses_[static_cast<std::size_t>(w[k])], a);
        }
    }
    return hull_arc(arcs);
}


std::vector<ProjInterval> FurstenbergDirections::cylinder_table(int m, int extra_depth) const {
    const auto arcs = level(m + extra_depth);
    const std::size_t block = static_cast<std::size_t>(
        std::llround(std::pow(static_cast<double>(inverses_.size()), static_cast<double>(extra_depth))));
    std::vector<ProjInterval> out(arcs.size() / block);
    parallel::for_each_index(out.size(), [&](std::size_t k) {
        out[k] = hull_arc(std::span<const ProjInterval>(arcs).subspan(k * block, block));
    });
    return out;
}

std::vector<double> FurstenbergDirections::periodic_points(int max_period) const {
    std::vector<double> out;
    for (int n = 1; n <= max_period; ++n) {
        for (const auto& p : words_products(inverses_, static_cast<std::size_t>(n))) {
            // Attracting line of A_{w1}^{-1}⋯A_{wn}^{-1}: the eigenline of the
            // larger eigenvalue in modulus.
            const double tr = p.trace();
            const double disc = tr * tr - 4.0 * p.det();
            if (disc <= 0.0) {
                continue;
            }
            const double lam = 0.5 * (tr + std::copysign(std::sqrt(disc), tr));
            const Vec2 v1{p.b, lam - p.a};
            const Vec2 v2{lam - p.d, p.c};
            const Vec2 v = v1.norm() >= v2.norm() ? v1 : v2;
            if (v.norm() > 0.0) {
                out.push_back(ProjPoint::from_vector(v).theta);
            }
        }
    }
    std::sort(out.begin(), out.end());
    std::vector<double> unique;
    for (double t : out) {
        if (unique.empty() || t - unique.back() > 1e-12) {
            unique.push_back(t);
        }
    }
    if (unique.size() > 1 && unique.front() + kPi - unique.back() <= 1e-12) {
        unique.pop_back();
    }
    return unique;
}

DirectionsApprox FurstenbergDirections::approx(int n) const {
    DirectionsApprox out;
    out.depth = n;
    const auto arcs = level(n);
    std::vector<ProjInterval> mids;
    mids.reserve(arcs.size());
    for (const auto& a : arcs) {
        out.width_bound = std::max(out.width_bound, a.width);
        mids.push_back({a.mid(), 0.0});
    }
    auto merged = merge_arcs(raw_level(n), 0.0);
    out.intervals = merged ? *merged : std::vector<ProjInterval>{{0.0, kPi}};
    out.midpoint_spread = hull_arc(mids).width;
    // Dominated: X_F is the closure of the periodic points, and these agree
    // iff the attracting lines of the A_i^{-1} coincide.
    const auto periodic = periodic_points(2);
    std::vector<ProjInterval> points;
    for (double t : periodic) {
        points.push_back({t, 0.0});
    }
    out.singleton = hull_arc(points).width <= 1e-9;
    return out;
}

DirectionsApprox furstenberg_directions(std::span<const Matrix2> mats, int depth) {
    auto cone = try_invariant_multicone(mats);
    if (!cone) {
        throw NotDominated();
    }
    return FurstenbergDirections(mats, *cone).approx(depth);
}

FurstenbergSample furstenberg_measure_sample(std::span<const Matrix2> mats, std::span<const double> probs,
                                             std::size_t n_samples, int burn_in, std::uint64_t seed,
                                             std::optional<double> start, int bins, bool check_uniqueness) {
    if (probs.size() != mats.size() || mats.empty()) {
        throw InvalidInput("probability vector does not match the matrices");
    }
    double total = 0.0;
    for (double p : probs) {
        if (!(p > 0.0)) {
            throw PreconditionFailed("probabilities must be positive");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw PreconditionFailed("probabilities must sum to one");
    }
    if (check_uniqueness) {
        try {
            if (classify_irreducibility(mats).tag != Irreducibility::StronglyIrreducible) {
                throw PreconditionFailed("Furstenberg measure needs a strongly irreducible system");
            }
        } catch (const Inconclusive&) {
            throw PreconditionFailed("Furstenberg measure needs a strictly affine system");
        }
    }
    double theta0 = 0.0;
    if (start) {
        theta0 = *start;
    } else if (auto cone = try_invariant_multicone(mats)) {
        auto comp = cone->complement();
        const auto widest = std::max_element(comp.begin(), comp.end(), [](const ProjInterval& a, const ProjInterval& b) {
            return a.width < b.width;
        });
        theta0 = widest->mid();
    }
    std::vector<Matrix2> inv;
    for (const auto& m : mats) {
        inv.push_back(m.inverse());
    }
    std::vector<double> cumulative(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cumulative[i] = acc;
    }
    check_budget(static_cast<double>(n_samples));
    FurstenbergSample out;
    out.angles.resize(n_samples);
    parallel::for_each_index(n_samples, [&](std::size_t k) {
        parallel::CounterRng rng(seed, k);
        Vec2 v = ProjPoint{theta0}.unit();
        for (int step = 0; step < burn_in; ++step) {
            v = inv[rng.pick(cumulative)] * v;
            v = v * (1.0 / v.norm());
        }
        out.angles[k] = ProjPoint::from_vector(v).theta;
    });
    const auto bin_of = [bins](double th) {
        return std::min(bins - 1, static_cast<int>(th / kPi * bins));
    };
    out.histogram.assign(static_cast<std::size_t>(bins), 0.0);
    std::vector<double> pushed(static_cast<std::size_t>(bins), 0.0);
    const double w = 1.0 / static_cast<double>(n_samples);
    for (double th : out.angles) {
        out.histogram[static_cast<std::size_t>(bin_of(th))] += w;
        for (std::size_t i = 0; i < inv.size(); ++i) {
            pushed[static_cast<std::size_t>(bin_of(act(inv[i], ProjPoint{th}).theta))] += w * probs[i];
        }
    }
    for (int b = 0; b < bins; ++b) {
        out.tv_residual += 0.5 * std::abs(out.histogram[static_cast<std::size_t>(b)] - pushed[static_cast<std::size_t>(b)]);
    }
    return out;
}

} // namespace affdim
