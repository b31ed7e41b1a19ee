#include "affdim/suites.hpp"

#include "affdim/error.hpp"
#include "affdim/geometry.hpp"
#include "affdim/parallel.hpp"
#include "affdim/projective.hpp"
#include "affdim/sampling.hpp"
#include "affdim/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace affdim {

namespace {

Check skipped(std::string name, std::string why) {
    Check c;
    c.name = std::move(name);
    c.status = Status::Skipped;
    c.note = std::move(why);
    return c;
}

Status verdict(bool ok) { return ok ? Status::Pass : Status::Fail; }

SuiteResult finish(std::string suite, std::vector<Check> checks) {
    SuiteResult r;
    r.suite = std::move(suite);
    r.checks = std::move(checks);
    bool any_pass = false;
    bool any_fail = false;
    for (const auto& c : r.checks) {
        any_pass |= c.status == Status::Pass;
        any_fail |= c.status == Status::Fail;
    }
    r.status = any_fail ? Status::Fail : (any_pass ? Status::Pass : Status::Skipped);
    return r;
}

bool all_similarities(std::span<const Matrix2> mats) {
    return std::all_of(mats.begin(), mats.end(), [](const Matrix2& m) {
        const auto sv = singular_values(m);
        return sv.major - sv.minor <= 1e-12 * sv.major;
    });
}

} // namespace

const char* to_string(Status s) {
    switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
    }
    return "?";
}

Json to_json(const SuiteResult& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json j = {{"name", c.name}, {"status", to_string(c.status)}, {"measured", c.measured}};
        if (!c.note.empty()) {
            j["note"] = c.note;
        }
        checks.push_back(std::move(j));
    }
    return {{"suite", r.suite}, {"status", to_string(r.status)}, {"checks", checks}};
}

double depth_resolution(const Ifs& ifs, const AttractorExtent& ext, int depth) {
    double norm = 0.0;
    for (const auto& m : ifs.maps()) {
        norm = std::max(norm, operator_norm(m.linear));
    }
    return std::pow(norm, depth) * ext.diam_hi();
}

std::vector<Vec2> cylinder_centers(const Ifs& ifs, int depth) {
    const CylinderTable table(ifs, static_cast<std::size_t>(depth));
    std::vector<Vec2> out;
    out.reserve(table.size());
    for (const auto& m : table.maps()) {
        out.push_back(on_set_point(ifs, m));
    }
    return out;
}

SliceScan slice_scan(const PointCloud& cloud, double diam, std::span<const double> thetas,
                     std::span<const Vec2> centers) {
    const std::size_t n = thetas.size() * centers.size();
    std::vector<double> dims(n, -1.0);
    parallel::for_each_index(n, [&](std::size_t k) {
        const double theta = thetas[k / centers.size()];
        const Vec2 c = centers[k % centers.size()];
        const PointCloud line = slice_points(cloud, theta, c, 2.0 * cloud.resolution);
        try {
            dims[k] = box_dim(line, 2.0 * line.resolution, 0.5 * diam).dimension;
        } catch (const Error&) {
            // too few points on this line
        }
    });
    SliceScan out;
    for (std::size_t k = 0; k < n; ++k) {
        if (dims[k] < 0.0) {
            continue;
        }
        ++out.slices;
        if (dims[k] > out.max_dim) {
            out.max_dim = dims[k];
            out.max_theta = thetas[k / centers.size()];
            out.max_center = centers[k % centers.size()];
        }
    }
    return out;
}

std::size_t sigma_sup(const Ifs& ifs, const AttractorExtent& ext, std::span<const double> thetas,
                      const PointCloud& cloud, int depth, std::size_t stride) {
    const std::size_t n = (cloud.points.size() + stride - 1) / stride;
    std::vector<std::size_t> best(n, 0);
    parallel::for_each_index(n, [&](std::size_t k) {
        const Vec2 x = cloud.points[k * stride];
        for (double theta : thetas) {
            for (int j = 1; j <= depth; ++j) {
                const double r = ext.diam_hi() * std::ldexp(1.0, -j);
                best[k] = std::max(best[k], sigma_count(ifs, ext, theta, x, r).count);
            }
        }
    });
    return best.empty() ? 0 : *std::max_element(best.begin(), best.end());
}

PfConsistency pf_consistency(std::span<const Matrix2> mats, std::uint64_t seed, int m) {
    PfConsistency out;
    out.s = affinity_dimension(mats).extrapolated;
    const auto dirs = state_directions(mats);
    const EqState eq = equilibrium_state(mats, dirs, out.s, m);
    out.lambda = eq.lambda;
    const double mass = parallel::pairwise_sum(eq.nu);
    for (std::uint64_t t = 0; t < 3; ++t) {
        parallel::CounterRng rng(seed, t);
        std::vector<double> f(eq.h.size());
        for (auto& v : f) {
            v = rng.uniform();
        }
        const auto lf = apply_transfer(eq, f);
        std::vector<double> a(f.size());
        std::vector<double> b(f.size());
        for (std::size_t w = 0; w < f.size(); ++w) {
            a[w] = lf[w] * eq.nu[w] / mass;
            b[w] = f[w] * eq.nu[w] / mass;
        }
        const double err = std::abs(parallel::pairwise_sum(a) - eq.lambda * parallel::pairwise_sum(b));
        out.adjoint_error = std::max(out.adjoint_error, err);
    }
    return out;
}

std::vector<TransCase> transversality_cases(std::uint64_t seed, int count) {
    constexpr int alphabet = 3;
    constexpr int depth = 60;
    constexpr double step = 1e-5;
    std::vector<TransCase> out;
    for (int c = 0; c < count; ++c) {
        parallel::CounterRng rng(seed, static_cast<std::uint64_t>(c));
        std::vector<Matrix2> mats;
        std::vector<Vec2> tr;
        for (int k = 0; k < alphabet; ++k) {
            const double minor = 0.05 + 0.2 * rng.uniform();
            const double a1 = 2.0 * std::numbers::pi * rng.uniform();
            const double a2 = 2.0 * std::numbers::pi * rng.uniform();
            mats.push_back(Matrix2::rotation(a1) * Matrix2::diagonal(0.25, minor) * Matrix2::rotation(a2));
            const double x = 2.0 * rng.uniform() - 1.0;
            const double y = 2.0 * rng.uniform() - 1.0;
            tr.push_back({x, y});
        }
        auto word = [&](int first) {
            std::vector<int> letters{first};
            const std::size_t len = 1 + rng.below(4);
            while (letters.size() < len) {
                letters.push_back(static_cast<int>(rng.below(alphabet)));
            }
            return Word(std::move(letters));
        };
        const int i1 = static_cast<int>(rng.below(alphabet));
        const int j1 = (i1 + 1 + static_cast<int>(rng.below(alphabet - 1))) % alphabet;
        const Word i = word(i1);
        const Word j = word(j1);
        const double angle = std::numbers::pi * rng.uniform();
        const Vec2 w{std::cos(angle), std::sin(angle)};
        const Vec2 u{-w.y, w.x};
        const auto value = transversality_derivative(mats, tr, w, i, j, depth);
        auto gap = [&](double t) {
            auto moved = tr;
            moved[static_cast<std::size_t>(i1)] = moved[static_cast<std::size_t>(i1)] + u * t;
            return std::abs(projected_coding(mats, moved, u, i, depth) - projected_coding(mats, moved, u, j, depth));
        };
        out.push_back({value.derivative, (gap(step) - gap(-step)) / (2.0 * step), value.magnitude, value.tail});
    }
    return out;
}

SuiteResult verify_diml(const Ifs& ifs, const SuiteOptions& opt) {
    const auto mats = ifs.matrices();
    const SscReport ssc = ssc_check(ifs);
    if (ssc.separated != Separation::Certified) {
        return finish("diml", {skipped("lower_dimension", "strong separation not certified")});
    }
    try {
        if (classify_irreducibility(mats).tag != Irreducibility::StronglyIrreducible) {
            return finish("diml", {skipped("lower_dimension", "not strongly irreducible")});
        }
    } catch (const Inconclusive&) {
        return finish("diml", {skipped("lower_dimension", "strict affinity not found")});
    }
    const AffinityDimension ad = affinity_dimension(mats);
    const AttractorExtent ext(ifs);
    const double res = depth_resolution(ifs, ext, opt.depth);
    const PointCloud cloud = attractor_sample(ifs, ext, res);
    const auto centers = cylinder_centers(ifs, 3);
    const auto pairs = widest_pairs(0.25 * ext.diam_hi(), res);
    const TwoScaleReport lo = lower_two_scale(cloud, pairs, centers);
    const double target = std::min(1.0, ad.value);

    Check c;
    c.name = "lower_dimension";
    c.measured = {{"estimate", lo.estimate},
                  {"target", target},
                  {"affinity_dimension", ad.value},
                  {"tolerance", 0.15},
                  {"points", cloud.points.size()},
                  {"R_over_r", pairs.front().big / pairs.front().small}};
    c.status = verdict(std::abs(lo.estimate - target) <= 0.15);
    return finish("diml", {c});
}

SuiteResult verify_dima(const Ifs& ifs, const SuiteOptions& opt) {
    const auto mats = ifs.matrices();
    std::optional<FurstenbergDirections> dirs;
    try {
        dirs.emplace(state_directions(mats));
    } catch (const NotDominated&) {
        return finish("dima", {skipped("assouad_dimension", "not dominated")});
    }
    const AttractorExtent ext(ifs);
    const double res = depth_resolution(ifs, ext, opt.depth);
    const PointCloud cloud = attractor_sample(ifs, ext, res);
    const auto centers = cylinder_centers(ifs, 3);
    const auto pairs = widest_pairs(0.25 * ext.diam_hi(), res);
    const TwoScaleReport hi = assouad_two_scale(cloud, pairs, centers);
    const auto thetas = dirs->periodic_points(3);
    const SliceScan slices = slice_scan(cloud, ext.diam_hi(), thetas, centers);
    const double predicted = 1.0 + slices.max_dim;

    Check c;
    c.name = "assouad_dimension";
    c.measured = {{"estimate", hi.estimate},
                  {"one_plus_max_slice", predicted},
                  {"max_slice", slices.max_dim},
                  {"slice_theta", slices.max_theta},
                  {"slices", slices.slices},
                  {"directions", thetas.size()},
                  {"difference", std::abs(hi.estimate - predicted)},
                  {"tolerance", 0.2},
                  {"points", cloud.points.size()}};
    c.status = verdict(std::abs(hi.estimate - predicted) <= 0.2);
    return finish("dima", {c});
}

SuiteResult verify_ahl(const Ifs& ifs, const SuiteOptions& opt) {
    (void)opt;
    const auto mats = ifs.matrices();
    std::optional<FurstenbergDirections> dirs;
    try {
        dirs.emplace(state_directions(mats));
    } catch (const NotDominated&) {
        return finish("ahl", {skipped("bochi_morris", "not dominated")});
    }
    std::vector<Check> checks;

    const BochiMorrisReport bm = bochi_morris_scan(mats, 10);
    Check c1;
    c1.name = "bochi_morris";
    const double d5 = bm.per_depth[4];
    const double d10 = bm.per_depth[9];
    c1.measured = {{"d5", d5}, {"d10", d10}, {"left_violations", bm.left_violations}, {"samples", bm.samples}};
    c1.status = verdict(d10 <= 1.1 * d5 && bm.left_violations == 0);
    checks.push_back(c1);

    const AttractorExtent ext(ifs);
    const auto thetas = dirs->periodic_points(2);
    const PointCloud cloud = attractor_sample(ifs, ext, 0.01);
    Check c2;
    c2.name = "sigma_count_bounded";
    Json sups = Json::array();
    bool equal = true;
    std::size_t first = 0;
    for (int depth : {6, 8, 10}) {
        const std::size_t sup = sigma_sup(ifs, ext, thetas, cloud, depth);
        if (depth == 6) {
            first = sup;
        }
        equal &= sup == first;
        sups.push_back(sup);
    }
    c2.measured = {{"depths", {6, 8, 10}}, {"sup", sups}, {"directions", thetas.size()}};
    c2.status = verdict(equal);
    checks.push_back(c2);

    const PoscReport posc = posc_check(ifs);
    Check c3;
    c3.name = "posc_trend";
    c3.measured = {{"eta_hat", posc.eta_hat}, {"slope", posc.slope}};
    c3.status = verdict(posc.appears_to_hold);
    c3.note = "diagnostic, not a certificate";
    checks.push_back(c3);
    return finish("ahl", checks);
}

SuiteResult verify_gibbs(const Ifs& ifs, const SuiteOptions& opt) {
    const auto mats = ifs.matrices();
    std::optional<FurstenbergDirections> dirs;
    try {
        dirs.emplace(state_directions(mats));
    } catch (const NotDominated&) {
        return finish("gibbs", {skipped("spread_growth", "not dominated")});
    }
    const double s = affinity_dimension(mats).extrapolated;
    const EqState eq = equilibrium_state(mats, *dirs, s, 6);
    std::vector<Check> checks;

    Json spreads = Json::array();
    std::vector<double> sp;
    for (int n = 4; n <= 8; ++n) {
        sp.push_back(kaenmaki_weights(mats, *dirs, eq, n).spread);
        spreads.push_back(sp.back());
    }
    double growth = 0.0;
    for (std::size_t k = 1; k < sp.size(); ++k) {
        growth = std::max(growth, sp[k] / sp[k - 1] - 1.0);
    }
    Check c1;
    c1.name = "spread_growth";
    c1.measured = {{"s", s}, {"depths", {4, 5, 6, 7, 8}}, {"spread", spreads}, {"max_growth", growth}};
    c1.status = verdict(growth < 0.05);
    checks.push_back(c1);

    if (all_similarities(mats)) {
        Check c;
        c.name = "similarity_spread";
        c.measured = {{"spread", spreads}};
        c.status = verdict(std::all_of(sp.begin(), sp.end(), [](double v) { return v == 1.0; }));
        checks.push_back(c);
    }

    const PfConsistency pf = pf_consistency(mats, opt.seed);
    Check ce;
    ce.name = "eigenvalue";
    ce.measured = {{"s", pf.s}, {"lambda", pf.lambda}, {"tolerance", 1e-3}};
    ce.status = verdict(std::abs(pf.lambda - 1.0) <= 1e-3);
    checks.push_back(ce);

    Check c2;
    c2.name = "adjoint_relation";
    c2.measured = {{"max_error", pf.adjoint_error}, {"lambda", pf.lambda}, {"tolerance", 1e-8}};
    c2.status = verdict(pf.adjoint_error <= 1e-8);
    checks.push_back(c2);
    return finish("gibbs", checks);
}

SuiteResult verify_content(const Ifs& ifs, const SuiteOptions& opt) {
    const SscReport ssc = ssc_check(ifs);
    if (ssc.separated == Separation::Certified) {
        const ContentConsistency cc = content_consistency(ifs, 20, 8, opt.seed);
        Check c;
        c.name = "content_consistency";
        c.measured = {{"cv", cc.cv}, {"s", cc.s}, {"cylinders", cc.cylinders.size()}, {"tolerance", 0.2}};
        c.status = verdict(cc.cv <= 0.2);
        return finish("content", {c});
    }
    const auto mats = ifs.matrices();
    std::optional<FurstenbergDirections> dirs;
    try {
        dirs.emplace(state_directions(mats));
    } catch (const NotDominated&) {
        return finish("content", {skipped("content_drop", "not dominated")});
    }
    const AttractorExtent ext(ifs);
    const double s = std::min(1.0, affinity_dimension(mats).value);
    const int depths[] = {6, 10};
    double best = 0.0;
    double best_theta = 0.0;
    for (const auto& arc : dirs->level(3)) {
        const auto v = content_by_depth(ifs, ext, arc.mid(), s, depths);
        const double drop = 1.0 - v[1] / v[0];
        if (drop > best) {
            best = drop;
            best_theta = arc.mid();
        }
    }
    Check c;
    c.name = "content_drop";
    c.measured = {{"max_drop", best}, {"theta", best_theta}, {"s", s}, {"threshold", 0.3}};
    c.status = verdict(best >= 0.3);
    return finish("content", {c});
}

SuiteResult verify_trans(const SuiteOptions& opt) {
    const auto cases = transversality_cases(opt.seed, 10);
    double max_err = 0.0;
    double min_margin = 1e300;
    Json rows = Json::array();
    for (const auto& c : cases) {
        max_err = std::max(max_err, std::abs(c.derivative - c.finite_difference));
        min_margin = std::min(min_margin, c.magnitude - (2.0 / 3.0 - c.tail));
        rows.push_back({{"derivative", c.derivative}, {"finite_difference", c.finite_difference}, {"magnitude", c.magnitude}});
    }
    Check c1;
    c1.name = "finite_difference";
    c1.measured = {{"max_error", max_err}, {"tolerance", 1e-6}, {"cases", rows}};
    c1.status = verdict(max_err <= 1e-6);
    Check c2;
    c2.name = "lower_bound";
    c2.measured = {{"min_margin", min_margin}};
    c2.status = verdict(min_margin >= 0.0);
    return finish("trans", {c1, c2});
}

std::vector<std::string> suite_names() { return {"diml", "dima", "ahl", "gibbs", "content", "trans"}; }

std::string default_fixture(const std::string& suite) {
    if (suite == "diml") return "irreducible4";
    if (suite == "dima") return "example_eps";
    if (suite == "ahl") return "cone";
    if (suite == "gibbs") return "positive_pair";
    if (suite == "content") return "cone";
    if (suite == "trans") return "";
    throw InvalidInput("unknown suite '" + suite + "'");
}

} // namespace affdim
