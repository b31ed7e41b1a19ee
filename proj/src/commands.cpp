#include "affdim/commands.hpp"

#include "affdim/checksum.hpp"
#include "affdim/error.hpp"
#include "affdim/estimators.hpp"
#include "affdim/extent.hpp"
#include "affdim/geometry.hpp"
#include "affdim/parallel.hpp"
#include "affdim/projective.hpp"
#include "affdim/sampling.hpp"
#include "affdim/suites.hpp"
#include "affdim/svg.hpp"
#include "affdim/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>

namespace affdim {

namespace {

// Applies threads and budget for one command, restoring the word cap after.
class Session {
public:
    explicit Session(const RunConfig& cfg) : saved_cap_(word_cap()) {
        parallel::set_threads(std::max(1u, cfg.threads));
        if (cfg.budget) {
            if (*cfg.budget == 0 || *cfg.budget > saved_cap_) {
                throw InvalidInput("--budget must be in [1, word cap = " + std::to_string(saved_cap_) + "]");
            }
            set_word_cap(*cfg.budget);
        }
    }
    ~Session() { set_word_cap(saved_cap_); }
    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

private:
    std::size_t saved_cap_;
};

std::uint64_t require_seed(const RunConfig& cfg, const char* command) {
    if (!cfg.seed) {
        throw InvalidInput(std::string(command) + " is stochastic and needs --seed");
    }
    return *cfg.seed;
}

Json carpet_forms(const CarpetSpec& spec) {
    return {{"spec", to_json(spec)},
            {"uniform_fibers", uniform_fibers(spec)},
            {"mackay_assouad", mackay_assouad(spec)},
            {"mcmullen_hausdorff", mcmullen_hausdorff(spec)},
            {"fraser_lower", fraser_lower(spec)},
            {"affinity_formula", carpet_affinity_formula(spec)}};
}

bool same_spec(CarpetSpec a, CarpetSpec b) {
    std::sort(a.digits.begin(), a.digits.end());
    std::sort(b.digits.begin(), b.digits.end());
    return a.p == b.p && a.q == b.q && a.digits == b.digits;
}

} // namespace

System load_system(const std::string& path) {
    if (path.empty()) {
        throw InvalidInput("no --input given");
    }
    const Json j = load_json(path);
    if (is_carpet_json(j)) {
        CarpetSpec spec = carpet_from_json(j);
        return {to_ifs(spec), spec};
    }
    return {ifs_from_json(j), std::nullopt};
}

CommandResult cmd_check(const RunConfig& cfg) {
    Session session(cfg);
    const System sys = load_system(cfg.input);
    const Ifs& ifs = sys.ifs;
    const auto mats = ifs.matrices();
    const int depth = cfg.depth.value_or(8);
    CommandResult res;
    Json failures = Json::array();
    Json& r = res.report;
    r["command"] = "check";
    r["maps"] = ifs.size();

    const DominationReport dom = is_dominated(mats, depth);
    r["domination"] = to_json(dom);
    r["domination"]["status"] = dom.certified ? "Dominated" : "NotDominated";

    try {
        r["irreducibility"] = to_json(classify_irreducibility(mats), ifs.size());
    } catch (const Inconclusive& e) {
        r["irreducibility"] = {{"class", "Inconclusive"}, {"note", e.what()}};
    }

    const StrictlyAffine sa = strictly_affine(mats);
    r["strictly_affine"] = {{"certificate", sa.found},
                            {"witness", sa.found ? Json(word_key(sa.witness, ifs.size())) : Json(nullptr)}};

    const SscReport ssc = ssc_check(ifs);
    r["ssc"] = to_json(ssc);
    if (ssc.separated == Separation::Overlap) {
        failures.push_back("ssc_overlap");
    }

    r["posc"] = nullptr;
    r["directions"] = nullptr;
    if (dom.certified) {
        try {
            PoscOptions opt;
            opt.directions_depth = affordable_depth(ifs.size(), opt.directions_depth, 2e5);
            r["posc"] = to_json(posc_check(ifs, opt), ifs.size());
        } catch (const HypothesisViolated& e) {
            failures.push_back(std::string("posc: ") + e.what());
        } catch (const PreconditionFailed& e) {
            r["posc"] = {{"certificate", false}, {"not_applicable", e.what()}};
        }
        const int dd = affordable_depth(ifs.size(), depth, 2e5);
        r["directions"] = to_json(furstenberg_directions(mats, dd));
    }

    r["verdict"] = {{"status", failures.empty() ? "ok" : "condition_failure"}, {"failures", failures}};
    res.exit_code = failures.empty() ? kOk : kConditionFailure;
    return res;
}

CommandResult cmd_dims(const RunConfig& cfg) {
    Session session(cfg);
    const std::uint64_t seed = require_seed(cfg, "dims");
    const System sys = load_system(cfg.input);
    const Ifs& ifs = sys.ifs;
    const auto mats = ifs.matrices();
    const int depth = cfg.depth.value_or(6);
    CommandResult res;
    Json& r = res.report;
    Json warnings = Json::array();
    bool partial = false;
    r["command"] = "dims";
    r["seed"] = seed;
    r["depth"] = depth;

    // Each quantity is computed independently; budget failures leave a null.
    auto section = [&](const char* key, const std::function<Json()>& fn) {
        try {
            r[key] = fn();
        } catch (const BudgetExceeded& e) {
            r[key] = nullptr;
            partial = true;
            warnings.push_back(std::string(key) + ": " + e.what());
        } catch (const NotConverged& e) {
            r[key] = nullptr;
            partial = true;
            warnings.push_back(std::string(key) + ": " + e.what());
        } catch (const Error& e) {
            r[key] = nullptr;
            warnings.push_back(std::string(key) + ": " + e.what());
        }
    };

    section("affinity_dimension", [&] { return to_json(affinity_dimension(mats, cfg.tol)); });

    const AttractorExtent ext(ifs);
    const double resolution = depth_resolution(ifs, ext, depth);
    r["resolution"] = resolution;
    std::optional<PointCloud> cloud;
    section("points", [&] {
        cloud = attractor_sample(ifs, ext, resolution);
        return Json(cloud->points.size());
    });
    if (cloud) {
        section("box", [&] { return to_json(box_dim(*cloud, 2.0 * resolution, 0.5 * ext.diam_hi())); });
        const auto centers = cylinder_centers(ifs, std::min(3, std::max(1, depth - 3)));
        section("assouad", [&] {
            const auto pairs = widest_pairs(0.25 * ext.diam_hi(), resolution);
            return to_json(assouad_two_scale(*cloud, pairs, centers));
        });
        section("lower", [&] {
            const auto pairs = widest_pairs(0.25 * ext.diam_hi(), resolution);
            return to_json(lower_two_scale(*cloud, pairs, centers));
        });
    }
    section("slice_bound", [&] {
        const SscReport ssc = ssc_check(ifs, ext, 6);
        if (ssc.separated != Separation::Certified) {
            throw NotSeparated();
        }
        return Json(slice_upper_bound(ifs, ext, ssc));
    });
    section("tangents", [&] {
        const double d = ext.diam_hi();
        const double scales[] = {d / 4.0, d / 8.0, d / 16.0};
        return to_json(tangent_dimension_scan(ifs, ext, 16, scales, seed));
    });
    if (sys.carpet) {
        r["carpet"] = carpet_forms(*sys.carpet);
    }
    r["partial"] = partial;
    r["warnings"] = warnings;
    res.exit_code = partial ? kBudgetFailure : kOk;
    return res;
}

CommandResult cmd_verify(const RunConfig& cfg) {
    Session session(cfg);
    const auto names = suite_names();
    if (std::find(names.begin(), names.end(), cfg.suite) == names.end()) {
        throw InvalidInput("unknown suite '" + cfg.suite + "'");
    }
    SuiteOptions opt;
    opt.seed = require_seed(cfg, "verify");
    opt.depth = cfg.depth.value_or(8);

    CommandResult res;
    Json& r = res.report;
    r["command"] = "verify";
    r["suite"] = cfg.suite;
    r["seed"] = opt.seed;

    SuiteResult result;
    if (cfg.suite == "trans") {
        r["input"] = nullptr;
        result = verify_trans(opt);
    } else {
        std::string path = cfg.input;
        if (path.empty()) {
            const std::string name = cfg.fixture.empty() ? default_fixture(cfg.suite) : cfg.fixture;
            path = (std::filesystem::path(cfg.fixtures_dir) / (name + ".json")).string();
        }
        const ChecksumState sum = check_manifest(path);
        if (sum == ChecksumState::Mismatch) {
            throw InvalidInput("checksum mismatch for '" + path + "'");
        }
        r["input"] = std::filesystem::path(path).filename().string();
        r["checksum"] = sum == ChecksumState::Ok ? "ok" : "unlisted";
        const Ifs ifs = load_system(path).ifs;
        if (cfg.suite == "diml") result = verify_diml(ifs, opt);
        if (cfg.suite == "dima") result = verify_dima(ifs, opt);
        if (cfg.suite == "ahl") result = verify_ahl(ifs, opt);
        if (cfg.suite == "gibbs") result = verify_gibbs(ifs, opt);
        if (cfg.suite == "content") result = verify_content(ifs, opt);
    }
    r["result"] = to_json(result);
    res.exit_code = result.status == Status::Fail ? kConditionFailure : kOk;
    return res;
}

CommandResult cmd_render(const RunConfig& cfg) {
    Session session(cfg);
    const System sys = load_system(cfg.input);
    const Ifs& ifs = sys.ifs;
    const int depth = cfg.depth.value_or(8);
    const AttractorExtent ext(ifs);
    const PointCloud cloud = attractor_sample(ifs, ext, depth_resolution(ifs, ext, depth));

    CommandResult res;
    Json& r = res.report;
    r["command"] = "render";
    r["points"] = cloud.points.size();
    std::optional<DirectionOverlay> overlay;
    if (cfg.directions) {
        try {
            const auto mats = ifs.matrices();
            const auto dirs = state_directions(mats);
            const int dd = affordable_depth(ifs.size(), 6, 2e5);
            overlay = DirectionOverlay{dirs.approx(dd).intervals, dirs.cone().intervals};
            r["directions"] = overlay->directions.size();
            r["cone_arcs"] = overlay->cone.size();
        } catch (const NotDominated&) {
            r["directions"] = nullptr;
            r["warning"] = "not dominated; no direction overlay";
        }
    }
    res.svg = render_svg(cloud, overlay);
    res.cloud = cloud;
    return res;
}

int exit_code_for(const Error& e) {
    if (dynamic_cast<const InvalidInput*>(&e) != nullptr) {
        return kInputError;
    }
    if (dynamic_cast<const BudgetExceeded*>(&e) != nullptr || dynamic_cast<const NotConverged*>(&e) != nullptr) {
        return kBudgetFailure;
    }
    return kConditionFailure;
}

double eps_threshold(const CarpetSpec& spec) {
    const double mackay = mackay_assouad(spec);
    auto below = [&](double eps) { return s_eps(spec, default_extra_matrix(eps)) < mackay; };
    double lo = 0.0;
    double hi = 0.5;
    if (below(hi - 1e-9)) {
        return hi;
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (below(mid) ? lo : hi) = mid;
    }
    return lo;
}

CommandResult cmd_carpet(const RunConfig& cfg) {
    Session session(cfg);
    const System sys = load_system(cfg.input);
    if (!sys.carpet) {
        throw InvalidInput("carpet needs a {\"p\", \"q\", \"digits\"} input");
    }
    const CarpetSpec& spec = *sys.carpet;
    CommandResult res;
    Json& r = res.report;
    r["command"] = "carpet";
    r["forms"] = carpet_forms(spec);
    const AffinityDimension ad = affinity_dimension(sys.ifs.matrices(), cfg.tol);
    r["affinity_dimension"] = to_json(ad);
    r["formula_gap"] = std::abs(ad.value - carpet_affinity_formula(spec));
    if (cfg.eps) {
        const double eps = *cfg.eps;
        if (!(eps > 0.0 && eps < 0.5)) {
            throw InvalidInput("--eps must lie in (0, 0.5)");
        }
        const double s = s_eps(spec, default_extra_matrix(eps));
        const double fraser = fraser_lower(spec);
        const double mackay = mackay_assouad(spec);
        Json ex = {{"eps", eps},
                   {"s_eps", s},
                   {"chain", {{"fraser_lt_affinity", fraser < ad.value},
                              {"affinity_le_s_eps", ad.value <= s},
                              {"s_eps_lt_mackay", s < mackay}}},
                   {"eps_threshold", eps_threshold(spec)}};
        if (same_spec(spec, example_carpet())) {
            const ExampleFixture fx = example_fixture(eps);
            ex["placement"] = {fx.placement.x, fx.placement.y};
            ex["system"] = to_json(fx.ifs);
        }
        r["example"] = ex;
    }
    return res;
}

} // namespace affdim
