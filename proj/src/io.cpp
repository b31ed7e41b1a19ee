#include "affdim/io.hpp"

#include "affdim/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace affdim {

namespace {

double number(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw InvalidInput(std::string("missing or non-numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

Json arcs_json(const std::vector<ProjInterval>& arcs) {
    Json out = Json::array();
    for (const auto& a : arcs) {
        out.push_back({a.start, a.width});
    }
    return out;
}

} // namespace

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
    }
}

Ifs ifs_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("maps") || !j.at("maps").is_array() || j.at("maps").empty()) {
        throw InvalidInput("IFS JSON needs a non-empty \"maps\" array");
    }
    std::vector<AffineMap> maps;
    for (const auto& m : j.at("maps")) {
        if (!m.is_object()) {
            throw InvalidInput("each map must be an object");
        }
        try {
            maps.push_back({Matrix2::checked(number(m, "a"), number(m, "b"), number(m, "c"), number(m, "d")),
                            {number(m, "tx"), number(m, "ty")}});
        } catch (const SingularMatrix&) {
            throw InvalidInput("map " + std::to_string(maps.size() + 1) + " has a singular linear part");
        }
    }
    std::optional<Ball> ball;
    if (j.contains("ball")) {
        const auto& b = j.at("ball");
        ball = Ball{{number(b, "cx"), number(b, "cy")}, number(b, "r")};
    }
    return Ifs(std::move(maps), ball);
}

Json to_json(const Ifs& ifs) {
    Json maps = Json::array();
    for (const auto& m : ifs.maps()) {
        maps.push_back({{"a", m.linear.a},
                        {"b", m.linear.b},
                        {"c", m.linear.c},
                        {"d", m.linear.d},
                        {"tx", m.translation.x},
                        {"ty", m.translation.y}});
    }
    return {{"maps", maps},
            {"ball", {{"cx", ifs.ball().center.x}, {"cy", ifs.ball().center.y}, {"r", ifs.ball().radius}}}};
}

bool is_carpet_json(const Json& j) { return j.is_object() && j.contains("digits"); }

CarpetSpec carpet_from_json(const Json& j) {
    if (!is_carpet_json(j) || !j.at("digits").is_array()) {
        throw InvalidInput("carpet JSON needs \"p\", \"q\" and a \"digits\" array");
    }
    CarpetSpec spec;
    if (!j.contains("p") || !j.at("p").is_number_integer() || !j.contains("q") || !j.at("q").is_number_integer()) {
        throw InvalidInput("carpet JSON needs integer \"p\" and \"q\"");
    }
    spec.p = j.at("p").get<int>();
    spec.q = j.at("q").get<int>();
    for (const auto& d : j.at("digits")) {
        if (!d.is_array() || d.size() != 2 || !d[0].is_number_integer() || !d[1].is_number_integer()) {
            throw InvalidInput("carpet digits must be [column, row] integer pairs");
        }
        spec.digits.emplace_back(d[0].get<int>(), d[1].get<int>());
    }
    spec.validate();
    return spec;
}

Json to_json(const CarpetSpec& spec) {
    Json digits = Json::array();
    for (const auto& [j, k] : spec.digits) {
        digits.push_back({j, k});
    }
    return {{"p", spec.p}, {"q", spec.q}, {"digits", digits}};
}

Json to_json(const AffinityDimension& a) {
    return {{"value", a.value}, {"extrapolated", a.extrapolated}, {"lo", a.lo}, {"hi", a.hi}, {"depth", a.depth}};
}

Json to_json(const CoverReport& c) {
    Json counts = Json::array();
    for (std::size_t k = 0; k < c.scales.size(); ++k) {
        counts.push_back({c.scales[k], c.counts[k]});
    }
    return {{"dimension", c.dimension},
            {"residual", c.residual},
            {"scale_lo", c.scale_lo},
            {"scale_hi", c.scale_hi},
            {"counts", counts}};
}

Json to_json(const TwoScaleReport& r) {
    return {{"estimate", r.estimate},
            {"center", {r.center.x, r.center.y}},
            {"R", r.pair.big},
            {"r", r.pair.small},
            {"samples", r.exponents.size()}};
}

Json to_json(const SscReport& r) {
    return {{"status", to_string(r.separated)},
            {"certificate", r.separated == Separation::Certified},
            {"delta_lower", r.delta_lower},
            {"delta_upper", r.delta_upper},
            {"depth", r.depth}};
}

Json to_json(const PoscReport& r, std::size_t alphabet) {
    return {{"certificate", false},
            {"appears_to_hold", r.appears_to_hold},
            {"eta_hat", r.eta_hat},
            {"slope", r.slope},
            {"per_depth", r.per_depth},
            {"witness", {{"theta", r.witness_theta},
                         {"i", word_key(r.witness_i, alphabet)},
                         {"j", word_key(r.witness_j, alphabet)}}}};
}

Json to_json(const DirectionsApprox& d) {
    return {{"depth", d.depth},
            {"intervals", arcs_json(d.intervals)},
            {"width_bound", d.width_bound},
            {"midpoint_spread", d.midpoint_spread},
            {"singleton", d.singleton}};
}

Json to_json(const Multicone& c) { return arcs_json(c.intervals); }

Json to_json(const DominationReport& r) {
    Json out = {{"certificate", r.certified},
                {"cone", r.cone ? to_json(*r.cone) : Json(nullptr)},
                {"diagnostic", {{"fitted_tau", r.fitted_tau}, {"fitted_c", r.fitted_c}, {"envelope", r.envelope}}}};
    return out;
}

Json to_json(const IrreducibilityClass& c, std::size_t alphabet) {
    Json witness = Json::array();
    for (const auto& p : c.witness) {
        witness.push_back(p.theta);
    }
    return {{"class", to_string(c.tag)},
            {"witness", witness},
            {"proximal", c.proximal ? Json(word_key(*c.proximal, alphabet)) : Json(nullptr)}};
}

Json to_json(const BochiMorrisReport& r) {
    return {{"d", r.d}, {"per_depth", r.per_depth}, {"left_violations", r.left_violations}, {"samples", r.samples}};
}

Json to_json(const TangentScan& t) {
    return {{"max_dim", t.max_dim}, {"min_dim", t.min_dim}, {"dims", t.dims}, {"discarded", t.discarded}};
}

Json to_json(const ContentConsistency& c, std::size_t alphabet) {
    Json cyl = Json::object();
    for (std::size_t k = 0; k < c.cylinders.size(); ++k) {
        cyl[word_key(c.cylinders[k], alphabet)] = {{"content", c.contents[k]}, {"h", c.h[k]}, {"ratio", c.ratios[k]}};
    }
    return {{"cv", c.cv}, {"s", c.s}, {"cylinders", cyl}};
}

Json to_json(const EqState& eq) {
    Json h = Json::object();
    Json nu = Json::object();
    for (std::size_t w = 0; w < eq.h.size(); ++w) {
        const std::string key = word_key(word_from_index(w, eq.alphabet, static_cast<std::size_t>(eq.m)), eq.alphabet);
        h[key] = eq.h[w];
        nu[key] = eq.nu[w];
    }
    return {{"m", eq.m},
            {"s", eq.s},
            {"lambda", eq.lambda},
            {"lambda_bounds", {eq.lambda_lo, eq.lambda_hi}},
            {"iterations", eq.iterations},
            {"averaged", eq.averaged},
            {"h", h},
            {"nu", nu}};
}

Json to_json(const GibbsWeights& g, std::size_t alphabet) {
    Json w = Json::object();
    for (std::size_t v = 0; v < g.weights.size(); ++v) {
        w[word_key(word_from_index(v, alphabet, static_cast<std::size_t>(g.depth)), alphabet)] = g.weights[v];
    }
    return {{"depth", g.depth}, {"spread", g.spread}, {"weights", w}};
}

void write_csv(const PointCloud& cloud, std::ostream& out) {
    out << "x,y\n" << std::setprecision(17);
    for (const auto& p : cloud.points) {
        out << p.x << ',' << p.y << '\n';
    }
}

void write_binary(const PointCloud& cloud, std::ostream& out) {
    static_assert(std::endian::native == std::endian::little, "binary output assumes little-endian doubles");
    for (const auto& p : cloud.points) {
        out.write(reinterpret_cast<const char*>(&p.x), sizeof(double));
        out.write(reinterpret_cast<const char*>(&p.y), sizeof(double));
    }
}

} // namespace affdim
