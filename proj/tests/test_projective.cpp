#include "affdim/error.hpp"
#include "affdim/fixtures.hpp"
#include "affdim/parallel.hpp"
#include "affdim/projective.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace affdim;

namespace {

constexpr double kPi = std::numbers::pi;

double angle_gap(double a, double b) {
    const double d = std::fmod(std::abs(a - b), kPi);
    return std::min(d, kPi - d);
}

std::vector<Matrix2> positive_pair() { return fixture("positive_pair").matrices(); }

bool covered(const std::vector<ProjInterval>& arcs, double theta, double tol) {
    return std::any_of(arcs.begin(), arcs.end(), [&](const ProjInterval& a) { return a.contains(theta, tol); });
}

} // namespace

TEST_CASE("projective action") {
    for (double t : {0.0, 0.4, 1.3, 3.0}) {
        CHECK(act(Matrix2::identity(), ProjPoint::from_angle(t)).theta == doctest::Approx(t));
    }
    CHECK(act(Matrix2::rotation(kPi / 2), ProjPoint{0.0}).theta == doctest::Approx(kPi / 2));
    CHECK(act(Matrix2::diagonal(2.0, 1.0), ProjPoint{kPi / 4}).theta == doctest::Approx(std::atan(0.5)));
    CHECK(reduce_angle(-0.1) == doctest::Approx(kPi - 0.1));
    CHECK(proj_distance(ProjPoint{0.1}, ProjPoint{0.1 + kPi / 2}) == doctest::Approx(1.0));
}

TEST_CASE("norm on a line") {
    CHECK(norm_on_line(Matrix2::identity(), ProjPoint{0.7}) == doctest::Approx(1.0));
    const Matrix2 d = Matrix2::diagonal(0.25, 0.2);
    CHECK(norm_on_line(d, ProjPoint{0.0}) == doctest::Approx(0.25));
    CHECK(norm_on_line(d, ProjPoint{kPi / 4}) == doctest::Approx(std::hypot(0.25, 0.2) / std::sqrt(2.0)));
    CHECK(norm_on_line(d, ProjPoint{kPi / 4}) == doctest::Approx(0.226385).epsilon(1e-6));
}

TEST_CASE("transpose identity and perpendicular duality") {
    for (std::uint64_t k = 0; k < 200; ++k) {
        parallel::CounterRng rng(21, k);
        const Matrix2 a{rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5};
        const ProjPoint v{kPi * rng.uniform()};
        const Vec2 u = v.perp().unit();
        // ‖Aᵀ|V^⊥‖ = ‖proj_{V^⊥} A‖ = |uᵀA|
        const double row = std::hypot(u.x * a.a + u.y * a.c, u.x * a.b + u.y * a.d);
        CHECK(norm_on_line(a.transpose(), v.perp()) == doctest::Approx(row).epsilon(1e-12));
        const double sv_lo = singular_values(a).minor;
        const double sv_hi = singular_values(a).major;
        const double n = norm_on_line(a, v);
        CHECK(n >= sv_lo * (1.0 - 1e-12));
        CHECK(n <= sv_hi * (1.0 + 1e-12));
        // AᵀV^⊥ = (A^{-1}V)^⊥
        const double lhs = act(a.transpose(), v.perp()).theta;
        const double rhs = act(a.inverse(), v).perp().theta;
        CHECK(angle_gap(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("arc merging") {
    auto m = merge_arcs({{0.1, 0.2}, {0.25, 0.2}, {1.0, 0.1}});
    REQUIRE(m);
    REQUIRE(m->size() == 2);
    CHECK((*m)[0].start == doctest::Approx(0.1));
    CHECK((*m)[0].width == doctest::Approx(0.35));
    auto wrap = merge_arcs({{kPi - 0.1, 0.2}, {0.05, 0.1}});
    REQUIRE(wrap);
    CHECK(wrap->size() == 1);
    CHECK(!merge_arcs({{0.0, 2.0}, {1.9, 1.5}}));
    const ProjInterval h = hull_arc(std::vector<ProjInterval>{{0.1, 0.1}, {1.0, 0.1}});
    CHECK(h.start == doctest::Approx(0.1));
    CHECK(h.width == doctest::Approx(1.0));
}

TEST_CASE("invariant multicone for positive matrices") {
    const auto mats = positive_pair();
    const Multicone cone = find_invariant_multicone(mats);
    CHECK(strictly_invariant(mats, cone, 1e-6));
    // inside the closed first quadrant
    for (const auto& arc : cone.intervals) {
        CHECK(arc.start >= -1e-12);
        CHECK(arc.end() <= kPi / 2 + 1e-12);
    }
    for (const auto& m : mats) {
        for (const auto& arc : cone.intervals) {
            CHECK(cone.contains(act(m, arc).mid()));
        }
    }
}

TEST_CASE("no multicone for a scaled irrational rotation") {
    const std::vector<Matrix2> mats{Matrix2::rotation(1.0) * 0.5, Matrix2::diagonal(0.5, 0.5)};
    CHECK_THROWS_AS(find_invariant_multicone(mats), NotFound);
    CHECK(!try_invariant_multicone(mats));
}

TEST_CASE("multicone of a single diagonal map hugs the dominant axis") {
    const std::vector<Matrix2> mats{Matrix2::diagonal(0.5, 0.125)};
    const Multicone cone = find_invariant_multicone(mats);
    REQUIRE(!cone.intervals.empty());
    CHECK(cone.contains(0.0));
    CHECK(!cone.contains(kPi / 2));
    // image of the cone is a strictly smaller arc around θ = 0
    for (const auto& arc : cone.intervals) {
        const ProjInterval img = act(mats[0], arc);
        CHECK(img.width < arc.width);
    }
}

TEST_CASE("domination verdicts and the (C, tau) diagnostic") {
    const auto pos = is_dominated(positive_pair(), 8);
    CHECK(pos.certified);
    CHECK(pos.fitted_tau < 1.0);

    const std::vector<Matrix2> rot{Matrix2::rotation(1.0) * 0.5, Matrix2::rotation(2.0) * 0.5};
    const auto r = is_dominated(rot, 8);
    CHECK(!r.certified);
    CHECK(r.fitted_tau == doctest::Approx(1.0).epsilon(1e-6));

    const auto carpet = is_dominated(fixture("carpet").matrices(), 8);
    CHECK(carpet.certified);
    CHECK(carpet.fitted_tau == doctest::Approx(0.8).epsilon(1e-9));
    // α2/α1 = (4/5)^n exactly
    for (std::size_t n = 0; n < carpet.envelope.size(); ++n) {
        CHECK(carpet.envelope[n] == doctest::Approx(std::pow(0.8, static_cast<double>(n + 1))).epsilon(1e-12));
    }
    CHECK_THROWS(is_dominated(positive_pair(), 2));
}

TEST_CASE("irreducibility classes") {
    const std::vector<Matrix2> diag{Matrix2::diagonal(0.5, 0.25), Matrix2::diagonal(0.3, 0.6)};
    const auto red = classify_irreducibility(diag);
    CHECK(red.tag == Irreducibility::Reducible);
    REQUIRE(!red.witness.empty());
    for (const auto& m : diag) {
        CHECK(angle_gap(act(m, red.witness[0]).theta, red.witness[0].theta) < 1e-8);
    }

    const std::vector<Matrix2> swap{Matrix2::diagonal(0.5, 0.25), Matrix2{0.0, 0.25, 0.5, 0.0}};
    const auto ins = classify_irreducibility(swap);
    CHECK(ins.tag == Irreducibility::IrreducibleNotStrongly);
    REQUIRE(ins.witness.size() == 2);
    std::vector<double> w{ins.witness[0].theta, ins.witness[1].theta};
    std::sort(w.begin(), w.end());
    CHECK(w[0] == doctest::Approx(0.0));
    CHECK(w[1] == doctest::Approx(kPi / 2));

    const auto strong = classify_irreducibility(positive_pair());
    CHECK(strong.tag == Irreducibility::StronglyIrreducible);
    CHECK(strong.proximal.has_value());
}

TEST_CASE("irreducibility class is basis independent") {
    const std::vector<std::vector<Matrix2>> systems{
        {Matrix2::diagonal(0.5, 0.25), Matrix2::diagonal(0.3, 0.6)},
        {Matrix2::diagonal(0.5, 0.25), Matrix2{0.0, 0.25, 0.5, 0.0}},
        positive_pair(),
        fixture("cone").matrices()};
    for (std::uint64_t k = 0; k < 5; ++k) {
        parallel::CounterRng rng(33, k);
        Matrix2 p{1.0 + rng.uniform(), rng.uniform() - 0.5, rng.uniform() - 0.5, 1.0 + rng.uniform()};
        const Matrix2 pinv = p.inverse();
        for (const auto& sys : systems) {
            std::vector<Matrix2> conj;
            for (const auto& m : sys) {
                conj.push_back(p * m * pinv);
            }
            CHECK(classify_irreducibility(conj).tag == classify_irreducibility(sys).tag);
        }
    }
}

TEST_CASE("strictly affine witnesses") {
    const std::vector<Matrix2> d{Matrix2::diagonal(0.25, 0.2)};
    const auto a = strictly_affine(d);
    CHECK(a.found);
    CHECK(a.witness.size() == 1);

    const std::vector<Matrix2> r{Matrix2::rotation(kPi / 2) * 0.5};
    CHECK(!strictly_affine(r, 8).found);

    const auto p = strictly_affine(positive_pair());
    CHECK(p.found);
    CHECK(p.witness.size() == 1);
    CHECK_THROWS_AS(classify_irreducibility(r), Inconclusive);
}

TEST_CASE("Furstenberg directions of the carpet shrink to the vertical") {
    const auto mats = fixture("carpet").matrices();
    double prev = kPi;
    for (int n : {2, 4, 6}) {
        const auto d = furstenberg_directions(mats, n);
        REQUIRE(d.intervals.size() == 1);
        CHECK(d.intervals[0].contains(kPi / 2, 1e-12));
        CHECK(d.intervals[0].width < prev);
        prev = d.intervals[0].width;
        CHECK(d.singleton);
    }
}

TEST_CASE("Furstenberg directions of one positive matrix") {
    const Matrix2 m = Matrix2{2.0, 1.0, 1.0, 1.0} * 0.25;
    const std::vector<Matrix2> mats{m};
    // eigenline of the smaller eigenvalue (3 - √5)/2 · 1/4: direction (1 - √5)/2, 1)... solved directly
    const double lam = (3.0 - std::sqrt(5.0)) / 8.0;
    const double theta = reduce_angle(std::atan2(lam - 0.5, 0.25)); // (A - λ)v = 0 → v = (0.25, λ - 0.5)
    const auto d = furstenberg_directions(mats, 8);
    REQUIRE(d.intervals.size() == 1);
    CHECK(d.intervals[0].contains(theta, 1e-12));
    CHECK(d.intervals[0].width < 1e-3);
}

TEST_CASE("Furstenberg directions of the positive pair are not a point") {
    const auto mats = positive_pair();
    const auto d2 = furstenberg_directions(mats, 2);
    CHECK(d2.intervals.size() >= 2);
    CHECK(!d2.singleton);
    // nesting
    const auto cone = try_invariant_multicone(mats);
    REQUIRE(cone);
    const FurstenbergDirections fd(mats, *cone);
    for (int n = 1; n < 8; ++n) {
        const auto outer = fd.approx(n).intervals;
        const auto inner = fd.approx(n + 1).intervals;
        for (const auto& arc : inner) {
            CHECK(covered(outer, arc.start, 1e-12));
            CHECK(covered(outer, arc.end(), 1e-12));
        }
    }
    // periodic points lie in every level
    const auto pts = fd.periodic_points(4);
    CHECK(pts.size() >= 2);
    const auto level = fd.approx(6).intervals;
    for (double t : pts) {
        CHECK(covered(level, t, 1e-12));
    }
    CHECK(std::is_sorted(pts.begin(), pts.end()));
}

TEST_CASE("cylinder arcs contract geometrically") {
    const auto mats = positive_pair();
    const FurstenbergDirections fd(mats, *try_invariant_multicone(mats));
    double w4 = 0.0;
    double w8 = 0.0;
    for (const auto& a : fd.level(4)) w4 = std::max(w4, a.width);
    for (const auto& a : fd.level(8)) w8 = std::max(w8, a.width);
    CHECK(w8 < 0.5 * w4);
}

TEST_CASE("singular value ratio diverges along a fixed word") {
    const auto mats = fixture("cone").matrices();
    const Word w{0, 2, 1, 1, 0, 2, 2, 1, 0, 0, 1, 2};
    auto ratio = [&](std::size_t n) {
        const auto sv = singular_values(compose_linear(mats, w.prefix(n)));
        return sv.major / sv.minor;
    };
    CHECK(ratio(12) > ratio(6));
}

TEST_CASE("Furstenberg measure sample") {
    const auto mats = positive_pair();
    const std::vector<double> probs{0.5, 0.5};
    const auto s = furstenberg_measure_sample(mats, probs, 100000, 40, 3);
    CHECK(s.tv_residual <= 0.05);
    const auto again = furstenberg_measure_sample(mats, probs, 1000, 40, 3);
    const auto same = furstenberg_measure_sample(mats, probs, 1000, 40, 3);
    CHECK(again.angles == same.angles);
    // support sits in the depth-8 direction approximation
    const auto d = furstenberg_directions(mats, 8);
    for (double t : again.angles) {
        CHECK(covered(d.intervals, t, 1e-9));
    }

    // two copies of one proximal matrix: mass at its repelling line
    const Matrix2 m = Matrix2{2.0, 1.0, 1.0, 1.0} * 0.25;
    const std::vector<Matrix2> twin{m, m};
    const auto t = furstenberg_measure_sample(twin, probs, 200, 60, 5, std::nullopt, 64, false);
    const auto lines = eigenlines(m);
    REQUIRE(lines.size() == 2);
    const double small = std::min(norm_on_line(m, lines[0]), norm_on_line(m, lines[1]));
    const ProjPoint repelling = norm_on_line(m, lines[0]) == small ? lines[0] : lines[1];
    for (double a : t.angles) {
        CHECK(angle_gap(a, repelling.theta) < 1e-9);
    }
    CHECK_THROWS_AS(furstenberg_measure_sample(twin, probs, 10, 10, 1), PreconditionFailed);
}
