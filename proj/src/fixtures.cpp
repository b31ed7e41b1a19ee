#include "affdim/fixtures.hpp"

#include "affdim/error.hpp"

#include <cmath>
#include <numbers>

namespace affdim {

namespace {

Ifs similarities(double ratio, const std::vector<Vec2>& offsets) {
    std::vector<AffineMap> maps;
    for (Vec2 t : offsets) {
        maps.push_back({Matrix2::diagonal(ratio, ratio), t});
    }
    return Ifs(std::move(maps));
}

std::vector<AffineMap> cone_maps() {
    return {
        {symmetric_matrix(70.0, 0.32, 0.15), {-0.45, -0.5}},
        {symmetric_matrix(15.0, 0.3, 0.1), {0.05, 0.2}},
        {symmetric_matrix(50.0, 0.2, 0.1), {0.55, 0.55}},
    };
}

} // namespace

Matrix2 symmetric_matrix(double degrees, double a, double b) {
    const Matrix2 r = Matrix2::rotation(degrees * std::numbers::pi / 180.0);
    return r * Matrix2::diagonal(a, b) * r.transpose();
}

std::vector<std::string> fixture_names() {
    return {"similarity3", "sierpinski", "full_square",  "cantor_segment", "carpet",   "example_eps",
            "positive_pair", "cone",     "overlap",      "irreducible3",   "irreducible4",  "rotation"};
}

Ifs fixture(const std::string& name) {
    if (name == "similarity3") {
        return similarities(1.0 / 3.0, {{0.0, 0.0}, {2.0 / 3.0, 0.0}, {1.0 / 3.0, 2.0 / 3.0}});
    }
    if (name == "sierpinski") {
        return similarities(0.5, {{0.0, 0.0}, {0.5, 0.0}, {0.25, 0.5}});
    }
    if (name == "full_square") {
        return similarities(0.5, {{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}, {0.5, 0.5}});
    }
    if (name == "cantor_segment") {
        return similarities(1.0 / 3.0, {{0.0, 0.0}, {2.0 / 3.0, 0.0}});
    }
    if (name == "carpet") {
        return to_ifs(example_carpet());
    }
    if (name == "example_eps") {
        return example_fixture(0.01).ifs;
    }
    if (name == "positive_pair") {
        return Ifs({{Matrix2{2.0, 1.0, 1.0, 1.0} * 0.25, {0.0, 0.0}},
                    {Matrix2{1.0, 1.0, 1.0, 2.0} * 0.25, {0.5, 0.5}}});
    }
    if (name == "cone") {
        return Ifs(cone_maps());
    }
    if (name == "overlap") {
        auto maps = cone_maps();
        maps.pop_back();
        maps.push_back(maps[0].compose(maps[1]));
        return Ifs(std::move(maps));
    }
    if (name == "irreducible3") {
        return Ifs({{symmetric_matrix(30.0, 0.6, 0.12), {0.0, 0.0}},
                    {symmetric_matrix(45.0, 0.55, 0.1), {0.6, 0.1}},
                    {symmetric_matrix(60.0, 0.6, 0.12), {0.2, 0.7}}});
    }
    if (name == "irreducible4") {
        return Ifs({{symmetric_matrix(20.0, 0.35, 0.1), {0.0, 0.0}},
                    {symmetric_matrix(40.0, 0.35, 0.1), {1.0, 0.0}},
                    {symmetric_matrix(60.0, 0.35, 0.1), {0.0, 1.0}},
                    {symmetric_matrix(80.0, 0.35, 0.1), {1.0, 1.0}}});
    }
    if (name == "rotation") {
        return Ifs({{Matrix2::rotation(1.0) * 0.5, {0.0, 0.0}}, {Matrix2::rotation(1.0) * 0.5, {1.0, 0.0}}});
    }
    throw InvalidInput("unknown fixture '" + name + "'");
}

} // namespace affdim
