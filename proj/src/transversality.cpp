#include "affdim/error.hpp"
#include "affdim/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace affdim {
namespace {

int letter(const Word& w, int n) { return w[static_cast<std::size_t>(n) % w.size()]; }

} // namespace

double projected_coding(std::span<const Matrix2> mats, std::span<const Vec2> translations, Vec2 u, const Word& i,
                        int depth) {
    Matrix2 prefix = Matrix2::identity();
    double acc = 0.0;
    for (int n = 0; n < depth; ++n) {
        const auto k = static_cast<std::size_t>(letter(i, n));
        acc += dot(u, prefix * translations[k]);
        prefix = prefix * mats[k];
    }
    return acc;
}

TransversalityValue transversality_derivative(std::span<const Matrix2> mats, std::span<const Vec2> translations,
                                              Vec2 w, const Word& i, const Word& j, int depth) {
    if (mats.size() != translations.size() || mats.empty()) {
        throw InvalidInput("matrices and translations differ in number");
    }
    if (i.empty() || j.empty() || depth < 1) {
        throw InvalidInput("transversality needs non-empty words and depth >= 1");
    }
    double a = 0.0;
    for (const auto& m : mats) {
        a = std::max(a, operator_norm(m));
    }
    if (!(a < 0.5)) {
        throw HypothesisViolated("transversality needs max ||A_i|| < 1/2");
    }
    if (i[0] == j[0]) {
        throw HypothesisViolated("transversality needs words with different first letters");
    }
    const double wn = w.norm();
    if (!(wn > 0.0)) {
        throw InvalidInput("direction must be non-zero");
    }
    const Vec2 u{-w.y / wn, w.x / wn};
    const int target = i[0];

    const auto series = [&](const Word& word) {
        Matrix2 prefix = Matrix2::identity();
        double acc = 0.0;
        for (int n = 0; n < depth; ++n) {
            const int l = letter(word, n);
            if (l == target) {
                acc += dot(u, prefix * u);
            }
            prefix = prefix * mats[static_cast<std::size_t>(l)];
        }
        return acc;
    };
    TransversalityValue out;
    const double d_signed = series(i) - series(j);
    out.difference = projected_coding(mats, translations, u, i, depth) - projected_coding(mats, translations, u, j, depth);
    out.magnitude = std::abs(d_signed);
    out.derivative = out.difference < 0.0 ? -d_signed : d_signed;
    out.tail = 2.0 * std::pow(a, depth) / (1.0 - a);
    return out;
}

} // namespace affdim
