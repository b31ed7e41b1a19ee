#pragma once

#include "affdim/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace affdim {

/// Global cap on the number of words any single enumeration may produce.
/// Defaults to 5'000'000; the AFFDIM_WORD_CAP environment variable overrides
/// the default at first use.
std::size_t word_cap();
void set_word_cap(std::size_t cap);

/// Throws BudgetExceeded when `count` words would exceed the cap.
void check_budget(double count);
/// Largest d ≤ wanted (and ≥ 1) with alphabet^d ≤ limit.
int affordable_depth(std::size_t alphabet, int wanted, double limit = 2e5);

/// x ↦ linear·x + translation.
struct AffineMap {
    Matrix2 linear;
    Vec2 translation;

    static AffineMap identity() { return {Matrix2::identity(), {0.0, 0.0}}; }

    Vec2 operator()(Vec2 x) const { return linear * x + translation; }
    /// (*this)∘inner
    AffineMap compose(const AffineMap& inner) const {
        return {linear * inner.linear, linear * inner.translation + translation};
    }
    /// The unique fixed point (I - A)^{-1} v.
    Vec2 fixed_point() const;
};

struct Ball {
    Vec2 center;
    double radius = 0.0;
};

/// Finite word over the alphabet {0, …, N-1}. Printed 1-based.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {}
    Word(std::initializer_list<int> letters) : letters_(letters) {}

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    int operator[](std::size_t k) const { return letters_[k]; }
    const std::vector<int>& letters() const { return letters_; }

    Word prefix(std::size_t n) const;
    /// Drops the last letter (the parent cylinder).
    Word parent() const;
    /// Drops the first letter (the left shift σ).
    Word shift() const;
    Word reversed() const;
    Word concat(const Word& tail) const;
    Word append(int letter) const;
    Word prepend(int letter) const;

    auto operator<=>(const Word&) const = default;

private:
    std::vector<int> letters_;
};

Word common_prefix(const Word& a, const Word& b);

/// Key used in serialized tables: 1-based digits, dot separated when the
/// alphabet has more than nine letters; the empty word is "∅".
std::string word_key(const Word& w, std::size_t alphabet);
Word parse_word_key(const std::string& key, std::size_t alphabet);

/// A contractive planar affine IFS together with an invariant ball.
class Ifs {
public:
    /// Validates contractivity and, when a ball is given, its invariance.
    /// Without a ball one is fitted from the radius fixed-point inequality.
    explicit Ifs(std::vector<AffineMap> maps, std::optional<Ball> ball = std::nullopt);

    std::size_t size() const { return maps_.size(); }
    const AffineMap& operator[](std::size_t i) const { return maps_[i]; }
    const std::vector<AffineMap>& maps() const { return maps_; }
    const Ball& ball() const { return ball_; }
    std::vector<Matrix2> matrices() const;
    double max_norm() const;

private:
    std::vector<AffineMap> maps_;
    Ball ball_;
};

/// φ_w = φ_{w1} ∘ ⋯ ∘ φ_{wn}; the empty word gives the identity map.
AffineMap compose_word(const Ifs& ifs, const Word& w);
Matrix2 compose_linear(const std::vector<Matrix2>& mats, const Word& w);

struct CanonicalPoint {
    Vec2 point;
    double err_radius;
};

/// φ_w(ball centre) with radius bounding π of every infinite extension.
CanonicalPoint canonical_point(const Ifs& ifs, const Word& w);

/// All words of one length in lexicographic order (last letter fastest),
/// with their composed maps. Index k encodes the word in base N.
class CylinderTable {
public:
    CylinderTable(const Ifs& ifs, std::size_t depth);

    std::size_t depth() const { return depth_; }
    std::size_t alphabet() const { return alphabet_; }
    std::size_t size() const { return maps_.size(); }
    const AffineMap& map(std::size_t index) const { return maps_[index]; }
    const std::vector<AffineMap>& maps() const { return maps_; }
    Word word(std::size_t index) const;
    std::size_t index(const Word& w) const;

private:
    std::size_t depth_;
    std::size_t alphabet_;
    std::vector<AffineMap> maps_;
};

/// Products A_w for all |w| = depth, lexicographic order.
std::vector<Matrix2> words_products(const std::vector<Matrix2>& mats, std::size_t depth);

/// Visits every word of length exactly n in lexicographic order.
void for_each_word(std::size_t alphabet, std::size_t n, const std::function<void(const Word&)>& fn);

Word word_from_index(std::size_t index, std::size_t alphabet, std::size_t depth);

} // namespace affdim
