#include "affdim/ifs.hpp"

#include "affdim/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace affdim {
namespace {

constexpr std::size_t kDefaultWordCap = 5'000'000;

std::size_t initial_cap() {
    if (const char* env = std::getenv("AFFDIM_WORD_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return kDefaultWordCap;
}

std::atomic<std::size_t>& cap_slot() {
    static std::atomic<std::size_t> cap{initial_cap()};
    return cap;
}

} // namespace

std::size_t word_cap() { return cap_slot(); }
void set_word_cap(std::size_t cap) { cap_slot() = std::max<std::size_t>(1, cap); }

void check_budget(double count) {
    if (count > static_cast<double>(word_cap())) {
        throw BudgetExceeded(word_cap());
    }
}

int affordable_depth(std::size_t alphabet, int wanted, double limit) {
    int d = wanted;
    while (d > 1 && std::pow(static_cast<double>(alphabet), d) > limit) {
        --d;
    }
    return d;
}

Vec2 AffineMap::fixed_point() const {
    const Matrix2 m{1.0 - linear.a, -linear.b, -linear.c, 1.0 - linear.d};
    return m.inverse() * translation;
}

Word Word::prefix(std::size_t n) const {
    n = std::min(n, letters_.size());
    return Word(std::vector<int>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Word Word::parent() const {
    if (letters_.empty()) {
        return {};
    }
    return prefix(letters_.size() - 1);
}

Word Word::shift() const {
    if (letters_.empty()) {
        return {};
    }
    return Word(std::vector<int>(letters_.begin() + 1, letters_.end()));
}

Word Word::reversed() const { return Word(std::vector<int>(letters_.rbegin(), letters_.rend())); }

Word Word::concat(const Word& tail) const {
    std::vector<int> out = letters_;
    out.insert(out.end(), tail.letters_.begin(), tail.letters_.end());
    return Word(std::move(out));
}

Word Word::append(int letter) const {
    std::vector<int> out = letters_;
    out.push_back(letter);
    return Word(std::move(out));
}

Word Word::prepend(int letter) const {
    std::vector<int> out;
    out.reserve(letters_.size() + 1);
    out.push_back(letter);
    out.insert(out.end(), letters_.begin(), letters_.end());
    return Word(std::move(out));
}

Word common_prefix(const Word& a, const Word& b) {
    std::size_t n = 0;
    while (n < a.size() && n < b.size() && a[n] == b[n]) {
        ++n;
    }
    return a.prefix(n);
}

std::string word_key(const Word& w, std::size_t alphabet) {
    if (w.empty()) {
        return "∅";
    }
    std::string out;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (alphabet > 9 && k > 0) {
            out += '.';
        }
        out += std::to_string(w[k] + 1);
    }
    return out;
}

Word parse_word_key(const std::string& key, std::size_t alphabet) {
    if (key == "∅" || key.empty()) {
        return {};
    }
    std::vector<int> letters;
    if (alphabet > 9) {
        std::stringstream ss(key);
        std::string part;
        while (std::getline(ss, part, '.')) {
            letters.push_back(std::stoi(part) - 1);
        }
    } else {
        for (char ch : key) {
            if (ch < '1' || ch > '9') {
                throw InvalidInput("bad word key: " + key);
            }
            letters.push_back(ch - '1');
        }
    }
    for (int l : letters) {
        if (l < 0 || static_cast<std::size_t>(l) >= alphabet) {
            throw IndexOutOfRange("word key letter out of range: " + key);
        }
    }
    return Word(std::move(letters));
}

Ifs::Ifs(std::vector<AffineMap> maps, std::optional<Ball> ball) : maps_(std::move(maps)) {
    if (maps_.empty()) {
        throw InvalidInput("an IFS needs at least one map");
    }
    for (const auto& m : maps_) {
        // Re-validate through the checked constructor.
        (void)Matrix2::checked(m.linear.a, m.linear.b, m.linear.c, m.linear.d);
        if (!(singular_values(m.linear).major < 1.0)) {
            throw InvalidInput("map is not contractive (operator norm >= 1)");
        }
        if (!std::isfinite(m.translation.x) || !std::isfinite(m.translation.y)) {
            throw InvalidInput("non-finite translation");
        }
    }
    if (ball) {
        if (!(ball->radius > 0.0)) {
            throw InvalidInput("bounding ball radius must be positive");
        }
        for (const auto& m : maps_) {
            const double lhs = distance(m(ball->center), ball->center) + singular_values(m.linear).major * ball->radius;
            if (lhs > ball->radius * (1.0 + 1e-12)) {
                throw InvalidInput("bounding ball is not invariant under every map");
            }
        }
        ball_ = *ball;
        return;
    }
    Vec2 c{0.0, 0.0};
    for (const auto& m : maps_) {
        c = c + m.fixed_point();
    }
    c = c * (1.0 / static_cast<double>(maps_.size()));
    double r = 0.0;
    for (const auto& m : maps_) {
        r = std::max(r, distance(m(c), c) / (1.0 - singular_values(m.linear).major));
    }
    if (r == 0.0) {
        r = 1e-12;
    }
    ball_ = {c, r * (1.0 + 1e-9)};
}

std::vector<Matrix2> Ifs::matrices() const {
    std::vector<Matrix2> out;
    out.reserve(maps_.size());
    for (const auto& m : maps_) {
        out.push_back(m.linear);
    }
    return out;
}

double Ifs::max_norm() const {
    double best = 0.0;
    for (const auto& m : maps_) {
        best = std::max(best, singular_values(m.linear).major);
    }
    return best;
}

AffineMap compose_word(const Ifs& ifs, const Word& w) {
    AffineMap out = AffineMap::identity();
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] < 0 || static_cast<std::size_t>(w[k]) >= ifs.size()) {
            throw IndexOutOfRange("word letter " + std::to_string(w[k] + 1) + " out of range");
        }
        out = out.compose(ifs[static_cast<std::size_t>(w[k])]);
    }
    return out;
}

Matrix2 compose_linear(const std::vector<Matrix2>& mats, const Word& w) {
    Matrix2 out = Matrix2::identity();
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] < 0 || static_cast<std::size_t>(w[k]) >= mats.size()) {
            throw IndexOutOfRange("word letter out of range");
        }
        out = out * mats[static_cast<std::size_t>(w[k])];
    }
    return out;
}

CanonicalPoint canonical_point(const Ifs& ifs, const Word& w) {
    const AffineMap m = compose_word(ifs, w);
    return {m(ifs.ball().center), singular_values(m.linear).major * ifs.ball().radius};
}

CylinderTable::CylinderTable(const Ifs& ifs, std::size_t depth) : depth_(depth), alphabet_(ifs.size()) {
    check_budget(std::pow(static_cast<double>(alphabet_), static_cast<double>(depth)));
    maps_.assign(1, AffineMap::identity());
    for (std::size_t level = 0; level < depth; ++level) {
        std::vector<AffineMap> next;
        next.reserve(maps_.size() * alphabet_);
        for (const auto& m : maps_) {
            for (const auto& phi : ifs.maps()) {
                next.push_back(m.compose(phi));
            }
        }
        maps_ = std::move(next);
    }
}

Word CylinderTable::word(std::size_t index) const { return word_from_index(index, alphabet_, depth_); }

std::size_t CylinderTable::index(const Word& w) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        idx = idx * alphabet_ + static_cast<std::size_t>(w[k]);
    }
    return idx;
}

std::vector<Matrix2> words_products(const std::vector<Matrix2>& mats, std::size_t depth) {
    check_budget(std::pow(static_cast<double>(mats.size()), static_cast<double>(depth)));
    std::vector<Matrix2> level{Matrix2::identity()};
    for (std::size_t k = 0; k < depth; ++k) {
        std::vector<Matrix2> next;
        next.reserve(level.size() * mats.size());
        for (const auto& m : level) {
            for (const auto& a : mats) {
                next.push_back(m * a);
            }
        }
        level = std::move(next);
    }
    return level;
}

Word word_from_index(std::size_t index, std::size_t alphabet, std::size_t depth) {
    std::vector<int> letters(depth);
    for (std::size_t k = depth; k-- > 0;) {
        letters[k] = static_cast<int>(index % alphabet);
        index /= alphabet;
    }
    return Word(std::move(letters));
}

void for_each_word(std::size_t alphabet, std::size_t n, const std::function<void(const Word&)>& fn) {
    check_budget(std::pow(static_cast<double>(alphabet), static_cast<double>(n)));
    std::vector<int> letters(n, 0);
    while (true) {
        fn(Word(letters));
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (++letters[k] < static_cast<int>(alphabet)) {
                break;
            }
            letters[k] = 0;
            if (k == 0) {
                return;
            }
        }
        if (n == 0) {
            return;
        }
    }
}

} // namespace affdim
