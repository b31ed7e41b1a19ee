#include "affdim/thermo.hpp"

#include "affdim/error.hpp"
#include "affdim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace affdim {
namespace {

std::size_t ipow(std::size_t base, int exp) {
    std::size_t out = 1;
    for (int k = 0; k < exp; ++k) {
        out *= base;
    }
    return out;
}

template <class F>
double bisect_decreasing(F f, double lo, double hi, double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

template <class F>
double root_of_decreasing(F f, double tol) {
    if (f(0.0) <= 0.0) {
        return 0.0;
    }
    double hi = 4.0;
    while (f(hi) > 0.0 && hi < 1e6) {
        hi *= 2.0;
    }
    return bisect_decreasing(f, 0.0, hi, tol);
}

} // namespace

PressureTable::PressureTable(std::span<const Matrix2> mats, int n) : n_(n) {
    if (n < 1 || mats.empty()) {
        throw InvalidInput("pressure needs n >= 1 and at least one matrix");
    }
    const std::size_t N = mats.size();
    check_budget(std::pow(static_cast<double>(N), n));
    // log|det| is accumulated on its own: for dominated products the
    // determinant of the normalized matrix cancels to noise.
    std::vector<Matrix2> level{Matrix2::identity()};
    std::vector<double> scale{0.0};
    std::vector<double> log_det{0.0};
    for (int k = 0; k < n; ++k) {
        std::vector<Matrix2> next(level.size() * N);
        std::vector<double> next_scale(level.size() * N);
        std::vector<double> next_det(level.size() * N);
        for (std::size_t w = 0; w < level.size(); ++w) {
            for (std::size_t j = 0; j < N; ++j) {
                Matrix2 p = level[w] * mats[j];
                const double f = p.frobenius();
                next[w * N + j] = p * (1.0 / f);
                next_scale[w * N + j] = scale[w] + std::log(f);
                next_det[w * N + j] = log_det[w] + std::log(std::abs(mats[j].det()));
            }
        }
        level = std::move(next);
        scale = std::move(next_scale);
        log_det = std::move(next_det);
    }
    log_major_.resize(level.size());
    log_minor_.resize(level.size());
    for (std::size_t w = 0; w < level.size(); ++w) {
        log_major_[w] = std::log(singular_values(level[w]).major) + scale[w];
        log_minor_[w] = log_det[w] - log_major_[w];
    }
}

double PressureTable::log_phi(std::size_t word, double s) const {
    const double l1 = log_major_[word];
    const double l2 = log_minor_[word];
    return s <= 1.0 ? s * l1 : (s <= 2.0 ? l1 + (s - 1.0) * l2 : 0.5 * s * (l1 + l2));
}

double PressureTable::log_sum(double s) const {
    std::vector<double> terms(log_major_.size());
    for (std::size_t w = 0; w < terms.size(); ++w) {
        terms[w] = log_phi(w, s);
    }
    const double top = *std::max_element(terms.begin(), terms.end());
    for (auto& t : terms) {
        t = std::exp(t - top);
    }
    return top + std::log(parallel::pairwise_sum(terms));
}

PressureSample pressure(std::span<const Matrix2> mats, double s, int n) {
    if (s < 0.0) {
        throw InvalidInput("pressure needs s >= 0");
    }
    const PressureTable table(mats, n);
    return {s, n, table.value(s)};
}

AffinityDimension affinity_dimension(std::span<const Matrix2> mats, double tol, std::size_t max_words,
                                     int max_depth) {
    if (!(tol > 0.0)) {
        throw InvalidInput("tolerance must be positive");
    }
    const double N = static_cast<double>(mats.size());
    const double limit = static_cast<double>(std::min(max_words, word_cap()));
    int depth = 1;
    while (depth < max_depth && std::pow(N, depth + 1) <= limit) {
        ++depth;
    }
    AffinityDimension out;
    out.depth = depth;
    const PressureTable top(mats, depth);
    out.value = root_of_decreasing([&](double s) { return top.log_sum(s); }, tol);
    double other = out.value;
    if (depth > 1) {
        const PressureTable prev(mats, depth - 1);
        other = root_of_decreasing([&](double s) { return top.log_sum(s) - prev.log_sum(s); }, tol);
    }
    out.extrapolated = other;
    out.lo = std::min(out.value, other);
    out.hi = std::max(out.value, other);
    return out;
}

double g_s(const Matrix2& first, double s, ProjPoint tail) {
    if (s == 0.0) {
        return 0.0;
    }
    const double x = std::log(norm_on_line(first.transpose(), tail.perp()));
    const double ld = std::log(std::abs(first.det()));
    if (s <= 1.0) {
        return s * x;
    }
    if (s <= 2.0) {
        return (2.0 - s) * x + (s - 1.0) * ld;
    }
    return 0.5 * s * ld;
}

int direction_refinement(std::size_t alphabet, int n, std::size_t max_arcs) {
    int k = 0;
    const double N = static_cast<double>(alphabet);
    while (k < 12 && std::pow(N, n + k + 1) <= static_cast<double>(max_arcs)) {
        ++k;
    }
    return k;
}

std::vector<double> apply_transfer(const EqState& eq, std::span<const double> f) {
    const std::size_t N = eq.alphabet;
    const std::size_t M = eq.h.size();
    const std::size_t top = M / N;
    std::vector<double> out(M);
    for (std::size_t w = 0; w < M; ++w) {
        double acc = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            acc += eq.weight[j * M + w] * f[j * top + w / N];
        }
        out[w] = acc;
    }
    return out;
}

std::vector<double> apply_adjoint(const EqState& eq, std::span<const double> nu) {
    const std::size_t N = eq.alphabet;
    const std::size_t M = eq.nu.size();
    const std::size_t top = M / N;
    std::vector<double> out(M);
    for (std::size_t u = 0; u < M; ++u) {
        const std::size_t j = u / top;
        const std::size_t tail = u % top;
        double acc = 0.0;
        for (std::size_t l = 0; l < N; ++l) {
            const std::size_t w = tail * N + l;
            acc += eq.weight[j * M + w] * nu[w];
        }
        out[u] = acc;
    }
    return out;
}

FurstenbergDirections state_directions(std::span<const Matrix2> mats) {
    auto cone = try_invariant_multicone(mats);
    if (!cone) {
        // g_s ignores the direction for similarities, so any cone will do.
        const bool conformal = std::all_of(mats.begin(), mats.end(), [](const Matrix2& a) {
            const auto sv = singular_values(a);
            return sv.major - sv.minor <= 1e-12 * sv.major;
        });
        if (!conformal) {
            throw NotDominated();
        }
        cone = Multicone{{ProjInterval{0.0, 0.5 * std::numbers::pi}}};
    }
    return FurstenbergDirections(mats, *cone);
}

EqState equilibrium_state(std::span<const Matrix2> mats, double s, int m, int iters, double tol) {
    return equilibrium_state(mats, state_directions(mats), s, m, iters, tol);
}

EqState equilibrium_state(std::span<const Matrix2> mats, const FurstenbergDirections& dirs, double s, int m,
                          int iters, double tol) {
    if (m < 1) {
        throw InvalidInput("discretization depth must be >= 1");
    }
    const std::size_t N = mats.size();
    check_budget(std::pow(static_cast<double>(N), m + 1));
    const std::size_t M = ipow(N, m);
    EqState eq;
    eq.m = m;
    eq.alphabet = N;
    eq.s = s;
    const auto arcs = dirs.cylinder_table(m, direction_refinement(N, m));
    eq.weight.resize(N * M);
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t w = 0; w < M; ++w) {
            eq.weight[j * M + w] = std::exp(g_s(mats[j], s, ProjPoint{arcs[w].mid()}));
        }
    }

    // Sup-normalized power iteration for h, mass-normalized for ν. Past half
    // the budget the lazy operator (I + L/λ)/2 removes a period-2 oscillation.
    const auto iterate = [&](std::vector<double>& v, bool adjoint, bool sup_norm, double& lam) {
        lam = 0.0;
        for (int it = 1; it <= iters; ++it) {
            std::vector<double> next = adjoint ? apply_adjoint(eq, v) : apply_transfer(eq, v);
            const double norm = sup_norm ? *std::max_element(next.begin(), next.end())
                                         : parallel::pairwise_sum(next);
            const bool lazy = it > iters / 2;
            eq.averaged = eq.averaged || lazy;
            double change = 0.0;
            for (std::size_t w = 0; w < M; ++w) {
                double x = next[w] / norm;
                if (lazy) {
                    x = 0.5 * (x + v[w]);
                }
                change = std::max(change, std::abs(x - v[w]));
                v[w] = x;
            }
            if (lazy) {
                const double n2 = sup_norm ? *std::max_element(v.begin(), v.end()) : parallel::pairwise_sum(v);
                for (auto& x : v) {
                    x /= n2;
                }
            }
            const bool settled = std::abs(norm - lam) < tol * norm && change < 1e-13;
            lam = norm;
            if (settled) {
                return it;
            }
        }
        throw NotConverged(iters);
    };

    eq.h.assign(M, 1.0);
    eq.nu.assign(M, 1.0 / static_cast<double>(M));
    double lam_h = 0.0;
    double lam_nu = 0.0;
    const int it_h = iterate(eq.h, false, true, lam_h);
    const int it_nu = iterate(eq.nu, true, false, lam_nu);
    eq.iterations = std::max(it_h, it_nu);

    const auto lh = apply_transfer(eq, eq.h);
    eq.lambda_lo = 1e300;
    eq.lambda_hi = 0.0;
    for (std::size_t w = 0; w < M; ++w) {
        const double q = lh[w] / eq.h[w];
        eq.lambda_lo = std::min(eq.lambda_lo, q);
        eq.lambda_hi = std::max(eq.lambda_hi, q);
    }
    eq.lambda = std::clamp(lam_h, eq.lambda_lo, eq.lambda_hi);

    std::vector<double> prod(M);
    for (std::size_t w = 0; w < M; ++w) {
        prod[w] = eq.h[w] * eq.nu[w];
    }
    const double integral = parallel::pairwise_sum(prod);
    for (auto& x : eq.h) {
        x /= integral;
    }
    return eq;
}

GibbsWeights kaenmaki_weights(std::span<const Matrix2> mats, const FurstenbergDirections& dirs, const EqState& eq,
                              int depth) {
    if (depth < 1) {
        throw InvalidInput("Gibbs weights need depth >= 1");
    }
    const std::size_t N = mats.size();
    check_budget(std::pow(static_cast<double>(N), depth));
    const int m = eq.m;
    GibbsWeights out;
    out.depth = depth;
    if (depth <= m) {
        const std::size_t block = ipow(N, m - depth);
        out.weights.assign(ipow(N, depth), 0.0);
        for (std::size_t v = 0; v < out.weights.size(); ++v) {
            std::vector<double> part(block);
            for (std::size_t k = 0; k < block; ++k) {
                part[k] = eq.h[v * block + k] * eq.nu[v * block + k];
            }
            out.weights[v] = parallel::pairwise_sum(part);
        }
    } else {
        std::vector<double> nu = eq.nu;
        for (int k = m + 1; k <= depth; ++k) {
            const std::size_t prev = nu.size();
            const auto arcs = dirs.cylinder_table(k - 1, direction_refinement(N, k - 1));
            std::vector<double> next(prev * N);
            for (std::size_t j = 0; j < N; ++j) {
                for (std::size_t v = 0; v < prev; ++v) {
                    next[j * prev + v] = std::exp(g_s(mats[j], eq.s, ProjPoint{arcs[v].mid()})) * nu[v] / eq.lambda;
                }
            }
            nu = std::move(next);
        }
        const std::size_t tail = ipow(N, depth - m);
        out.weights.resize(nu.size());
        for (std::size_t v = 0; v < nu.size(); ++v) {
            out.weights[v] = eq.h[v / tail] * nu[v];
        }
    }
    const double total = parallel::pairwise_sum(out.weights);
    for (auto& x : out.weights) {
        x /= total;
    }
    const PressureTable table(mats, depth);
    double lo = 1e300;
    double hi = 0.0;
    for (std::size_t v = 0; v < table.size(); ++v) {
        const double r = out.weights[v] * std::exp(-table.log_phi(v, eq.s));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    out.spread = hi / lo;
    return out;
}

} // namespace affdim
