#pragma once

#include "affdim/ifs.hpp"
#include "affdim/projective.hpp"

#include <span>
#include <vector>

namespace affdim {

struct PressureSample {
    double s = 0.0;
    int n = 0;
    double value = 0.0; // P_n(s) = (1/n) log Σ_{|w| = n} φ^s(A_w)
};

/// Logarithms of the singular values of every product of one length, kept
/// separately so that P_n(s) can be evaluated for many s without underflow.
class PressureTable {
public:
    PressureTable(std::span<const Matrix2> mats, int n);

    int depth() const { return n_; }
    std::size_t size() const { return log_major_.size(); }
    /// log Σ φ^s(A_w), summed in a fixed order.
    double log_sum(double s) const;
    double value(double s) const { return log_sum(s) / n_; }
    /// log φ^s(A_w) for the word with lexicographic index `word`.
    double log_phi(std::size_t word, double s) const;

private:
    int n_;
    std::vector<double> log_major_;
    std::vector<double> log_minor_;
};

PressureSample pressure(std::span<const Matrix2> mats, double s, int n);

struct AffinityDimension {
    double value = 0.0;        // root of P_D, an upper estimate
    double extrapolated = 0.0; // Richardson root, much closer to the limit
    double lo = 0.0;
    double hi = 0.0;
    int depth = 0;
};

/// Root of P_D(s) = 0 at the largest depth D with N^D ≤ max_words. The other
/// bracket edge is the root of D·P_D - (D-1)·P_{D-1} (Richardson step for a
/// 1/n bias).
AffinityDimension affinity_dimension(std::span<const Matrix2> mats, double tol = 1e-13,
                                     std::size_t max_words = 200'000, int max_depth = 64);

/// g_s on a word whose first matrix is `first` and whose shifted tail has
/// direction `tail` (Π(σi)).
double g_s(const Matrix2& first, double s, ProjPoint tail);

/// Eigendata of the transfer operator discretized on cylinders of depth m:
/// (Lf)(w) = Σ_j exp(g_s(j, Π[w])) f((jw)|m).
struct EqState {
    int m = 0;
    std::size_t alphabet = 0;
    double s = 0.0;
    double lambda = 0.0;
    double lambda_lo = 0.0; // Collatz–Wielandt bounds
    double lambda_hi = 0.0;
    int iterations = 0;
    bool averaged = false;
    std::vector<double> h;
    std::vector<double> nu;
    /// weight[j * N^m + w] = exp(g_s(j w)).
    std::vector<double> weight;
};

std::vector<double> apply_transfer(const EqState& eq, std::span<const double> f);
std::vector<double> apply_adjoint(const EqState& eq, std::span<const double> nu);

/// Furstenberg directions from a certified cone; similarity systems get a
/// placeholder cone. Throws NotDominated otherwise.
FurstenbergDirections state_directions(std::span<const Matrix2> mats);

EqState equilibrium_state(std::span<const Matrix2> mats, double s, int m = 6, int iters = 20000, double tol = 1e-14);
EqState equilibrium_state(std::span<const Matrix2> mats, const FurstenbergDirections& dirs, double s, int m,
                          int iters = 20000, double tol = 1e-14);

struct GibbsWeights {
    int depth = 0;
    std::vector<double> weights; // lexicographic words of length depth
    /// max/min over words of weight / φ^s(A_w).
    double spread = 0.0;
};

/// Cylinder weights of the equilibrium state: h·ν for depth ≤ m, and the
/// eigenmeasure recursion ν(jw) = λ^{-1} exp(g_s(jw)) ν(w) beyond.
GibbsWeights kaenmaki_weights(std::span<const Matrix2> mats, const FurstenbergDirections& dirs, const EqState& eq,
                              int depth);

/// Extra letters used when estimating Π on cylinders of length n.
int direction_refinement(std::size_t alphabet, int n, std::size_t max_arcs = 1u << 17);

} // namespace affdim
