#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace affdim::parallel {

/// Number of worker threads used by `for_each_index`. Defaults to 1.
void set_threads(unsigned n);
unsigned threads();

/// Calls `body(i)` for every i in [0, n). Work is split into contiguous
/// blocks; `body` must only write to slots owned by index i, which keeps
/// results independent of the thread count.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (tree) summation in a fixed order.
double pairwise_sum(std::span<const double> values);

/// Counter-based generator: the stream for (seed, stream) is a pure function
/// of those two numbers, so per-chain draws do not depend on scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, n).
    std::size_t below(std::size_t n);
    /// Index drawn from a discrete distribution given by its cumulative sums.
    std::size_t pick(std::span<const double> cumulative);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace affdim::parallel
