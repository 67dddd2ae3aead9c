#pragma once

// Monte Carlo reporting: pairwise summation, sample summaries, two-sample
// Kolmogorov-Smirnov distance and an index-preserving parallel map.

#include <array>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

#include "json.hpp"

namespace iselab {

/// Sum in a fixed binary-tree order, independent of thread count.
double pairwise_sum(std::span<const double> xs);

struct McReport {
    std::int64_t n_samples = 0;
    int grid_n = 0;
    std::uint64_t seed = 0;
    double mean = 0;
    /// Sample standard deviation / sqrt(n_samples).
    double std_error = 0;
    /// Empirical E[X^r] for r = 1..8.
    std::array<double, 8> raw_moments{};
    /// Standard errors of the raw moments.
    std::array<double, 8> raw_moment_se{};
    double seconds = 0;

    double moment(int r) const { return raw_moments.at(static_cast<size_t>(r - 1)); }
    double moment_se(int r) const { return raw_moment_se.at(static_cast<size_t>(r - 1)); }

    /// Timing is left out when with_timing is false so output stays reproducible.
    nlohmann::json to_json(bool with_timing = true) const;
};

McReport summarize(std::span<const double> samples, int grid_n, std::uint64_t seed,
                   double seconds = 0);

/// Standard error of the empirical r-th raw moment.
double raw_moment_se(std::span<const double> samples, int r);

/// sup_x |F_a(x) - F_b(x)| between two empirical distributions.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// Empirical P(X > x).
double exceedance(std::span<const double> samples, double x);

/// 0 means hardware concurrency.
int resolve_workers(int requested);

/// out[i] = f(i) for i < count. Each index is computed exactly once and the
/// result lands at its own slot, so output is identical for any worker count.
template <class F>
auto parallel_map(std::size_t count, int workers, F f)
    -> std::vector<std::invoke_result_t<F&, std::size_t>>
{
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<R> out(count);
    const auto w = static_cast<std::size_t>(resolve_workers(workers));
    if (w <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = f(i);
        }
        return out;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += w) {
                    out[i] = f(i);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

}  // namespace iselab
