#include "iselab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iselab {

double pairwise_sum(std::span<const double> xs)
{
    if (xs.size() <= 16) {
        double s = 0;
        for (double x : xs) {
            s += x;
        }
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

namespace {

std::vector<double> powers(std::span<const double> samples, int r)
{
    std::vector<double> p(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        p[i] = std::pow(samples[i], r);
    }
    return p;
}

// Sample standard deviation of xs divided by sqrt(n).
double std_error_of(std::span<const double> xs)
{
    const auto n = static_cast<double>(xs.size());
    if (xs.size() < 2) {
        return 0;
    }
    const double mean = pairwise_sum(xs) / n;
    std::vector<double> dev(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        dev[i] = (xs[i] - mean) * (xs[i] - mean);
    }
    return std::sqrt(pairwise_sum(dev) / (n - 1) / n);
}

}  // namespace

double raw_moment_se(std::span<const double> samples, int r)
{
    return std_error_of(powers(samples, r));
}

McReport summarize(std::span<const double> samples, int grid_n, std::uint64_t seed,
                   double seconds)
{
    if (samples.empty()) {
        throw std::invalid_argument("summarize: no samples");
    }
    McReport rep;
    rep.n_samples = static_cast<std::int64_t>(samples.size());
    rep.grid_n = grid_n;
    rep.seed = seed;
    rep.seconds = seconds;
    const auto n = static_cast<double>(samples.size());
    for (int r = 1; r <= 8; ++r) {
        std::vector<double> p = powers(samples, r);
        rep.raw_moments[static_cast<size_t>(r - 1)] = pairwise_sum(p) / n;
        rep.raw_moment_se[static_cast<size_t>(r - 1)] = std_error_of(p);
    }
    rep.mean = rep.raw_moments[0];
    rep.std_error = rep.raw_moment_se[0];
    return rep;
}

nlohmann::json McReport::to_json(bool with_timing) const
{
    nlohmann::json j = {
        {"n_samples", n_samples},
        {"grid_n", grid_n},
        {"seed", seed},
        {"mean", mean},
        {"std_error", std_error},
        {"raw_moments", raw_moments},
        {"raw_moment_se", raw_moment_se},
    };
    if (with_timing) {
        j["seconds"] = seconds;
    }
    return j;
}

double ks_distance(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("ks_distance: empty sample");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) {
            ++i;
        }
        while (j < b.size() && b[j] <= x) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double exceedance(std::span<const double> samples, double x)
{
    if (samples.empty()) {
        throw std::invalid_argument("exceedance: no samples");
    }
    auto hits = std::count_if(samples.begin(), samples.end(), [x](double v) { return v > x; });
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

int resolve_workers(int requested)
{
    if (requested < 0) {
        throw std::invalid_argument("workers must be >= 0");
    }
    if (requested == 0) {
        return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    return requested;
}

}  // namespace iselab
