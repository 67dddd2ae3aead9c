#pragma once

// Brownian excursion sampling, the functionals
//   xi  = 2 int_0^1 e(t) dt
//   eta = 4 int_{s<t} min_{[s,t]} e(u) ds dt,
// the discrete Brownian snake and the center of mass S.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "json.hpp"

#include "iselab/rng.hpp"
#include "iselab/stats.hpp"

namespace iselab {

/// Excursion on the grid t_i = i/n, i = 0..n.
///
/// cell_floor[i] is a lower value for e on [t_i, t_{i+1}]. Samplers that know
/// the path between grid points store its exact minimum there; paths built
/// from grid values alone use min(values[i], values[i+1]).
struct ExcursionPath {
    std::vector<double> values;
    std::vector<double> cell_floor;

    int n() const { return static_cast<int>(values.size()) - 1; }
    double dt() const { return 1.0 / n(); }

    /// Linear-interpolation floors.
    static ExcursionPath from_values(std::vector<double> values);

    /// Throws std::invalid_argument on a malformed path.
    void validate() const;
};

/// Gaussian bridge on the grid, exact per-cell bridge minima, then a cyclic
/// shift that puts the overall minimum at time 0. n >= 2.
ExcursionPath sample_excursion(int n, Rng& rng);

/// 2 x trapezoid integral.
double xi_stat(const ExcursionPath& path);

/// Grid-pair double loop, O(n^2): 4 sum_{i<j} min(values[i..j]) / n^2.
double eta_stat_naive(const ExcursionPath& path);
/// Same quantity in O(n) via the monotonic-stack subarray-minimum sum.
double eta_stat_fast(const ExcursionPath& path);
/// 4/n^2 sum over cell ranges i..j of min(cell_floor[i..j]). Uses the exact
/// cell minima, which removes the O(n^-1/2) downward bias the grid-only
/// estimate has. Equals eta_stat_fast when the floors are linear.
double eta_stat_subgrid(const ExcursionPath& path);

/// Sum over all contiguous subarrays of their minimum, O(n).
long double subarray_min_sum(const std::vector<double>& xs);

/// sqrt(eta_stat_subgrid(path)) * N(0,1).
double sample_s_conditional(const ExcursionPath& path, Rng& rng);

struct SnakeSample {
    /// Contour process rescaled to an excursion on a grid of 2n cells.
    ExcursionPath excursion;
    /// Head position at each contour time 0..2n.
    std::vector<double> heads;
    /// Trapezoid average of the heads.
    double s_value = 0;
    /// Head at a uniformly chosen contour time.
    double head_at_uniform = 0;
};

/// Uniform Dyck path of length 2n read as the contour of a plane tree with
/// n edges; every edge carries an independent N(0, 2/sqrt(2n)) displacement.
/// n >= 1.
SnakeSample sample_discrete_snake(int n, Rng& rng);

struct SimConfig {
    int grid_n = 2000;
    std::int64_t n_samples = 100000;
    std::uint64_t seed = 42;
    int workers = 0;
};

struct ExcursionSamples {
    std::vector<double> xi;
    std::vector<double> eta;
    std::vector<double> s;
    double seconds = 0;
};

/// Sample i uses Rng::stream(seed, excursion, i).
ExcursionSamples simulate_excursions(const SimConfig& cfg);

struct SnakeSamples {
    std::vector<double> s;
    std::vector<double> head_at_uniform;
    double seconds = 0;
};

/// grid_n is the snake size n; sample i uses Rng::stream(seed, snake, i).
SnakeSamples simulate_snakes(const SimConfig& cfg);

/// One row per sample: index, xi, eta, s.
void write_samples_csv(std::ostream& out, const ExcursionSamples& samples);

struct IdloiConfig {
    /// Size of each discrete snake (contour length 2 * snake_n).
    int snake_n = 2000;
    /// Grid of the excursions behind the sqrt(eta) N population.
    int grid_n = 2000;
    std::int64_t n_samples = 100000;
    std::uint64_t seed = 42;
    int workers = 0;
};

struct MomentGap {
    int order = 0;
    double snake = 0;
    double conditional = 0;
    double gap = 0;
    double combined_se = 0;
    bool within(double z) const { return gap < z * combined_se; }
};

struct IdloiReport {
    IdloiConfig config;
    /// Orders 1, 2, 4, 6.
    std::vector<MomentGap> gaps;
    double ks = 0;
    double ks_budget = 0;
    double seconds = 0;

    const MomentGap& gap(int order) const;
    /// Orders 2 and 4 within 3 combined SE and KS within budget.
    bool passed() const;
    nlohmann::json to_json(bool with_timing = true) const;
};

/// Population A: snake S values. Population B: sqrt(eta) N over fresh
/// excursions. Compares raw moments and the two-sample KS distance.
IdloiReport verify_idloi(const IdloiConfig& cfg);

}  // namespace iselab
