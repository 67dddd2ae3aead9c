#include "iselab/excursion.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace iselab {

namespace {

double elapsed_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ExcursionPath ExcursionPath::from_values(std::vector<double> values)
{
    ExcursionPath p;
    p.values = std::move(values);
    if (p.values.size() >= 2) {
        p.cell_floor.resize(p.values.size() - 1);
        for (std::size_t i = 0; i + 1 < p.values.size(); ++i) {
            p.cell_floor[i] = std::min(p.values[i], p.values[i + 1]);
        }
    }
    p.validate();
    return p;
}

void ExcursionPath::validate() const
{
    if (values.size() < 2) {
        throw std::invalid_argument("ExcursionPath: need at least one cell");
    }
    if (values.front() != 0.0 || values.back() != 0.0) {
        throw std::invalid_argument("ExcursionPath: endpoints must be exactly zero");
    }
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("ExcursionPath: values must be finite and nonnegative");
        }
    }
    if (cell_floor.size() + 1 != values.size()) {
        throw std::invalid_argument("ExcursionPath: one floor per cell required");
    }
    for (std::size_t i = 0; i < cell_floor.size(); ++i) {
        const double f = cell_floor[i];
        if (!(f >= 0.0) || f > std::min(values[i], values[i + 1])) {
            throw std::invalid_argument("ExcursionPath: cell floor " + std::to_string(i)
                                        + " outside [0, min of its endpoints]");
        }
    }
}

ExcursionPath sample_excursion(int n, Rng& rng)
{
    if (n < 2) {
        throw std::invalid_argument("sample_excursion: n must be >= 2");
    }
    const auto un = static_cast<std::size_t>(n);
    const double dt = 1.0 / n;
    const double sd = std::sqrt(dt);

    std::vector<double> walk(un + 1);
    walk[0] = 0;
    for (std::size_t i = 1; i <= un; ++i) {
        walk[i] = walk[i - 1] + sd * rng.normal();
    }
    std::vector<double> bridge(un + 1);
    for (std::size_t i = 0; i <= un; ++i) {
        bridge[i] = walk[i] - (static_cast<double>(i) * dt) * walk[un];
    }
    bridge[0] = 0;
    bridge[un] = 0;

    // Minimum of a Brownian bridge of duration dt between a and b.
    std::vector<double> cell_min(un);
    std::size_t k_star = 0;
    for (std::size_t k = 0; k < un; ++k) {
        const double a = bridge[k];
        const double b = bridge[k + 1];
        const double d = a - b;
        cell_min[k] = 0.5 * (a + b - std::sqrt(d * d - 2.0 * dt * std::log(rng.uniform())));
        if (cell_min[k] < cell_min[k_star]) {
            k_star = k;
        }
    }
    const double m_star = cell_min[k_star];

    ExcursionPath p;
    p.values.assign(un + 1, 0.0);
    for (std::size_t i = 1; i < un; ++i) {
        p.values[i] = std::max(0.0, bridge[(k_star + i) % un] - m_star);
    }
    p.cell_floor.assign(un, 0.0);
    for (std::size_t i = 1; i + 1 < un; ++i) {
        const double f = std::max(0.0, cell_min[(k_star + i) % un] - m_star);
        p.cell_floor[i] = std::min({f, p.values[i], p.values[i + 1]});
    }
    return p;
}

double xi_stat(const ExcursionPath& path)
{
    // Endpoints are zero, so the trapezoid rule is the plain interior sum.
    return 2.0 * path.dt() * pairwise_sum(std::span(path.values));
}

double eta_stat_naive(const ExcursionPath& path)
{
    const auto& v = path.values;
    long double sum = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double m = v[i];
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            m = std::min(m, v[j]);
            sum += m;
        }
    }
    const double dt = path.dt();
    return static_cast<double>(4.0L * sum * dt * dt);
}

long double subarray_min_sum(const std::vector<double>& xs)
{
    // Each xs[i] is the minimum of left[i] * right[i] subarrays, where left
    // stops at the previous strictly smaller element and right at the next
    // smaller-or-equal one, so ties are counted once.
    const std::size_t n = xs.size();
    std::vector<std::size_t> left(n);
    std::vector<std::size_t> right(n);
    std::vector<std::size_t> stack;
    stack.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        while (!stack.empty() && xs[stack.back()] >= xs[i]) {
            stack.pop_back();
        }
        left[i] = stack.empty() ? i + 1 : i - stack.back();
        stack.push_back(i);
    }
    stack.clear();
    for (std::size_t i = n; i-- > 0;) {
        while (!stack.empty() && xs[stack.back()] > xs[i]) {
            stack.pop_back();
        }
        right[i] = stack.empty() ? n - i : stack.back() - i;
        stack.push_back(i);
    }
    long double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += static_cast<long double>(xs[i]) * static_cast<long double>(left[i])
             * static_cast<long double>(right[i]);
    }
    return sum;
}

double eta_stat_fast(const ExcursionPath& path)
{
    long double singles = 0;
    for (double v : path.values) {
        singles += v;
    }
    const double dt = path.dt();
    return static_cast<double>(4.0L * (subarray_min_sum(path.values) - singles) * dt * dt);
}

double eta_stat_subgrid(const ExcursionPath& path)
{
    const double dt = path.dt();
    return static_cast<double>(4.0L * subarray_min_sum(path.cell_floor) * dt * dt);
}

double sample_s_conditional(const ExcursionPath& path, Rng& rng)
{
    return std::sqrt(eta_stat_subgrid(path)) * rng.normal();
}

SnakeSample sample_discrete_snake(int n, Rng& rng)
{
    if (n < 1) {
        throw std::invalid_argument("sample_discrete_snake: n must be >= 1");
    }
    const auto un = static_cast<std::size_t>(n);
    const std::size_t len = 2 * un + 1;

    // n up-steps and n+1 down-steps in uniform order; by the cycle lemma
    // exactly one rotation stays nonnegative until its final down-step.
    std::vector<signed char> steps(len, -1);
    std::fill(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(un), 1);
    for (std::size_t i = len - 1; i > 0; --i) {
        std::swap(steps[i], steps[rng.below(i + 1)]);
    }
    long level = 0;
    long lowest = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < len; ++i) {
        level += steps[i];
        if (level < lowest) {
            lowest = level;
            start = (i + 1) % len;
        }
    }

    SnakeSample out;
    const std::size_t contour = 2 * un;
    out.heads.assign(contour + 1, 0.0);
    std::vector<double> heights(contour + 1, 0.0);
    std::vector<double> ancestry;
    ancestry.reserve(un + 1);
    ancestry.push_back(0.0);
    const double scale = std::sqrt(static_cast<double>(contour));
    const double edge_sd = std::sqrt(2.0 / scale);
    for (std::size_t i = 0; i < contour; ++i) {
        if (steps[(start + i) % len] > 0) {
            ancestry.push_back(ancestry.back() + edge_sd * rng.normal());
        } else {
            ancestry.pop_back();
        }
        out.heads[i + 1] = ancestry.back();
        heights[i + 1] = static_cast<double>(ancestry.size() - 1) / scale;
    }
    out.excursion = ExcursionPath::from_values(std::move(heights));

    // Heads vanish at both ends, so the trapezoid average is the interior mean.
    out.s_value = pairwise_sum(std::span(out.heads)) / static_cast<double>(contour);
    out.head_at_uniform = out.heads[rng.below(contour + 1)];
    return out;
}

ExcursionSamples simulate_excursions(const SimConfig& cfg)
{
    if (cfg.n_samples <= 0) {
        throw std::invalid_argument("simulate_excursions: n_samples must be positive");
    }
    const auto t0 = std::chrono::steady_clock::now();
    auto rows = parallel_map(static_cast<std::size_t>(cfg.n_samples), cfg.workers,
                             [&](std::size_t i) {
                                 Rng rng = Rng::stream(cfg.seed, StreamTag::excursion, i);
                                 ExcursionPath p = sample_excursion(cfg.grid_n, rng);
                                 const double eta = eta_stat_subgrid(p);
                                 return std::array<double, 3>{xi_stat(p), eta,
                                                              std::sqrt(eta) * rng.normal()};
                             });
    ExcursionSamples out;
    out.xi.reserve(rows.size());
    out.eta.reserve(rows.size());
    out.s.reserve(rows.size());
    for (const auto& r : rows) {
        out.xi.push_back(r[0]);
        out.eta.push_back(r[1]);
        out.s.push_back(r[2]);
    }
    out.seconds = elapsed_since(t0);
    return out;
}

SnakeSamples simulate_snakes(const SimConfig& cfg)
{
    if (cfg.n_samples <= 0) {
        throw std::invalid_argument("simulate_snakes: n_samples must be positive");
    }
    const auto t0 = std::chrono::steady_clock::now();
    auto rows = parallel_map(static_cast<std::size_t>(cfg.n_samples), cfg.workers,
                             [&](std::size_t i) {
                                 Rng rng = Rng::stream(cfg.seed, StreamTag::snake, i);
                                 SnakeSample s = sample_discrete_snake(cfg.grid_n, rng);
                                 return std::array<double, 2>{s.s_value, s.head_at_uniform};
                             });
    SnakeSamples out;
    out.s.reserve(rows.size());
    out.head_at_uniform.reserve(rows.size());
    for (const auto& r : rows) {
        out.s.push_back(r[0]);
        out.head_at_uniform.push_back(r[1]);
    }
    out.seconds = elapsed_since(t0);
    return out;
}

void write_samples_csv(std::ostream& out, const ExcursionSamples& samples)
{
    const auto old_precision = out.precision(17);
    out << "index,xi,eta,s\r\n";
    for (std::size_t i = 0; i < samples.xi.size(); ++i) {
        out << i << ',' << samples.xi[i] << ',' << samples.eta[i] << ',' << samples.s[i] << "\r\n";
    }
    out.precision(old_precision);
}

const MomentGap& IdloiReport::gap(int order) const
{
    for (const auto& g : gaps) {
        if (g.order == order) {
            return g;
        }
    }
    throw std::out_of_range("IdloiReport: no moment of order " + std::to_string(order));
}

bool IdloiReport::passed() const
{
    return gap(2).within(3.0) && gap(4).within(3.0) && ks < ks_budget;
}

nlohmann::json IdloiReport::to_json(bool with_timing) const
{
    nlohmann::json g = nlohmann::json::array();
    for (const auto& m : gaps) {
        g.push_back({{"order", m.order},
                     {"snake", m.snake},
                     {"conditional", m.conditional},
                     {"gap", m.gap},
                     {"combined_se", m.combined_se},
                     {"within_3se", m.within(3.0)}});
    }
    nlohmann::json j = {
        {"snake_n", config.snake_n},
        {"grid_n", config.grid_n},
        {"n_samples", config.n_samples},
        {"seed", config.seed},
        {"moment_gaps", g},
        {"ks", ks},
        {"ks_budget", ks_budget},
        {"passed", passed()},
    };
    if (with_timing) {
        j["seconds"] = seconds;
    }
    return j;
}

IdloiReport verify_idloi(const IdloiConfig& cfg)
{
    const auto t0 = std::chrono::steady_clock::now();
    SnakeSamples a = simulate_snakes({cfg.snake_n, cfg.n_samples, cfg.seed, cfg.workers});
    ExcursionSamples b = simulate_excursions({cfg.grid_n, cfg.n_samples, cfg.seed, cfg.workers});

    IdloiReport rep;
    rep.config = cfg;
    const McReport ra = summarize(a.s, cfg.snake_n, cfg.seed);
    const McReport rb = summarize(b.s, cfg.grid_n, cfg.seed);
    for (int order : {1, 2, 4, 6}) {
        MomentGap g;
        g.order = order;
        g.snake = ra.moment(order);
        g.conditional = rb.moment(order);
        g.gap = std::abs(g.snake - g.conditional);
        g.combined_se = std::hypot(ra.moment_se(order), rb.moment_se(order));
        rep.gaps.push_back(g);
    }
    rep.ks = ks_distance(a.s, b.s);
    rep.ks_budget = 0.01 + 3.0 / std::sqrt(static_cast<double>(cfg.n_samples));
    rep.seconds = elapsed_since(t0);
    return rep;
}

}  // namespace iselab
