#include "iselab/trees.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace iselab {

LabeledTree LabeledTree::from_edges(int n, const std::vector<std::pair<int, int>>& edges)
{
    if (n < 1) {
        throw std::invalid_argument("LabeledTree: n must be >= 1");
    }
    if (edges.size() != static_cast<std::size_t>(n - 1)) {
        throw std::invalid_argument("LabeledTree: a tree on " + std::to_string(n) + " nodes has "
                                    + std::to_string(n - 1) + " edges");
    }
    LabeledTree t;
    t.n_ = n;
    t.adj_.assign(static_cast<std::size_t>(n), {});
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n || u == v) {
            throw std::invalid_argument("LabeledTree: bad edge");
        }
        t.adj_[static_cast<std::size_t>(u)].push_back(v);
        t.adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    t.parent_.assign(static_cast<std::size_t>(n), -2);
    t.parent_[0] = -1;
    t.order_.reserve(static_cast<std::size_t>(n));
    t.order_.push_back(0);
    for (std::size_t head = 0; head < t.order_.size(); ++head) {
        const int u = t.order_[head];
        for (int v : t.adj_[static_cast<std::size_t>(u)]) {
            if (v == t.parent_[static_cast<std::size_t>(u)]) {
                continue;
            }
            if (t.parent_[static_cast<std::size_t>(v)] != -2) {
                throw std::invalid_argument("LabeledTree: edges contain a cycle");
            }
            t.parent_[static_cast<std::size_t>(v)] = u;
            t.order_.push_back(v);
        }
    }
    if (t.order_.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("LabeledTree: edges do not connect all nodes");
    }
    return t;
}

std::vector<std::pair<int, int>> LabeledTree::edges() const
{
    std::vector<std::pair<int, int>> e;
    e.reserve(static_cast<std::size_t>(std::max(n_ - 1, 0)));
    for (int v = 1; v < n_; ++v) {
        const int p = parent_[static_cast<std::size_t>(v)];
        e.emplace_back(std::min(p, v), std::max(p, v));
    }
    std::sort(e.begin(), e.end());
    return e;
}

LabeledTree from_prufer(int n, std::span<const int> seq)
{
    if (n < 1) {
        throw std::invalid_argument("from_prufer: n must be >= 1");
    }
    if (n == 1) {
        if (!seq.empty()) {
            throw std::invalid_argument("from_prufer: sequence must be empty for n = 1");
        }
        return LabeledTree::from_edges(1, {});
    }
    if (seq.size() != static_cast<std::size_t>(n - 2)) {
        throw std::invalid_argument("from_prufer: sequence length must be n - 2");
    }
    std::vector<int> degree(static_cast<std::size_t>(n), 1);
    for (int x : seq) {
        if (x < 0 || x >= n) {
            throw std::invalid_argument("from_prufer: label out of range");
        }
        ++degree[static_cast<std::size_t>(x)];
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n - 1));
    int ptr = 0;
    while (degree[static_cast<std::size_t>(ptr)] != 1) {
        ++ptr;
    }
    int leaf = ptr;
    for (int x : seq) {
        edges.emplace_back(leaf, x);
        if (--degree[static_cast<std::size_t>(x)] == 1 && x < ptr) {
            leaf = x;
        } else {
            ++ptr;
            while (degree[static_cast<std::size_t>(ptr)] != 1) {
                ++ptr;
            }
            leaf = ptr;
        }
    }
    edges.emplace_back(leaf, n - 1);
    return LabeledTree::from_edges(n, edges);
}

std::vector<int> to_prufer(const LabeledTree& tree)
{
    const int n = tree.n();
    if (n <= 2) {
        return {};
    }
    // Root at n-1 so the last node never gets removed.
    std::vector<int> par(static_cast<std::size_t>(n), -1);
    std::vector<int> stack{n - 1};
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    seen[static_cast<std::size_t>(n - 1)] = true;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : tree.adjacency()[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = true;
                par[static_cast<std::size_t>(v)] = u;
                stack.push_back(v);
            }
        }
    }
    std::vector<int> degree(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        degree[static_cast<std::size_t>(v)] =
            static_cast<int>(tree.adjacency()[static_cast<std::size_t>(v)].size());
    }
    std::vector<int> seq;
    seq.reserve(static_cast<std::size_t>(n - 2));
    int ptr = 0;
    while (degree[static_cast<std::size_t>(ptr)] != 1) {
        ++ptr;
    }
    int leaf = ptr;
    for (int i = 0; i < n - 2; ++i) {
        const int next = par[static_cast<std::size_t>(leaf)];
        seq.push_back(next);
        if (--degree[static_cast<std::size_t>(next)] == 1 && next < ptr) {
            leaf = next;
        } else {
            ++ptr;
            while (degree[static_cast<std::size_t>(ptr)] != 1) {
                ++ptr;
            }
            leaf = ptr;
        }
    }
    return seq;
}

LabeledTree sample_cayley_tree(int n, Rng& rng)
{
    if (n < 1) {
        throw std::invalid_argument("sample_cayley_tree: n must be >= 1");
    }
    std::vector<int> seq(static_cast<std::size_t>(std::max(n - 2, 0)));
    for (int& x : seq) {
        x = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    }
    return from_prufer(n, seq);
}

std::uint64_t wiener_index(const LabeledTree& tree, WienerConvention conv)
{
    const int n = tree.n();
    if (n > 4'000'000) {
        throw std::overflow_error("wiener_index: n too large for 64-bit result");
    }
    std::vector<std::uint64_t> size(static_cast<std::size_t>(n), 1);
    std::uint64_t w = 0;
    const auto& order = tree.bfs_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int v = *it;
        const int p = tree.parent()[static_cast<std::size_t>(v)];
        if (p < 0) {
            continue;
        }
        const std::uint64_t s = size[static_cast<std::size_t>(v)];
        w += s * (static_cast<std::uint64_t>(n) - s);
        size[static_cast<std::size_t>(p)] += s;
    }
    return conv == WienerConvention::ordered ? 2 * w : w;
}

std::uint64_t wiener_brute(const LabeledTree& tree, WienerConvention conv)
{
    const int n = tree.n();
    if (n > 10'000) {
        throw std::length_error("wiener_brute: n above the 10^4 budget");
    }
    std::uint64_t total = 0;
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> queue(static_cast<std::size_t>(n));
    for (int src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<std::size_t>(src)] = 0;
        std::size_t head = 0;
        std::size_t tail = 0;
        queue[tail++] = src;
        while (head < tail) {
            const int u = queue[head++];
            for (int v : tree.adjacency()[static_cast<std::size_t>(u)]) {
                if (dist[static_cast<std::size_t>(v)] < 0) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    total += static_cast<std::uint64_t>(dist[static_cast<std::size_t>(v)]);
                    queue[tail++] = v;
                }
            }
        }
    }
    // total counts every ordered pair.
    return conv == WienerConvention::ordered ? total : total / 2;
}

BigRational expected_wiener_cayley(int n)
{
    if (n < 1) {
        throw std::invalid_argument("expected_wiener_cayley: n must be >= 1");
    }
    if (n == 1) {
        return BigRational(0);
    }
    // P(d(u, v) = k) = (k + 1) (n-2)(n-3)...(n-k) / n^k for distinct u, v.
    BigInt falling = 1;
    BigInt npow = 1;
    BigRational mean_distance(0);
    for (long k = 1; k <= n - 1; ++k) {
        if (k >= 2) {
            falling *= static_cast<long>(n) - k;
        }
        npow *= n;
        mean_distance += BigRational(BigInt(k * (k + 1)) * falling, npow);
    }
    const BigInt pairs = BigInt(n) * BigInt(n - 1) / 2;
    return mean_distance * BigRational(pairs);
}

double normalized_wiener(std::uint64_t w, int n, WienerConvention conv)
{
    const double unordered =
        conv == WienerConvention::ordered ? static_cast<double>(w) / 2.0 : static_cast<double>(w);
    return unordered / std::pow(static_cast<double>(n), 2.5);
}

WienerScaling wiener_scaling_report(int n, std::int64_t n_samples, std::uint64_t seed, int workers)
{
    if (n_samples <= 0) {
        throw std::invalid_argument("wiener_scaling_report: n_samples must be positive");
    }
    if (n < 2) {
        throw std::invalid_argument("wiener_scaling_report: n must be >= 2");
    }
    const auto t0 = std::chrono::steady_clock::now();
    WienerScaling out;
    out.raw = parallel_map(static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
        Rng rng = Rng::stream(seed, StreamTag::tree, i);
        return wiener_index(sample_cayley_tree(n, rng), WienerConvention::ordered);
    });
    out.samples.reserve(out.raw.size());
    for (std::uint64_t w : out.raw) {
        out.samples.push_back(normalized_wiener(w, n, WienerConvention::ordered));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.report = summarize(out.samples, n, seed, secs);
    out.target = std::sqrt(M_PI / 8.0);
    out.allowance = 2.0 / std::sqrt(static_cast<double>(n));
    out.exact_mean =
        expected_wiener_cayley(n).to_double() / std::pow(static_cast<double>(n), 2.5);
    return out;
}

}  // namespace iselab
