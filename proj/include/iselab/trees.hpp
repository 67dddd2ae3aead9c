#pragma once

// Uniform labeled trees and their Wiener index.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "iselab/exact.hpp"
#include "iselab/rng.hpp"
#include "iselab/stats.hpp"

namespace iselab {

/// Tree on nodes 0..n-1, rooted at node 0 (parent[0] == -1).
class LabeledTree {
public:
    /// Validates that the edges form a spanning tree.
    static LabeledTree from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    int n() const { return n_; }
    const std::vector<int>& parent() const { return parent_; }
    const std::vector<std::vector<int>>& adjacency() const { return adj_; }
    /// Edges as (min, max) pairs in sorted order.
    std::vector<std::pair<int, int>> edges() const;
    /// Nodes in breadth-first order from the root.
    const std::vector<int>& bfs_order() const { return order_; }

private:
    int n_ = 0;
    std::vector<int> parent_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> order_;
};

/// Linear-time Pruefer decoding; seq has n-2 entries in [0, n).
LabeledTree from_prufer(int n, std::span<const int> seq);
std::vector<int> to_prufer(const LabeledTree& tree);

/// Uniform over the n^(n-2) labeled trees, n >= 1.
LabeledTree sample_cayley_tree(int n, Rng& rng);

enum class WienerConvention { ordered, unordered };

/// sum over edges of s (n - s), doubled for ordered pairs.
std::uint64_t wiener_index(const LabeledTree& tree, WienerConvention conv);
/// All-pairs BFS, n <= 10^4.
std::uint64_t wiener_brute(const LabeledTree& tree, WienerConvention conv);

/// Exact mean of the unordered Wiener index of a uniform labeled tree on n nodes.
BigRational expected_wiener_cayley(int n);

/// Value whose limit law is xi - eta: unordered index / n^(5/2).
double normalized_wiener(std::uint64_t w, int n, WienerConvention conv);

struct WienerScaling {
    McReport report;
    std::vector<double> samples;
    /// Ordered-pair Wiener index of each tree.
    std::vector<std::uint64_t> raw;
    double target = 0;
    double allowance = 0;
    /// Exact finite-n mean of the normalized value.
    double exact_mean = 0;
};

/// Normalized Wiener indices of n_samples uniform trees on n nodes.
/// Tree i uses Rng::stream(seed, tree, i).
WienerScaling wiener_scaling_report(int n, std::int64_t n_samples, std::uint64_t seed,
                                    int workers = 0);

}  // namespace iselab
