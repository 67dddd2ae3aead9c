#pragma once

// Exact moments of eta and of the ISE center of mass S.
//
//   a_1 = 1,  a_k = 2(5k-4)(5k-6) a_{k-1} + sum_{i=1}^{k-1} a_i a_{k-i}
//   b_k = a_k / (50^(k-1) ((k-1)!)^2)
//   E[eta^k]  = k! sqrt(pi) a_k / (2^((7k-4)/2) Gamma((5k-1)/2))
//   E[S^(2k)] = (2k)! sqrt(pi) a_k / (2^((9k-4)/2) Gamma((5k-1)/2))

#include <vector>

#include "iselab/exact.hpp"

namespace iselab {

/// a_1..a_max_k; element i holds a_{i+1}.
std::vector<BigInt> compute_a(int max_k);

/// b_1..b_max_k; element i holds b_{i+1}.
std::vector<BigRational> compute_b(int max_k);

/// E[N^m] for a standard Gaussian and even m >= 0.
BigRational gaussian_even_moment(int m);

/// E[eta^k] with k >= 0 (k = 0 gives 1).
ExactConstant eta_moment(int k);
/// E[S^m] with m >= 0; zero for odd m.
ExactConstant s_moment(int m);

/// Same formulas with a caller-supplied a-sequence (a[i] = a_{i+1}).
ExactConstant eta_moment(int k, const std::vector<BigInt>& a);
ExactConstant s_even_moment(int k, const std::vector<BigInt>& a);

/// Immutable table of every exact quantity up to max_k.
class MomentTable {
public:
    explicit MomentTable(int max_k);

    int max_k() const { return max_k_; }

    /// 1-based accessors, 1 <= k <= max_k.
    const BigInt& a(int k) const;
    const BigRational& b(int k) const;
    /// 0 <= k <= max_k.
    const ExactConstant& eta(int k) const;
    /// E[S^(2k)], 0 <= k <= max_k.
    const ExactConstant& s_even(int k) const;

    const std::vector<BigInt>& a_values() const { return a_; }
    const std::vector<BigRational>& b_values() const { return b_; }

private:
    void check(int k, int lo) const;

    int max_k_;
    std::vector<BigInt> a_;
    std::vector<BigRational> b_;
    std::vector<ExactConstant> eta_;
    std::vector<ExactConstant> s_even_;
};

}  // namespace iselab
