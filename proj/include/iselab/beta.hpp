#pragma once

// Certified enclosures of beta = lim b_k.

#include <string>

#include "json.hpp"

#include "iselab/exact.hpp"
#include "iselab/moments.hpp"

namespace iselab {

enum class BetaMethod { coarse, refined };

std::string to_string(BetaMethod m);
BetaMethod parse_beta_method(const std::string& s);

struct BetaCertificate {
    int n_cut = 0;
    RationalInterval interval;
    BetaMethod method = BetaMethod::coarse;
    /// Refined only: index M past which the tail was bounded in closed form.
    int tail_cut = 0;

    nlohmann::json to_json() const;
    static BetaCertificate from_json(const nlohmann::json& j);
};

/// s_k = b_k - b_{k-1} computed from the convolution sum, k >= 3.
/// The table must hold a_1..a_{k-2}.
BigRational s_k_exact(int k, const MomentTable& table);

/// [b_n, b_n + (n-2)^-3 / 75], n >= 3.
RationalInterval beta_coarse(int n, const MomentTable& table);
RationalInterval beta_coarse(int n);

/// Tail-summed enclosure, n >= 7. Throws std::logic_error if the bracket
/// does not close.
BetaCertificate beta_refined_certificate(int n, const MomentTable& table);
RationalInterval beta_refined(int n, const MomentTable& table);
RationalInterval beta_refined(int n);

BetaCertificate certify_beta(int n, BetaMethod method);

/// Upper bound on the closed-form remainder the refined method adds past `cut`.
BigRational refined_remainder_bound(int cut);

}  // namespace iselab
