#include "iselab/beta.hpp"

#include <stdexcept>

namespace iselab {

namespace {

BigRational inv(const BigInt& d) { return BigRational(BigInt(1), d); }

BigInt sq(long x) { return BigInt(x) * BigInt(x); }

BigInt ipow(long x, unsigned long e)
{
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(x), e);
    return r;
}

void require_table(const MomentTable& table, int k, const char* who)
{
    if (table.max_k() < k) {
        throw std::out_of_range(std::string(who) + ": moment table too short");
    }
}

// Remainder bound past `cut` with every b_j replaced by 1.
BigRational remainder_upper(int cut, const BigRational& b2_hi, const BigRational& b3_hi)
{
    long m = cut;
    return b2_hi * inv(BigInt(75) * ipow(m - 2, 3))
         + b3_hi * BigRational(BigInt(4), BigInt(125) * ipow(m - 3, 5))
         + BigRational(BigInt(36), BigInt(150) * ipow(m - 4, 6));
}

}  // namespace

std::string to_string(BetaMethod m)
{
    return m == BetaMethod::coarse ? "coarse" : "refined";
}

BetaMethod parse_beta_method(const std::string& s)
{
    if (s == "coarse") {
        return BetaMethod::coarse;
    }
    if (s == "refined") {
        return BetaMethod::refined;
    }
    throw std::invalid_argument("unknown beta method '" + s + "'");
}

nlohmann::json BetaCertificate::to_json() const
{
    return {
        {"n_cut", n_cut},
        {"lo_numerator", interval.lo.numerator().get_str()},
        {"lo_denominator", interval.lo.denominator().get_str()},
        {"hi_numerator", interval.hi.numerator().get_str()},
        {"hi_denominator", interval.hi.denominator().get_str()},
        {"method", to_string(method)},
    };
}

BetaCertificate BetaCertificate::from_json(const nlohmann::json& j)
{
    BetaCertificate c;
    c.n_cut = j.at("n_cut").get<int>();
    c.method = parse_beta_method(j.at("method").get<std::string>());
    BigRational lo(BigInt(j.at("lo_numerator").get<std::string>(), 10),
                   BigInt(j.at("lo_denominator").get<std::string>(), 10));
    BigRational hi(BigInt(j.at("hi_numerator").get<std::string>(), 10),
                   BigInt(j.at("hi_denominator").get<std::string>(), 10));
    c.interval = RationalInterval(lo, hi);
    return c;
}

BigRational s_k_exact(int k, const MomentTable& table)
{
    if (k < 3) {
        throw std::invalid_argument("s_k_exact: k must be >= 3");
    }
    if (k == 3) {
        return BigRational(0);
    }
    require_table(table, k - 2, "s_k_exact");
    BigInt sum = 0;
    for (int i = 2; i <= k - 2; ++i) {
        sum += table.a(i) * table.a(k - i);
    }
    BigInt fact = factorial(k - 1);
    return BigRational(sum, ipow(50, static_cast<unsigned long>(k - 1)) * fact * fact);
}

RationalInterval beta_coarse(int n, const MomentTable& table)
{
    if (n < 3) {
        throw std::invalid_argument("beta_coarse: n must be >= 3");
    }
    require_table(table, n, "beta_coarse");
    const BigRational& bn = table.b(n);
    return {bn, bn + inv(BigInt(75) * ipow(n - 2, 3))};
}

RationalInterval beta_coarse(int n)
{
    return beta_coarse(n, MomentTable(std::max(n, 1)));
}

BigRational refined_remainder_bound(int cut)
{
    return remainder_upper(cut, BigRational(1), BigRational(1));
}

BetaCertificate beta_refined_certificate(int n, const MomentTable& table)
{
    if (n < 7) {
        throw std::invalid_argument("beta_refined: n must be >= 7");
    }
    require_table(table, n, "beta_refined");

    const BigRational& b2 = table.b(2);
    const BigRational& b3 = table.b(3);
    const BigRational& bn = table.b(n);
    const BigRational beta_hi = beta_coarse(n, table).hi;

    // Known exactly up to n; beyond that b_n <= b_j <= beta_hi.
    auto lower_b = [&](int j) -> const BigRational& { return j <= n ? table.b(j) : bn; };
    auto upper_b = [&](int j) -> const BigRational& { return j <= n ? table.b(j) : beta_hi; };

    const BigRational tolerance(BigInt(1), BigInt(10000000000L));
    int cut = n + 1;
    while (!(remainder_upper(cut, b2 * beta_hi, b3 * beta_hi) < tolerance)) {
        ++cut;
    }

    // s_k = b2 b_{k-2} / (25 (k-1)^2 (k-2)^2)
    //     + 4 b3 b_{k-3} / (25 (k-1)^2 (k-2)^2 (k-3)^2)
    //     + theta (k-7) 36 / (25 (k-1)^2 (k-2)^2 (k-3)^2 (k-4)^2),  0 <= theta <= 1
    BigRational lo = bn;
    BigRational hi = bn;
    for (long k = n + 1; k <= cut; ++k) {
        BigInt d2 = BigInt(25) * sq(k - 1) * sq(k - 2);
        BigInt d3 = d2 * sq(k - 3);
        BigInt d4 = d3 * sq(k - 4);
        BigRational c2 = b2 * inv(d2);
        BigRational c3 = b3 * BigRational(BigInt(4), d3);
        BigRational cm(BigInt(36 * (k - 7)), d4);
        int j2 = static_cast<int>(k - 2);
        int j3 = static_cast<int>(k - 3);
        lo += c2 * lower_b(j2) + c3 * lower_b(j3);
        hi += c2 * upper_b(j2) + c3 * upper_b(j3) + cm;
    }

    // Closed-form remainder for k > cut, where every b_{k-2}, b_{k-3} lies in [b_n, beta_hi].
    long m = cut;
    lo += b2 * bn * inv(BigInt(75) * ipow(m, 3))
        + b3 * bn * BigRational(BigInt(4), BigInt(125) * ipow(m, 5));
    hi += remainder_upper(cut, b2 * beta_hi, b3 * beta_hi);

    if (hi < lo) {
        throw std::logic_error("beta_refined: enclosure failed to close");
    }
    BetaCertificate cert;
    cert.n_cut = n;
    cert.interval = RationalInterval(lo, hi);
    cert.method = BetaMethod::refined;
    cert.tail_cut = cut;
    return cert;
}

RationalInterval beta_refined(int n, const MomentTable& table)
{
    return beta_refined_certificate(n, table).interval;
}

RationalInterval beta_refined(int n)
{
    return beta_refined(n, MomentTable(std::max(n, 1)));
}

BetaCertificate certify_beta(int n, BetaMethod method)
{
    MomentTable table(std::max(n, 1));
    if (method == BetaMethod::refined) {
        return beta_refined_certificate(n, table);
    }
    BetaCertificate cert;
    cert.n_cut = n;
    cert.interval = beta_coarse(n, table);
    cert.method = BetaMethod::coarse;
    return cert;
}

}  // namespace iselab
