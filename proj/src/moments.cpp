#include "iselab/moments.hpp"

#include <stdexcept>
#include <string>

namespace iselab {

std::vector<BigInt> compute_a(int max_k)
{
    if (max_k < 1) {
        throw std::invalid_argument("compute_a: max_k must be >= 1");
    }
    std::vector<BigInt> a(static_cast<size_t>(max_k));
    a[0] = 1;
    BigInt conv;
    for (int k = 2; k <= max_k; ++k) {
        conv = 0;
        for (int i = 1; i <= k - 1; ++i) {
            conv += a[static_cast<size_t>(i - 1)] * a[static_cast<size_t>(k - i - 1)];
        }
        a[static_cast<size_t>(k - 1)] =
            BigInt(2L * (5L * k - 4) * (5L * k - 6)) * a[static_cast<size_t>(k - 2)] + conv;
    }
    return a;
}

namespace {

std::vector<BigRational> b_from_a(const std::vector<BigInt>& a)
{
    std::vector<BigRational> b;
    b.reserve(a.size());
    BigInt pow50 = 1;
    BigInt fact = 1;  // (k-1)!
    for (size_t i = 0; i < a.size(); ++i) {
        long k = static_cast<long>(i) + 1;
        if (k > 1) {
            pow50 *= 50;
            fact *= (k - 1);
        }
        b.emplace_back(a[i], pow50 * fact * fact);
    }
    return b;
}

}  // namespace

std::vector<BigRational> compute_b(int max_k)
{
    return b_from_a(compute_a(max_k));
}

BigRational gaussian_even_moment(int m)
{
    if (m < 0 || m % 2 != 0) {
        throw std::invalid_argument("gaussian_even_moment: order must be even and >= 0, got "
                                    + std::to_string(m));
    }
    BigInt two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(m / 2));
    return BigRational(factorial(m), two_pow * factorial(m / 2));
}

ExactConstant eta_moment(int k, const std::vector<BigInt>& a)
{
    if (k < 0) {
        throw std::invalid_argument("eta_moment: k must be >= 0");
    }
    if (k == 0) {
        return ExactConstant(BigRational(1));
    }
    if (static_cast<size_t>(k) > a.size()) {
        throw std::out_of_range("eta_moment: a-sequence too short");
    }
    ExactConstant numer(BigRational(BigInt(factorial(k) * a[static_cast<size_t>(k - 1)])), -(7 * k - 4), 1);
    return numer / half_gamma(5L * k - 1);
}

ExactConstant s_even_moment(int k, const std::vector<BigInt>& a)
{
    if (k < 0) {
        throw std::invalid_argument("s_even_moment: k must be >= 0");
    }
    if (k == 0) {
        return ExactConstant(BigRational(1));
    }
    if (static_cast<size_t>(k) > a.size()) {
        throw std::out_of_range("s_even_moment: a-sequence too short");
    }
    ExactConstant numer(BigRational(BigInt(factorial(2L * k) * a[static_cast<size_t>(k - 1)])),
                        -(9 * k - 4), 1);
    return numer / half_gamma(5L * k - 1);
}

ExactConstant eta_moment(int k)
{
    if (k <= 0) {
        return eta_moment(k, {});
    }
    return eta_moment(k, compute_a(k));
}

ExactConstant s_moment(int m)
{
    if (m < 0) {
        throw std::invalid_argument("s_moment: order must be >= 0");
    }
    if (m % 2 != 0) {
        return ExactConstant();
    }
    int k = m / 2;
    if (k == 0) {
        return ExactConstant(BigRational(1));
    }
    return s_even_moment(k, compute_a(k));
}

MomentTable::MomentTable(int max_k)
    : max_k_(max_k), a_(compute_a(max_k)), b_(b_from_a(a_))
{
    eta_.reserve(static_cast<size_t>(max_k) + 1);
    s_even_.reserve(static_cast<size_t>(max_k) + 1);
    for (int k = 0; k <= max_k; ++k) {
        eta_.push_back(eta_moment(k, a_));
        s_even_.push_back(s_even_moment(k, a_));
    }
}

void MomentTable::check(int k, int lo) const
{
    if (k < lo || k > max_k_) {
        throw std::out_of_range("MomentTable: index " + std::to_string(k) + " outside ["
                                + std::to_string(lo) + ", " + std::to_string(max_k_) + "]");
    }
}

const BigInt& MomentTable::a(int k) const
{
    check(k, 1);
    return a_[static_cast<size_t>(k - 1)];
}

const BigRational& MomentTable::b(int k) const
{
    check(k, 1);
    return b_[static_cast<size_t>(k - 1)];
}

const ExactConstant& MomentTable::eta(int k) const
{
    check(k, 0);
    return eta_[static_cast<size_t>(k)];
}

const ExactConstant& MomentTable::s_even(int k) const
{
    check(k, 0);
    return s_even_[static_cast<size_t>(k)];
}

}  // namespace iselab
