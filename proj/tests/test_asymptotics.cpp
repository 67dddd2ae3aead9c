#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "iselab/asymptotics.hpp"
#include "iselab/beta.hpp"
#include "iselab/moments.hpp"

using namespace iselab;

namespace {

const double kBeta = beta_refined(20).midpoint().to_double();

std::vector<ExactConstant> eta_moments(int max_k)
{
    MomentTable t(max_k);
    std::vector<ExactConstant> m;
    for (int k = 0; k <= max_k; ++k) {
        m.push_back(t.eta(k));
    }
    return m;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("a_k asymptote")
{
    MomentTable t(20);
    CHECK(a_asymptote(1, 0.9810382) == doctest::Approx(0.9810382).epsilon(1e-15));
    double ratio5 = BigRational(t.a(5)).to_double() / a_asymptote(5, kBeta);
    CHECK(ratio5 == doctest::Approx(t.b(5).to_double() / kBeta).epsilon(1e-13));
    double log_ratio20 = std::log(BigRational(t.a(20)).to_double()) - log_a_asymptote(20, kBeta);
    CHECK(std::abs(log_ratio20) < 1e-4);
    CHECK_THROWS(a_asymptote(0, kBeta));
    CHECK_THROWS(a_asymptote(3, -1.0));
}

TEST_CASE("moment asymptotes against exact moments")
{
    MomentTable t(40);
    double r_eta = std::exp(t.eta(40).log_abs() - log_eta_moment_asymptote(40, kBeta));
    double r_s = std::exp(t.s_even(40).log_abs() - log_s_moment_asymptote(80, kBeta));
    CHECK(r_eta > 0.95);
    CHECK(r_eta < 1.05);
    CHECK(r_s > 0.95);
    CHECK(r_s < 1.05);
    // Log domain survives where the plain value overflows.
    CHECK(std::isfinite(log_s_moment_asymptote(10000, kBeta)));
    CHECK(std::isinf(s_moment_asymptote(1000, kBeta)));
}

TEST_CASE("S and eta asymptotes are linked by the Gaussian factor")
{
    auto gap = [](int k) {
        double lg = std::lgamma(2.0 * k + 1) - k * std::log(2.0) - std::lgamma(k + 1.0);
        return std::abs(log_s_moment_asymptote(2 * k, kBeta) - log_eta_moment_asymptote(k, kBeta)
                        - lg);
    };
    CHECK(gap(200) < gap(20));
    CHECK(gap(2000) < gap(200));
}

TEST_CASE("xi asymptote against moments from the Airy-area recursion")
{
    // K_0 = -1/2, K_1 = 1/8, K_k = (3k-4)/4 K_{k-1} + sum_{j=1}^{k-1} K_j K_{k-j};
    // E xi^k = 2^k 4 sqrt(pi) 2^(-k/2) k! K_k / Gamma((3k-1)/2).
    const int kmax = 200;
    std::vector<long double> K(kmax + 1);
    K[1] = 0.125L;
    for (int k = 2; k <= kmax; ++k) {
        long double s = (3.0L * k - 4) / 4 * K[k - 1];
        for (int j = 1; j < k; ++j) {
            s += K[j] * K[k - j];
        }
        K[k] = s;
    }
    auto log_moment = [&](int k) {
        return 0.5L * k * std::log(2.0L) + std::log(4.0L)
             + 0.5L * std::log(static_cast<long double>(M_PI)) + std::lgamma(k + 1.0L)
             + std::log(K[k]) - std::lgamma((3.0L * k - 1) / 2);
    };
    CHECK(std::exp(static_cast<double>(log_moment(1))) == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-12));
    double r = std::exp(static_cast<double>(log_moment(200)) - log_xi_moment_asymptote(200));
    CHECK(std::abs(r - 1) < 0.01);
    double r50 = std::exp(static_cast<double>(log_moment(50)) - log_xi_moment_asymptote(50));
    CHECK(std::abs(r - 1) < std::abs(r50 - 1));
}

TEST_CASE("mgf asymptote values")
{
    const double expect = std::log(std::pow(2 * M_PI, 1.5) * kBeta / std::pow(5.0, 1.5))
                        + std::log(10.0) + 10.0;
    CHECK(log_mgf_asymptote_eta(10, kBeta) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(mgf_asymptote_s(1e-3, kBeta) < 1e-5);
    CHECK_THROWS(mgf_asymptote_eta(0, kBeta));
}

TEST_CASE("mgf series certification")
{
    auto m400 = eta_moments(400);
    std::vector<ExactConstant> m200(m400.begin(), m400.begin() + 201);
    std::vector<ExactConstant> m50(m400.begin(), m400.begin() + 51);

    CHECK(mgf_series(m50, 0.0, 1e-8, MomentFamily::eta, kBeta).value == 1.0);
    MgfSeries one = mgf_series(m50, 1.0, 1e-8, MomentFamily::eta, kBeta);
    CHECK(one.relative_tail < 1e-8);
    CHECK(one.value == doctest::Approx(1.9467977483794629).epsilon(1e-12));

    CHECK_THROWS_AS(mgf_series(m200, 30.0, 1e-10, MomentFamily::eta, kBeta), CertificationError);
    MgfSeries at30 = mgf_series(m400, 30.0, 1e-10, MomentFamily::eta, kBeta);
    MgfSeries at10 = mgf_series(m200, 10.0, 1e-10, MomentFamily::eta, kBeta);
    double r30 = std::exp(at30.log_value - log_mgf_asymptote_eta(30, kBeta));
    double r10 = std::exp(at10.log_value - log_mgf_asymptote_eta(10, kBeta));
    CHECK(std::abs(r30 - 1) < std::abs(r10 - 1));
    CHECK_THROWS_AS(mgf_series(std::vector<ExactConstant>{}, 1.0, 1e-8, MomentFamily::eta, kBeta),
                    CertificationError);
}

TEST_CASE("S series at t equals the eta series at t^2/2")
{
    MomentTable t(60);
    std::vector<ExactConstant> s(121);
    std::vector<ExactConstant> eta;
    for (int k = 0; k <= 60; ++k) {
        s[2 * static_cast<size_t>(k)] = t.s_even(k);
        eta.push_back(t.eta(k));
    }
    double vs = mgf_series(s, 1.0, 1e-12, MomentFamily::s, kBeta).value;
    double ve = mgf_series(eta, 0.5, 1e-12, MomentFamily::eta, kBeta).value;
    CHECK(vs == doctest::Approx(ve).epsilon(1e-13));
}

TEST_CASE("tail bounds")
{
    CHECK(tail_bound_eta(1.0, 4.9) == doctest::Approx(4.9 * std::exp(-2.5)).epsilon(1e-15));
    CHECK(tail_bound_eta(1.0, 4.9) == doctest::Approx(0.402).epsilon(1e-3));
    CHECK(tail_bound_s(1.0, 1.6)
          == doctest::Approx(1.6 * std::exp(-0.75 * std::cbrt(10.0))).epsilon(1e-15));
    CHECK(tail_bound_eta(1.0) == doctest::Approx(4.9 * 1.05 * std::exp(-2.5)));
    CHECK_THROWS_AS(tail_bound_eta(0.99), std::domain_error);
    CHECK_THROWS_AS(tail_bound_s(0.5), std::domain_error);
    for (double x = 1.5; x < 10; x += 0.25) {
        CHECK(tail_bound_eta(x + 0.25) < tail_bound_eta(x));
        CHECK(tail_bound_s(x + 0.25) < tail_bound_s(x));
    }
    CHECK(k1_threshold(kBeta) == doctest::Approx(4.9).epsilon(0.01));
    CHECK(k2_threshold(kBeta) == doctest::Approx(1.6).epsilon(0.01));
}

TEST_CASE("moment, tail and MGF constants")
{
    const double e = std::exp(1.0);
    TailConstants eta = kasahara_convert(2.0, TailParameter::b, 1 / std::sqrt(5 * e));
    CHECK(rel(eta.a, 2.5) < 1e-12);
    CHECK(rel(*eta.c, 0.1) < 1e-12);
    TailConstants s = kasahara_convert(4.0 / 3, TailParameter::b, std::pow(10 * e * e * e, -0.25));
    CHECK(rel(s.a, 0.75 * std::cbrt(10.0)) < 1e-12);
    CHECK(rel(*s.c, 1.0 / 40) < 1e-12);
    CHECK(rel(*s.q, 4.0) < 1e-14);
    TailConstants xi = kasahara_convert(2.0, TailParameter::b, 1 / std::sqrt(3 * e));
    CHECK(rel(xi.a, 1.5) < 1e-12);
    CHECK(rel(*xi.c, 1.0 / 6) < 1e-12);

    // Tail exponents -a x^p.
    for (double x : {1.0, 2.0, 3.5}) {
        CHECK(rel(eta.a * x * x, 2.5 * x * x) < 1e-12);
        CHECK(rel(s.a * std::pow(x, 4.0 / 3), 0.75 * std::cbrt(10.0) * std::pow(x, 4.0 / 3)) < 1e-12);
    }

    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> pd(1.01, 5.0);
    std::uniform_real_distribution<double> ad(0.05, 20.0);
    for (int i = 0; i < 100; ++i) {
        const double p = pd(gen);
        const double a = ad(gen);
        TailConstants from_a = kasahara_convert(p, TailParameter::a, a);
        TailConstants from_b = kasahara_convert(p, TailParameter::b, from_a.b);
        TailConstants from_c = kasahara_convert(p, TailParameter::c, *from_a.c);
        CHECK(rel(from_b.a, a) < 1e-14);
        CHECK(rel(from_c.a, a) < 1e-13);
        const double q = *from_a.q;
        CHECK(std::abs(std::pow(p * a, q) * std::pow(q * *from_a.c, p) - 1) < 1e-13);
        CHECK(rel(from_a.b, std::exp(-1 / p) * std::pow(q * *from_a.c, 1 / q)) < 1e-13);
    }
    CHECK_THROWS(kasahara_convert(0.8, TailParameter::c, 1.0));
    CHECK_FALSE(kasahara_convert(0.8, TailParameter::a, 1.0).c.has_value());
    CHECK_THROWS(kasahara_convert(-1, TailParameter::a, 1.0));
}

TEST_CASE("standard series estimate")
{
    L1Result all = l1_sum(L1Case::factorial, 0.5, 0.5, 20, Parity::all);
    CHECK(all.ratio > 0.8);
    CHECK(all.ratio < 1.2);
    L1Result even = l1_sum(L1Case::factorial, 0.5, 0.5, 20, Parity::even);
    CHECK(even.ratio > 0.8);
    CHECK(even.ratio < 1.2);
    L1Result even40 = l1_sum(L1Case::factorial, 0.5, 0.5, 40, Parity::even);
    CHECK(std::abs(even40.ratio - 1) < std::abs(even.ratio - 1));

    // eta MGF shape: x = t / sqrt(5e).
    L1Result m10 = l1_sum(L1Case::factorial, 0.5, 0.5, 10, Parity::all);
    L1Result m40 = l1_sum(L1Case::factorial, 0.5, 0.5, 40, Parity::all);
    CHECK(std::abs(m40.ratio - 1) < std::abs(m10.ratio - 1));

    // gamma = 1, b = 0: sqrt(2 pi) (x/e)^(1/2) e^(x/e).
    const double x = 200;
    L1Result p = l1_sum(L1Case::power_decay, 1.0, 0.0, x, Parity::all);
    const double expect = 0.5 * std::log(2 * M_PI) + 0.5 * std::log(x / std::exp(1.0)) + x / std::exp(1.0);
    CHECK(p.log_asymptote == doctest::Approx(expect).epsilon(1e-14));
    CHECK(std::abs(p.ratio - 1) < 0.01);

    CHECK_THROWS(l1_sum(L1Case::power_decay, 0.0, 1, 2, Parity::all));
    CHECK_THROWS(l1_sum(L1Case::factorial, 1.0, 1, 2, Parity::all));
    CHECK_THROWS(l1_sum(L1Case::factorial, 0.5, 1, -2, Parity::all));
}
