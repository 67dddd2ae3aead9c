#include "iselab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <mpfr.h>

namespace iselab {

namespace {

constexpr double kLogPi = 1.1447298858494002;     // ln(pi)
constexpr double kLog2 = 0.6931471805599453;      // ln(2)
constexpr double kLog5 = 1.6094379124341003;      // ln(5)
constexpr double kLog10 = 2.302585092994046;      // ln(10)

double log_leading_constant(double beta)
{
    // ln(2 pi^(3/2) beta / 5)
    return kLog2 + 1.5 * kLogPi + std::log(beta) - kLog5;
}

void require_positive_beta(double beta)
{
    if (!(beta > 0) || !std::isfinite(beta)) {
        throw std::invalid_argument("beta must be a positive finite number");
    }
}

void require_k(int k, int lo, const char* who)
{
    if (k < lo) {
        throw std::invalid_argument(std::string(who) + ": argument below " + std::to_string(lo));
    }
}

// 50^(k-1) ((k-1)!)^2 times beta, as an MPFR value, then handed to `out`.
template <class Out>
void scaled_a(int k, double beta, Out out)
{
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), 50, static_cast<unsigned long>(k - 1));
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k - 1));
    v *= f * f;
    mpfr_t x;
    mpfr_init2(x, 128);
    mpfr_set_z(x, v.get_mpz_t(), MPFR_RNDN);
    mpfr_mul_d(x, x, beta, MPFR_RNDN);
    out(x);
    mpfr_clear(x);
}

// Running log-sum-exp accumulator.
class LogSum {
public:
    void add(double log_term)
    {
        if (log_term == -std::numeric_limits<double>::infinity()) {
            return;
        }
        if (empty_) {
            max_ = log_term;
            scaled_ = 1.0;
            empty_ = false;
            return;
        }
        if (log_term <= max_) {
            scaled_ += std::exp(log_term - max_);
        } else {
            scaled_ = scaled_ * std::exp(max_ - log_term) + 1.0;
            max_ = log_term;
        }
    }
    bool empty() const { return empty_; }
    double log() const
    {
        return empty_ ? -std::numeric_limits<double>::infinity() : max_ + std::log(scaled_);
    }

private:
    bool empty_ = true;
    double max_ = 0;
    double scaled_ = 0;
};

}  // namespace

// --- moment asymptotics ----------------------------------------------------

double a_asymptote(int k, double beta)
{
    require_k(k, 1, "a_asymptote");
    require_positive_beta(beta);
    double r = 0;
    scaled_a(k, beta, [&](mpfr_t x) { r = mpfr_get_d(x, MPFR_RNDN); });
    return r;
}

double log_a_asymptote(int k, double beta)
{
    require_k(k, 1, "log_a_asymptote");
    require_positive_beta(beta);
    double r = 0;
    scaled_a(k, beta, [&](mpfr_t x) {
        mpfr_log(x, x, MPFR_RNDN);
        r = mpfr_get_d(x, MPFR_RNDN);
    });
    return r;
}

double log_eta_moment_asymptote(int k, double beta)
{
    require_k(k, 1, "eta_moment_asymptote");
    require_positive_beta(beta);
    double kd = k;
    return log_leading_constant(beta) + 0.5 * std::log(kd) - 0.5 * kd * (kLog5 + 1.0)
         + 0.5 * kd * std::log(kd);
}

double log_s_moment_asymptote(int two_k, double beta)
{
    require_k(two_k, 1, "s_moment_asymptote");
    require_positive_beta(beta);
    double m = two_k;
    return log_leading_constant(beta) + 0.5 * std::log(m) - 0.25 * m * (kLog10 + 3.0)
         + 0.75 * m * std::log(m);
}

double log_xi_moment_asymptote(int k)
{
    require_k(k, 1, "xi_moment_asymptote");
    double kd = k;
    return std::log(3.0 * std::sqrt(2.0) * kd) - 0.5 * kd * (std::log(3.0) + 1.0)
         + 0.5 * kd * std::log(kd);
}

double eta_moment_asymptote(int k, double beta)
{
    return std::exp(log_eta_moment_asymptote(k, beta));
}

double s_moment_asymptote(int two_k, double beta)
{
    return std::exp(log_s_moment_asymptote(two_k, beta));
}

double xi_moment_asymptote(int k) { return std::exp(log_xi_moment_asymptote(k)); }

AsymptoticEval compare_log(double argument, double log_asymptote, std::optional<double> log_exact)
{
    AsymptoticEval e;
    e.argument = argument;
    e.log_asymptote = log_asymptote;
    e.asymptote_value = std::exp(log_asymptote);
    if (log_exact) {
        e.log_exact = log_exact;
        e.exact_or_series_value = std::exp(*log_exact);
        e.ratio = std::exp(*log_exact - log_asymptote);
    }
    return e;
}

// --- moment generating functions -------------------------------------------

double log_mgf_asymptote_eta(double t, double beta)
{
    if (!(t > 0)) {
        throw std::invalid_argument("mgf_asymptote_eta: t must be positive");
    }
    require_positive_beta(beta);
    return 1.5 * (kLog2 + kLogPi) + std::log(beta) - 1.5 * kLog5 + std::log(t) + t * t / 10.0;
}

double log_mgf_asymptote_s(double t, double beta)
{
    if (!(t > 0)) {
        throw std::invalid_argument("mgf_asymptote_s: t must be positive");
    }
    require_positive_beta(beta);
    return 0.5 * kLog2 + 1.5 * kLogPi + std::log(beta) - 1.5 * kLog5 + 2.0 * std::log(t)
         + std::pow(t, 4) / 40.0;
}

double mgf_asymptote_eta(double t, double beta) { return std::exp(log_mgf_asymptote_eta(t, beta)); }
double mgf_asymptote_s(double t, double beta) { return std::exp(log_mgf_asymptote_s(t, beta)); }

MgfSeries mgf_series(std::span<const ExactConstant> moments, double t, double tol,
                     MomentFamily family, double beta)
{
    if (moments.empty()) {
        throw CertificationError("mgf_series: no moments supplied");
    }
    if (!(t >= 0) || !std::isfinite(t)) {
        throw std::invalid_argument("mgf_series: t must be finite and >= 0");
    }
    if (!(tol > 0)) {
        throw std::invalid_argument("mgf_series: tolerance must be positive");
    }
    if (t == 0) {
        return {1.0, 0.0, 1, 0.0};
    }
    const double log_t = std::log(t);
    LogSum partial;
    const int last = static_cast<int>(moments.size()) - 1;
    for (int k = 0; k <= last; ++k) {
        const ExactConstant& m = moments[static_cast<size_t>(k)];
        if (m.is_zero()) {
            continue;
        }
        if (m.sign() < 0) {
            throw std::invalid_argument("mgf_series: negative moment supplied");
        }
        partial.add(m.log_abs() + k * log_t - std::lgamma(k + 1.0));
    }

    // Tail past the last supplied moment, each moment bounded by twice its
    // asymptote. The log-terms are concave from k = 2 on, so once the step
    // ratio drops below one the tail is dominated by a geometric series.
    const int step = family == MomentFamily::eta ? 1 : 2;
    int k0 = last + 1;
    if (family == MomentFamily::s && k0 % 2 != 0) {
        ++k0;
    }
    if (k0 < 3) {
        throw CertificationError("mgf_series: at least two nontrivial moments are required");
    }
    auto log_bound = [&](int k) {
        double la = family == MomentFamily::eta ? log_eta_moment_asymptote(k, beta)
                                                : log_s_moment_asymptote(k, beta);
        return std::log(2.0) + la + k * log_t - std::lgamma(k + 1.0);
    };
    double first = log_bound(k0);
    double ratio = std::exp(log_bound(k0 + step) - first);
    if (!(ratio < 1.0)) {
        throw CertificationError("mgf_series: cannot certify, tail terms still growing at k="
                                 + std::to_string(k0) + "; supply more moments");
    }
    double log_tail = first - std::log1p(-ratio);
    double rel = std::exp(log_tail - partial.log());
    if (!(rel < tol)) {
        throw CertificationError("mgf_series: cannot certify, truncated tail "
                                 + std::to_string(rel) + " exceeds tolerance; supply more moments");
    }
    MgfSeries out;
    out.log_value = partial.log();
    out.value = std::exp(out.log_value);
    out.terms_used = last + 1;
    out.relative_tail = rel;
    return out;
}

// --- tail bounds -----------------------------------------------------------

double k1_threshold(double beta)
{
    require_positive_beta(beta);
    return 2.0 * std::pow(M_PI, 1.5) * beta / std::sqrt(5.0);
}

double k2_threshold(double beta)
{
    require_positive_beta(beta);
    return std::pow(10.0, 1.0 / 6.0) * beta * std::pow(M_PI, 1.5) / 5.0;
}

double tail_bound_eta(double x, double k1)
{
    if (!(x >= 1.0)) {
        throw std::domain_error("tail_bound_eta: only established for x >= 1");
    }
    if (!(k1 > 0)) {
        throw std::invalid_argument("tail_bound_eta: K1 must be positive");
    }
    return k1 * x * std::exp(-2.5 * x * x);
}

double tail_bound_s(double x, double k2)
{
    if (!(x >= 1.0)) {
        throw std::domain_error("tail_bound_s: only established for x >= 1");
    }
    if (!(k2 > 0)) {
        throw std::invalid_argument("tail_bound_s: K2 must be positive");
    }
    return k2 * std::pow(x, 2.0 / 3.0)
         * std::exp(-0.75 * std::cbrt(10.0) * std::pow(x, 4.0 / 3.0));
}

// --- moment / tail / MGF constants -----------------------------------------

TailConstants kasahara_convert(double p, TailParameter known, double value)
{
    if (!(p > 0) || !std::isfinite(p)) {
        throw std::invalid_argument("kasahara_convert: p must be positive");
    }
    if (!(value > 0) || !std::isfinite(value)) {
        throw std::invalid_argument("kasahara_convert: known constant must be positive");
    }
    TailConstants tc;
    tc.p = p;
    if (p > 1) {
        tc.q = p / (p - 1);
    }
    const double e = std::exp(1.0);
    switch (known) {
    case TailParameter::a:
        tc.a = value;
        tc.b = std::pow(p * e * tc.a, -1.0 / p);
        break;
    case TailParameter::b:
        tc.b = value;
        tc.a = 1.0 / (p * e * std::pow(tc.b, p));
        break;
    case TailParameter::c:
        if (!tc.q) {
            throw std::domain_error("kasahara_convert: c is only defined for p > 1");
        }
        // (pa)^q (qc)^p = 1
        tc.a = std::pow(*tc.q * value, -p / *tc.q) / p;
        tc.b = std::pow(p * e * tc.a, -1.0 / p);
        break;
    }
    if (tc.q) {
        tc.c = known == TailParameter::c ? value
                                         : std::pow(p * tc.a, -(*tc.q - 1.0)) / *tc.q;
    }
    return tc;
}

// --- standard series estimate ----------------------------------------------

L1Result l1_sum(L1Case which, double gamma, double b_exp, double x, Parity parity)
{
    if (!(x > 0) || !std::isfinite(x) || !std::isfinite(gamma) || !std::isfinite(b_exp)) {
        throw std::invalid_argument("l1_sum: x must be positive and parameters finite");
    }
    if (which == L1Case::power_decay && !(gamma > 0)) {
        throw std::invalid_argument("l1_sum: power-decay series diverges unless gamma > 0");
    }
    if (which == L1Case::factorial && !(gamma < 1)) {
        throw std::invalid_argument("l1_sum: factorial series diverges unless gamma < 1");
    }
    const double log_x = std::log(x);
    auto log_term = [&](long k) {
        double kd = static_cast<double>(k);
        double lk = std::log(kd);
        if (which == L1Case::power_decay) {
            return b_exp * lk - gamma * kd * lk + kd * log_x;
        }
        return b_exp * lk + gamma * kd * lk + kd * log_x - std::lgamma(kd + 1.0);
    };
    // Location of the largest term.
    double peak = which == L1Case::power_decay
                    ? std::exp(log_x / gamma - 1.0)
                    : std::exp((gamma + log_x) / (1.0 - gamma));

    const long step = parity == Parity::even ? 2 : 1;
    const long start = parity == Parity::even ? 2 : 1;
    const long max_terms = 200'000'000;
    LogSum sum;
    long k = start;
    long count = 0;
    for (;; k += step, ++count) {
        if (count > max_terms) {
            throw std::runtime_error("l1_sum: series did not settle within the term budget");
        }
        double lt = log_term(k);
        sum.add(lt);
        if (static_cast<double>(k) > peak + 2.0) {
            double next = log_term(k + step);
            double r = std::exp(next - lt);
            // Terms are log-concave past the peak, so the rest is geometric.
            if (r < 1.0 && next - std::log1p(-r) - sum.log() < std::log(1e-17)) {
                break;
            }
        }
    }

    double log_asym;
    if (which == L1Case::power_decay) {
        double u = log_x - gamma;  // ln(e^-gamma x)
        log_asym = 0.5 * std::log(2.0 * M_PI / gamma) + (b_exp + 0.5) / gamma * u
                 + gamma * std::exp(u / gamma);
    } else {
        double u = gamma + log_x;  // ln(e^gamma x)
        log_asym = -0.5 * std::log1p(-gamma) + b_exp / (1.0 - gamma) * u
                 + (1.0 - gamma) * std::exp(u / (1.0 - gamma));
    }
    if (parity == Parity::even) {
        log_asym -= std::log(2.0);
    }
    L1Result r;
    r.log_partial_sum = sum.log();
    r.log_asymptote = log_asym;
    r.ratio = std::exp(r.log_partial_sum - log_asym);
    r.terms = count + 1;
    return r;
}

}  // namespace iselab
