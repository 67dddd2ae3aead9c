#pragma once

// Asymptotic formulas, moment generating functions, tail bounds and the
// moment/MGF/tail constant correspondence.
//
// Everything that can overflow is evaluated in the log domain; the `log_*`
// functions return natural logarithms and the plain versions exponentiate.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "iselab/exact.hpp"

namespace iselab {

/// Thrown when a truncated series cannot be certified to the requested tolerance.
class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- moment asymptotics ----------------------------------------------------

/// beta * 50^(k-1) * ((k-1)!)^2, k >= 1.
double a_asymptote(int k, double beta);
double log_a_asymptote(int k, double beta);

/// (2 pi^(3/2) beta / 5) k^(1/2) (5e)^(-k/2) k^(k/2)
double log_eta_moment_asymptote(int k, double beta);
/// (2 pi^(3/2) beta / 5) (2k)^(1/2) (10 e^3)^(-2k/4) (2k)^(3/4 * 2k), argument is 2k.
double log_s_moment_asymptote(int two_k, double beta);
/// 3 sqrt(2) k (3e)^(-k/2) k^(k/2)
double log_xi_moment_asymptote(int k);

double eta_moment_asymptote(int k, double beta);
double s_moment_asymptote(int two_k, double beta);
double xi_moment_asymptote(int k);

struct AsymptoticEval {
    double argument = 0;
    double asymptote_value = 0;
    double log_asymptote = 0;
    std::optional<double> exact_or_series_value;
    std::optional<double> log_exact;
    /// exact / asymptote, computed from the logs so it survives overflow.
    std::optional<double> ratio;
};

AsymptoticEval compare_log(double argument, double log_asymptote,
                           std::optional<double> log_exact);

// --- moment generating functions -------------------------------------------

/// (2 pi)^(3/2) beta / 5^(3/2) * t * exp(t^2 / 10)
double log_mgf_asymptote_eta(double t, double beta);
/// 2^(1/2) pi^(3/2) beta / 5^(3/2) * t^2 * exp(t^4 / 40)
double log_mgf_asymptote_s(double t, double beta);
double mgf_asymptote_eta(double t, double beta);
double mgf_asymptote_s(double t, double beta);

enum class MomentFamily { eta, s };

struct MgfSeries {
    double value = 0;
    double log_value = 0;
    int terms_used = 0;
    /// Certified bound on the truncated tail relative to the partial sum.
    double relative_tail = 0;
};

/// sum_k moments[k] t^k / k! where moments[k] = E[X^k]. The tail past the last
/// supplied moment is bounded by twice the leading asymptote of the family
/// and must fall below tol * partial_sum, otherwise CertificationError.
MgfSeries mgf_series(std::span<const ExactConstant> moments, double t, double tol,
                     MomentFamily family, double beta);

// --- tail bounds -----------------------------------------------------------

/// Asymptotically admissible constants; not certified at moderate x.
inline constexpr double kDefaultK1 = 4.9;
inline constexpr double kDefaultK2 = 1.6;
inline constexpr double kDefaultTailSafety = 1.05;

/// Threshold constants the Markov-inequality argument needs for large x:
/// 2 pi^(3/2) beta / sqrt(5) and 10^(1/6) beta pi^(3/2) / 5.
double k1_threshold(double beta);
double k2_threshold(double beta);

/// K1 x exp(-5/2 x^2), x >= 1.
double tail_bound_eta(double x, double k1 = kDefaultK1 * kDefaultTailSafety);
/// K2 x^(2/3) exp(-3/4 10^(1/3) x^(4/3)), x >= 1.
double tail_bound_s(double x, double k2 = kDefaultK2 * kDefaultTailSafety);

// --- moment / tail / MGF constants -----------------------------------------

/// Constants of -ln P(X > x) ~ a x^p, (E X^r)^(1/r) ~ b r^(1/p), and, for
/// p > 1, ln E e^(tX) ~ c t^q with 1/p + 1/q = 1.
struct TailConstants {
    double p = 0;
    std::optional<double> q;
    double a = 0;
    double b = 0;
    std::optional<double> c;
};

enum class TailParameter { a, b, c };

TailConstants kasahara_convert(double p, TailParameter known, double value);

// --- standard series estimate -----------------------------------------------

enum class L1Case { power_decay, factorial };
enum class Parity { all, even };

struct L1Result {
    double log_partial_sum = 0;
    double log_asymptote = 0;
    double ratio = 0;
    long terms = 0;
};

/// power_decay: sum_k k^b k^(-gamma k) x^k        (gamma > 0)
/// factorial:   sum_k k^b k^(gamma k) x^k / k!    (gamma < 1)
/// The asymptote is halved for even-only sums.
L1Result l1_sum(L1Case which, double gamma, double b_exp, double x, Parity parity);

}  // namespace iselab
