#pragma once

// Exact arithmetic layer: canonical big rationals and constants of the form
// q * 2^(h/2) * pi^(p/2).

#include <compare>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace iselab {

using BigInt = mpz_class;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
class BigRational {
public:
    BigRational() = default;
    BigRational(long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
    BigRational(const BigInt& value) : v_(value) {}  // NOLINT(google-explicit-constructor)
    BigRational(const BigInt& num, const BigInt& den);
    explicit BigRational(const mpq_class& value);

    /// Parses "a" or "a/b" (decimal integers).
    static BigRational parse(const std::string& text);

    BigInt numerator() const { return v_.get_num(); }
    BigInt denominator() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    BigRational operator-() const { return BigRational(mpq_class(-v_)); }
    BigRational& operator+=(const BigRational& o) { v_ += o.v_; return *this; }
    BigRational& operator-=(const BigRational& o) { v_ -= o.v_; return *this; }
    BigRational& operator*=(const BigRational& o) { v_ *= o.v_; return *this; }
    BigRational& operator/=(const BigRational& o);

    friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
    friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
    friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
    friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }

    friend bool operator==(const BigRational& a, const BigRational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b)
    {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    /// Integer power; negative exponents invert (zero base rejected).
    BigRational pow(long exponent) const;
    BigRational abs() const { return BigRational(mpq_class(::abs(v_))); }

    /// "n" for integers, "n/d" otherwise.
    std::string str() const;
    /// Nearest double (may overflow to +-inf).
    double to_double() const;

private:
    mpq_class v_;
};

/// Closed rational interval [lo, hi] certifying a real constant.
struct RationalInterval {
    BigRational lo;
    BigRational hi;

    RationalInterval() = default;
    RationalInterval(BigRational lo_, BigRational hi_);

    BigRational width() const { return hi - lo; }
    BigRational midpoint() const { return (lo + hi) / BigRational(2); }
    bool contains(const BigRational& x) const { return lo <= x && x <= hi; }
    bool contains(const RationalInterval& other) const
    {
        return lo <= other.lo && other.hi <= hi;
    }
    /// Strict containment in the open interval (a, b).
    bool inside_open(const BigRational& a, const BigRational& b) const
    {
        return a < lo && hi < b;
    }
};

/// A real number q * 2^(h/2) * pi^(p/2) with q rational.
///
/// Canonical form: q == 0 forces h == p == 0; otherwise h is reduced to
/// {0, 1} by folding 2^floor(h/2) into q. Because sqrt(2) is irrational and
/// pi is transcendental, two canonical constants are equal iff all three
/// fields agree, so equality is decided field-wise.
class ExactConstant {
public:
    ExactConstant() = default;
    explicit ExactConstant(BigRational q, int two_half_exp = 0, int pi_half_exp = 0);

    static ExactConstant sqrt_pi() { return ExactConstant(BigRational(1), 0, 1); }

    const BigRational& q() const { return q_; }
    int two_half_exp() const { return h_; }
    int pi_half_exp() const { return p_; }

    bool is_zero() const { return q_.is_zero(); }
    bool is_rational() const { return h_ == 0 && p_ == 0; }
    int sign() const { return q_.sign(); }

    friend ExactConstant operator*(const ExactConstant& a, const ExactConstant& b);
    friend ExactConstant operator/(const ExactConstant& a, const ExactConstant& b);
    friend bool operator==(const ExactConstant& a, const ExactConstant& b) = default;

    /// Human-readable canonical string: "7/5", "√(π/8)", falling back to
    /// field form when no radical form applies.
    std::string str() const;
    /// Field form "q·2^(h/2)·π^(p/2)".
    std::string field_str() const;

    /// Rigorous enclosure computed with `bits` bits of working precision.
    RationalInterval enclose(long bits) const;
    /// Natural log of |value| in double precision (value must be nonzero).
    double log_abs() const;
    /// Nearest double (may overflow).
    double to_double() const;

private:
    BigRational q_;
    int h_ = 0;
    int p_ = 0;
};

ExactConstant normalize(const ExactConstant& c);

/// Gamma(two_x / 2) for two_x >= 1.
ExactConstant half_gamma(long two_x);

BigInt factorial(long n);

struct DecimalApprox {
    std::string text;
    /// Certified bound on |text - value|; always < 10^-digits.
    BigRational error_bound;
};

/// Decimal expansion with `digits` fractional digits and certified absolute
/// error below 10^-digits. Requires 1 <= digits <= 10000.
DecimalApprox to_decimal(const ExactConstant& c, int digits);

}  // namespace iselab
