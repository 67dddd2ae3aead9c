#include "iselab/exact.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <mpfr.h>

namespace iselab {

namespace {

// Owning handle for an mpfr_t.
class Mpfr {
public:
    explicit Mpfr(long bits) { mpfr_init2(v_, bits); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    mpq_class to_rational() const
    {
        mpq_class q;
        mpfr_get_q(q.get_mpq_t(), v_);
        return q;
    }

private:
    mpfr_t v_;
};

long bit_length(const BigInt& z)
{
    return z == 0 ? 0 : static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

BigInt pow2(unsigned long e)
{
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

BigInt pow10(unsigned long e)
{
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

// Floor division that rounds toward negative infinity for negative h.
int floor_div2(int h)
{
    return h >= 0 ? h / 2 : -((-h + 1) / 2);
}

}  // namespace

// --- BigRational -----------------------------------------------------------

BigRational::BigRational(const BigInt& num, const BigInt& den)
{
    if (den == 0) {
        throw std::domain_error("BigRational: zero denominator");
    }
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

BigRational::BigRational(const mpq_class& value) : v_(value)
{
    if (v_.get_den() == 0) {
        throw std::domain_error("BigRational: zero denominator");
    }
    v_.canonicalize();
}

BigRational BigRational::parse(const std::string& text)
{
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return BigRational(BigInt(text, 10));
        }
        return BigRational(BigInt(text.substr(0, slash), 10),
                           BigInt(text.substr(slash + 1), 10));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("BigRational: cannot parse '" + text + "'");
    }
}

BigRational& BigRational::operator/=(const BigRational& o)
{
    if (o.is_zero()) {
        throw std::domain_error("BigRational: division by zero");
    }
    v_ /= o.v_;
    return *this;
}

BigRational BigRational::pow(long exponent) const
{
    if (exponent < 0) {
        if (is_zero()) {
            throw std::domain_error("BigRational: zero to a negative power");
        }
        return BigRational(1) / pow(-exponent);
    }
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(den.get_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    return BigRational(num, den);
}

std::string BigRational::str() const
{
    if (is_integer()) {
        return v_.get_num().get_str();
    }
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

double BigRational::to_double() const
{
    Mpfr x(64);
    mpfr_set_q(x.get(), v_.get_mpq_t(), MPFR_RNDN);
    return mpfr_get_d(x.get(), MPFR_RNDN);
}

RationalInterval::RationalInterval(BigRational lo_, BigRational hi_)
    : lo(std::move(lo_)), hi(std::move(hi_))
{
    if (hi < lo) {
        throw std::logic_error("RationalInterval: upper endpoint below lower endpoint");
    }
}

// --- ExactConstant ---------------------------------------------------------

ExactConstant::ExactConstant(BigRational q, int two_half_exp, int pi_half_exp)
    : q_(std::move(q)), h_(two_half_exp), p_(pi_half_exp)
{
    if (q_.is_zero()) {
        h_ = 0;
        p_ = 0;
        return;
    }
    int whole = floor_div2(h_);
    h_ -= 2 * whole;
    if (whole > 0) {
        q_ *= BigRational(pow2(static_cast<unsigned long>(whole)));
    } else if (whole < 0) {
        q_ /= BigRational(pow2(static_cast<unsigned long>(-whole)));
    }
}

ExactConstant normalize(const ExactConstant& c)
{
    return ExactConstant(c.q(), c.two_half_exp(), c.pi_half_exp());
}

ExactConstant operator*(const ExactConstant& a, const ExactConstant& b)
{
    return ExactConstant(a.q_ * b.q_, a.h_ + b.h_, a.p_ + b.p_);
}

ExactConstant operator/(const ExactConstant& a, const ExactConstant& b)
{
    if (b.is_zero()) {
        throw std::domain_error("ExactConstant: division by zero");
    }
    return ExactConstant(a.q_ / b.q_, a.h_ - b.h_, a.p_ - b.p_);
}

std::string ExactConstant::field_str() const
{
    std::ostringstream os;
    os << q_.str() << "·2^(" << h_ << "/2)·π^(" << p_ << "/2)";
    return os.str();
}

std::string ExactConstant::str() const
{
    if (is_rational()) {
        return q_.str();
    }
    if (p_ != 0 && p_ != 1) {
        return field_str();
    }
    // |q|·2^(h/2)·π^(p/2) = √(q²·2^h·π^p)
    BigRational inner = q_ * q_ * BigRational(h_ == 1 ? 2 : 1);
    std::string num = inner.numerator().get_str();
    std::string den = inner.denominator().get_str();
    std::string body;
    if (p_ == 1) {
        body = (num == "1" ? std::string() : num) + "π";
    } else {
        body = num;
    }
    if (den != "1") {
        body += "/" + den;
    }
    return std::string(q_.sign() < 0 ? "-" : "") + "√(" + body + ")";
}

RationalInterval ExactConstant::enclose(long bits) const
{
    if (is_zero()) {
        return {BigRational(0), BigRational(0)};
    }
    Mpfr lo(bits), hi(bits);
    mpfr_set_ui(lo.get(), 1, MPFR_RNDD);
    mpfr_set_ui(hi.get(), 1, MPFR_RNDU);

    if (h_ == 1) {
        mpfr_sqrt_ui(lo.get(), 2, MPFR_RNDD);
        mpfr_sqrt_ui(hi.get(), 2, MPFR_RNDU);
    }
    if (p_ != 0) {
        Mpfr spl(bits), sph(bits), fl(bits), fh(bits);
        mpfr_const_pi(spl.get(), MPFR_RNDD);
        mpfr_const_pi(sph.get(), MPFR_RNDU);
        mpfr_sqrt(spl.get(), spl.get(), MPFR_RNDD);
        mpfr_sqrt(sph.get(), sph.get(), MPFR_RNDU);
        auto e = static_cast<unsigned long>(p_ > 0 ? p_ : -p_);
        if (p_ > 0) {
            mpfr_pow_ui(fl.get(), spl.get(), e, MPFR_RNDD);
            mpfr_pow_ui(fh.get(), sph.get(), e, MPFR_RNDU);
        } else {
            Mpfr t(bits);
            mpfr_pow_ui(t.get(), sph.get(), e, MPFR_RNDU);
            mpfr_ui_div(fl.get(), 1, t.get(), MPFR_RNDD);
            mpfr_pow_ui(t.get(), spl.get(), e, MPFR_RNDD);
            mpfr_ui_div(fh.get(), 1, t.get(), MPFR_RNDU);
        }
        mpfr_mul(lo.get(), lo.get(), fl.get(), MPFR_RNDD);
        mpfr_mul(hi.get(), hi.get(), fh.get(), MPFR_RNDU);
    }
    // Both factor bounds are positive; the rational factor is applied exactly.
    BigRational flo(lo.to_rational());
    BigRational fhi(hi.to_rational());
    if (q_.sign() > 0) {
        return {q_ * flo, q_ * fhi};
    }
    return {q_ * fhi, q_ * flo};
}

double ExactConstant::log_abs() const
{
    if (is_zero()) {
        throw std::domain_error("ExactConstant::log_abs of zero");
    }
    Mpfr x(128);
    mpfr_set_q(x.get(), q_.abs().raw().get_mpq_t(), MPFR_RNDN);
    mpfr_log(x.get(), x.get(), MPFR_RNDN);
    double r = mpfr_get_d(x.get(), MPFR_RNDN);
    return r + 0.5 * h_ * std::log(2.0) + 0.5 * p_ * std::log(M_PI);
}

double ExactConstant::to_double() const
{
    if (is_zero()) {
        return 0.0;
    }
    Mpfr x(128), f(128);
    mpfr_set_q(x.get(), q_.raw().get_mpq_t(), MPFR_RNDN);
    if (h_ == 1) {
        mpfr_sqrt_ui(f.get(), 2, MPFR_RNDN);
        mpfr_mul(x.get(), x.get(), f.get(), MPFR_RNDN);
    }
    if (p_ != 0) {
        mpfr_const_pi(f.get(), MPFR_RNDN);
        mpfr_sqrt(f.get(), f.get(), MPFR_RNDN);
        mpfr_pow_si(f.get(), f.get(), p_, MPFR_RNDN);
        mpfr_mul(x.get(), x.get(), f.get(), MPFR_RNDN);
    }
    return mpfr_get_d(x.get(), MPFR_RNDN);
}

// --- Gamma and factorials --------------------------------------------------

BigInt factorial(long n)
{
    if (n < 0) {
        throw std::invalid_argument("factorial of a negative number");
    }
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

ExactConstant half_gamma(long two_x)
{
    if (two_x < 1) {
        throw std::invalid_argument("half_gamma: argument must be a positive half-integer");
    }
    if (two_x % 2 == 0) {
        return ExactConstant(BigRational(factorial(two_x / 2 - 1)));
    }
    // Gamma(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi)
    long m = (two_x - 1) / 2;
    BigRational q(factorial(2 * m), pow2(static_cast<unsigned long>(2 * m)) * factorial(m));
    return ExactConstant(q, 0, 1);
}

// --- Decimal output --------------------------------------------------------

DecimalApprox to_decimal(const ExactConstant& c, int digits)
{
    if (digits < 1 || digits > 10000) {
        throw std::invalid_argument("to_decimal: digits must lie in [1, 10000]");
    }
    const BigInt scale = pow10(static_cast<unsigned long>(digits));
    const BigRational ulp(BigInt(1), scale);

    RationalInterval box;
    if (!c.is_zero()) {
        // Absolute accuracy needs the magnitude bits on top of the fraction bits.
        long magnitude = bit_length(c.q().numerator()) - bit_length(c.q().denominator())
                       + 1 + c.two_half_exp() + std::abs(c.pi_half_exp());
        long bits = static_cast<long>(std::ceil(digits * 3.3219280948873623))
                  + std::max(0L, magnitude) + 64;
        // Tighten until the enclosure is far below one unit in the last place.
        while (true) {
            box = c.enclose(bits);
            if (box.width() * BigRational(16) < ulp) {
                break;
            }
            bits *= 2;
        }
    }

    BigRational mid = box.midpoint();
    // Round the midpoint half-up at `digits` places.
    mpq_class shifted = mid.raw() * mpq_class(scale) + mpq_class(1, 2);
    BigInt rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());

    BigRational approx(rounded, scale);
    BigRational err = (approx - mid).abs() + box.width() / BigRational(2);
    if (!(err < ulp)) {
        throw std::logic_error("to_decimal: failed to certify error bound");
    }

    BigInt mag = rounded < 0 ? BigInt(-rounded) : rounded;
    std::string body = mag.get_str();
    if (body.size() <= static_cast<size_t>(digits)) {
        body.insert(0, static_cast<size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<size_t>(digits), ".");
    if (rounded < 0) {
        body.insert(0, "-");
    }
    return {body, err};
}

}  // namespace iselab
