#ifndef EXPDEF_BIGFLOAT_HPP
#define EXPDEF_BIGFLOAT_HPP

#include "rational.hpp"

#include <mpfr.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace expdef {

/*
 * Owning wrapper around mpfr_t. Every value carries its own precision;
 * binary operators produce a result at the larger operand precision, rounded
 * to nearest. Directed rounding is available through the free functions that
 * take an explicit mpfr_rnd_t (used by the ball arithmetic).
 */
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec), mpfr_set_zero(v_, 1); }

    BigFloat(long value, mpfr_prec_t prec) : BigFloat(prec) { mpfr_set_si(v_, value, MPFR_RNDN); }

    BigFloat(int value, mpfr_prec_t prec) : BigFloat(static_cast<long>(value), prec) {}

    BigFloat(double value, mpfr_prec_t prec) : BigFloat(prec) { mpfr_set_d(v_, value, MPFR_RNDN); }

    BigFloat(const Rat& value, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN) : BigFloat(prec)
    {
        mpfr_set_q(v_, value.get_mpq_t(), rnd);
    }

    BigFloat(const BigInt& value, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN) : BigFloat(prec)
    {
        mpfr_set_z(v_, value.get_mpz_t(), rnd);
    }

    BigFloat(const BigFloat& o) : BigFloat(o.precision()) { mpfr_set(v_, o.v_, MPFR_RNDN); }

    BigFloat(BigFloat&& o) noexcept : BigFloat(mpfr_prec_t{MPFR_PREC_MIN}) { mpfr_swap(v_, o.v_); }

    BigFloat& operator=(const BigFloat& o)
    {
        if (this != &o) {
            mpfr_set_prec(v_, o.precision());
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    BigFloat& operator=(BigFloat&& o) noexcept
    {
        mpfr_swap(v_, o.v_);
        return *this;
    }

    ~BigFloat() { mpfr_clear(v_); }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    static BigFloat pi(mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN)
    {
        BigFloat r(prec);
        mpfr_const_pi(r.v_, rnd);
        return r;
    }

    /// 2^e exactly.
    static BigFloat pow2(long e, mpfr_prec_t prec = 64)
    {
        BigFloat r(prec);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    /// Scientific notation with the given number of significant digits.
    std::string to_string(int digits = 20) const
    {
        if (mpfr_nan_p(v_))
            return "nan";
        if (mpfr_inf_p(v_))
            return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
        char* buf = nullptr;
        std::string fmt = "%." + std::to_string(std::max(1, digits - 1)) + "Re";
        mpfr_asprintf(&buf, fmt.c_str(), v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

private:
    mpfr_t v_;
};

namespace detail {

template <class Op>
BigFloat binary(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd, Op op, mpfr_prec_t prec = 0)
{
    BigFloat r(prec ? prec : std::max(a.precision(), b.precision()));
    op(r.get(), a.get(), b.get(), rnd);
    return r;
}

template <class Op>
BigFloat unary(const BigFloat& a, mpfr_rnd_t rnd, Op op, mpfr_prec_t prec = 0)
{
    BigFloat r(prec ? prec : a.precision());
    op(r.get(), a.get(), rnd);
    return r;
}

} // namespace detail

inline BigFloat add(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd, mpfr_prec_t prec = 0)
{
    return detail::binary(a, b, rnd, mpfr_add, prec);
}
inline BigFloat sub(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd, mpfr_prec_t prec = 0)
{
    return detail::binary(a, b, rnd, mpfr_sub, prec);
}
inline BigFloat mul(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd, mpfr_prec_t prec = 0)
{
    return detail::binary(a, b, rnd, mpfr_mul, prec);
}
inline BigFloat div(const BigFloat& a, const BigFloat& b, mpfr_rnd_t rnd, mpfr_prec_t prec = 0)
{
    return detail::binary(a, b, rnd, mpfr_div, prec);
}
inline BigFloat abs(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN, mpfr_prec_t prec = 0)
{
    return detail::unary(a, rnd, mpfr_abs, prec);
}
inline BigFloat sqrt(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN, mpfr_prec_t prec = 0)
{
    return detail::unary(a, rnd, mpfr_sqrt, prec);
}
inline BigFloat exp(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN, mpfr_prec_t prec = 0)
{
    return detail::unary(a, rnd, mpfr_exp, prec);
}
inline BigFloat expm1(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN, mpfr_prec_t prec = 0)
{
    return detail::unary(a, rnd, mpfr_expm1, prec);
}
inline BigFloat log(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN, mpfr_prec_t prec = 0)
{
    return detail::unary(a, rnd, mpfr_log, prec);
}
inline BigFloat sin(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN, mpfr_prec_t prec = 0)
{
    return detail::unary(a, rnd, mpfr_sin, prec);
}
inline BigFloat cos(const BigFloat& a, mpfr_rnd_t rnd = MPFR_RNDN, mpfr_prec_t prec = 0)
{
    return detail::unary(a, rnd, mpfr_cos, prec);
}
inline BigFloat atan2(const BigFloat& y, const BigFloat& x, mpfr_rnd_t rnd = MPFR_RNDN)
{
    return detail::binary(y, x, rnd, mpfr_atan2);
}

inline BigFloat operator+(const BigFloat& a, const BigFloat& b) { return add(a, b, MPFR_RNDN); }
inline BigFloat operator-(const BigFloat& a, const BigFloat& b) { return sub(a, b, MPFR_RNDN); }
inline BigFloat operator*(const BigFloat& a, const BigFloat& b) { return mul(a, b, MPFR_RNDN); }
inline BigFloat operator/(const BigFloat& a, const BigFloat& b) { return div(a, b, MPFR_RNDN); }
inline BigFloat operator-(const BigFloat& a) { return detail::unary(a, MPFR_RNDN, mpfr_neg); }

inline bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
inline bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }
inline bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
inline bool operator>=(const BigFloat& a, const BigFloat& b) { return b <= a; }
inline bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

/// Largest integer not above a (the value must be finite).
inline BigInt floor_to_int(const BigFloat& a)
{
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), a.get(), MPFR_RNDD);
    return z;
}

/// Plain (non-rigorous) complex number over BigFloat, for iterative numerics.
struct BigComplex {
    BigFloat re, im;

    explicit BigComplex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

    mpfr_prec_t precision() const { return re.precision(); }

    BigFloat norm2() const { return re * re + im * im; }
    BigFloat abs() const { return sqrt(norm2()); }
    BigComplex conj() const { return {re, -im}; }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re + b.re, a.im + b.im}; }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re - b.re, a.im - b.im}; }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b)
    {
        BigFloat d = b.norm2();
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    friend BigComplex operator*(const BigFloat& s, const BigComplex& z) { return {s * z.re, s * z.im}; }
};

/// e^(2 pi i num/den), rounded to nearest at the given precision.
inline BigComplex unit_root(long num, long den, mpfr_prec_t prec)
{
    mpfr_prec_t work = prec + 16;
    BigFloat angle = BigFloat::pi(work) * BigFloat(2 * num, work) / BigFloat(den, work);
    return {cos(angle, MPFR_RNDN, prec), sin(angle, MPFR_RNDN, prec)};
}

} // namespace expdef

#endif
