#ifndef EXPDEF_BALL_HPP
#define EXPDEF_BALL_HPP

#include "bigfloat.hpp"

#include <stdexcept>
#include <string>

namespace expdef {

namespace detail {

constexpr mpfr_prec_t kRadiusPrec = 64;

/// Upper bound on the rounding error of a round-to-nearest result m at precision p.
inline BigFloat rounding_error(const BigFloat& m)
{
    BigFloat am = abs(m, MPFR_RNDU, kRadiusPrec);
    return mul(am, BigFloat::pow2(1 - static_cast<long>(m.precision()), kRadiusPrec), MPFR_RNDU,
               kRadiusPrec);
}

inline BigFloat add_up(const BigFloat& a, const BigFloat& b) { return add(a, b, MPFR_RNDU, kRadiusPrec); }
inline BigFloat mul_up(const BigFloat& a, const BigFloat& b) { return mul(a, b, MPFR_RNDU, kRadiusPrec); }
inline BigFloat abs_up(const BigFloat& a) { return abs(a, MPFR_RNDU, kRadiusPrec); }

} // namespace detail

/*
 * Real ball [mid - rad, mid + rad]. The midpoint lives at the working
 * precision; the radius is a 64-bit upper bound maintained with upward
 * rounding, so every operation returns a ball containing the exact result
 * for all inputs in the operand balls.
 */
class RealBall {
public:
    explicit RealBall(mpfr_prec_t prec = 128) : mid_(prec), rad_(detail::kRadiusPrec) {}

    RealBall(BigFloat mid, BigFloat rad) : mid_(std::move(mid)), rad_(std::move(rad)) {}

    /// Exact rational, enclosed after rounding.
    RealBall(const Rat& q, mpfr_prec_t prec) : mid_(q, prec), rad_(detail::rounding_error(mid_)) {}

    static RealBall pi(mpfr_prec_t prec)
    {
        BigFloat m = BigFloat::pi(prec);
        return {m, detail::rounding_error(m)};
    }

    const BigFloat& mid() const { return mid_; }
    const BigFloat& rad() const { return rad_; }
    mpfr_prec_t precision() const { return mid_.precision(); }

    /// Upper bound of |x| over the ball.
    BigFloat mag() const { return detail::add_up(detail::abs_up(mid_), rad_); }

    /// Lower bound of |x| over the ball (zero when the ball straddles zero).
    BigFloat mig() const
    {
        BigFloat lo = sub(abs(mid_, MPFR_RNDD, detail::kRadiusPrec), rad_, MPFR_RNDD, detail::kRadiusPrec);
        return lo.sign() > 0 ? lo : BigFloat(detail::kRadiusPrec);
    }

    bool contains_zero() const { return mig().is_zero(); }

    bool contains(const BigFloat& x) const
    {
        BigFloat d = abs(sub(x, mid_, MPFR_RNDN, mid_.precision() + 8), MPFR_RNDD, detail::kRadiusPrec);
        return d <= rad_;
    }

    friend RealBall operator+(const RealBall& a, const RealBall& b)
    {
        BigFloat m = a.mid_ + b.mid_;
        BigFloat r = detail::add_up(detail::add_up(a.rad_, b.rad_), detail::rounding_error(m));
        return {std::move(m), std::move(r)};
    }

    friend RealBall operator-(const RealBall& a) { return {-a.mid_, a.rad_}; }

    friend RealBall operator-(const RealBall& a, const RealBall& b) { return a + (-b); }

    friend RealBall operator*(const RealBall& a, const RealBall& b)
    {
        using namespace detail;
        BigFloat m = a.mid_ * b.mid_;
        BigFloat r = add_up(mul_up(abs_up(a.mid_), b.rad_), mul_up(abs_up(b.mid_), a.rad_));
        r = add_up(r, mul_up(a.rad_, b.rad_));
        r = add_up(r, rounding_error(m));
        return {std::move(m), std::move(r)};
    }

    /// 1/x; throws if the ball contains zero.
    RealBall inverse() const
    {
        using namespace detail;
        BigFloat lo = mig();
        if (lo.is_zero())
            throw std::domain_error("inverse of a ball containing zero");
        BigFloat m = BigFloat(1, mid_.precision()) / mid_;
        BigFloat am_lo = abs(mid_, MPFR_RNDD, kRadiusPrec);
        BigFloat denom = mul(am_lo, lo, MPFR_RNDD, kRadiusPrec);
        BigFloat r = div(rad_, denom, MPFR_RNDU, kRadiusPrec);
        r = add_up(r, rounding_error(m));
        return {std::move(m), std::move(r)};
    }

    RealBall exp() const
    {
        using namespace detail;
        BigFloat m = expdef::exp(mid_);
        // |e^(m+d) - e^m| <= e^m (e^r - 1), plus the rounding of e^m itself.
        BigFloat em_up = add_up(abs_up(m), rounding_error(m));
        BigFloat growth = expm1(rad_, MPFR_RNDU, kRadiusPrec);
        BigFloat r = add_up(mul_up(em_up, growth), rounding_error(m));
        return {std::move(m), std::move(r)};
    }

    RealBall cos() const { return lipschitz_unit(expdef::cos(mid_)); }
    RealBall sin() const { return lipschitz_unit(expdef::sin(mid_)); }

    std::string to_string(int digits = 20) const
    {
        return mid_.to_string(digits) + " +/- " + rad_.to_string(3);
    }

private:
    // For functions with |f'| <= 1: the input radius passes through unchanged.
    RealBall lipschitz_unit(BigFloat m) const
    {
        using namespace detail;
        BigFloat ulp_abs = BigFloat::pow2(1 - static_cast<long>(m.precision()), kRadiusPrec);
        BigFloat r = add_up(add_up(rad_, rounding_error(m)), ulp_abs);
        return {std::move(m), std::move(r)};
    }

    BigFloat mid_;
    BigFloat rad_;
};

/// Rectangular complex ball: a pair of real balls.
class ComplexBall {
public:
    explicit ComplexBall(mpfr_prec_t prec = 128) : re_(prec), im_(prec) {}
    ComplexBall(RealBall re, RealBall im) : re_(std::move(re)), im_(std::move(im)) {}

    static ComplexBall from_rat(const Rat& re, const Rat& im, mpfr_prec_t prec)
    {
        return {RealBall(re, prec), RealBall(im, prec)};
    }

    /// e^(2 pi i q) for rational q.
    static ComplexBall unit_root(const Rat& q, mpfr_prec_t prec)
    {
        Rat reduced = frac(q);
        if (reduced == 0)
            return from_rat(1, 0, prec);
        RealBall angle = RealBall::pi(prec + 8) * RealBall(Rat(2 * reduced), prec + 8);
        return {angle.cos(), angle.sin()};
    }

    const RealBall& re() const { return re_; }
    const RealBall& im() const { return im_; }
    mpfr_prec_t precision() const { return re_.precision(); }

    /// Upper bound of |z - mid| over the ball.
    BigFloat radius() const { return detail::add_up(re_.rad(), im_.rad()); }

    /// Upper bound of |z| over the ball.
    BigFloat mag() const
    {
        BigFloat a = re_.mag(), b = im_.mag();
        BigFloat s = detail::add_up(detail::mul_up(a, a), detail::mul_up(b, b));
        return sqrt(s, MPFR_RNDU, detail::kRadiusPrec);
    }

    /// Lower bound of |z| over the ball.
    BigFloat mig() const
    {
        BigFloat a = re_.mig(), b = im_.mig();
        BigFloat s = add(mul(a, a, MPFR_RNDD, detail::kRadiusPrec), mul(b, b, MPFR_RNDD, detail::kRadiusPrec),
                         MPFR_RNDD, detail::kRadiusPrec);
        return sqrt(s, MPFR_RNDD, detail::kRadiusPrec);
    }

    bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }

    bool contains(const BigComplex& z) const { return re_.contains(z.re) && im_.contains(z.im); }

    BigComplex midpoint() const { return {re_.mid(), im_.mid()}; }

    friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b)
    {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend ComplexBall operator-(const ComplexBall& a) { return {-a.re_, -a.im_}; }
    friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) { return a + (-b); }
    friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b)
    {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }

    ComplexBall conj() const { return {re_, -im_}; }

    ComplexBall inverse() const
    {
        RealBall n = re_ * re_ + im_ * im_;
        RealBall inv = n.inverse();
        return {re_ * inv, -(im_ * inv)};
    }

    ComplexBall exp() const
    {
        RealBall scale = re_.exp();
        return {scale * im_.cos(), scale * im_.sin()};
    }

    std::string to_string(int digits = 20) const
    {
        return "(" + re_.to_string(digits) + ") + (" + im_.to_string(digits) + ")i";
    }

private:
    RealBall re_, im_;
};

} // namespace expdef

#endif
