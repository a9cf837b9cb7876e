#ifndef EXPDEF_CYCLOTOMIC_HPP
#define EXPDEF_CYCLOTOMIC_HPP

#include "ball.hpp"
#include "polynomial.hpp"
#include "rational.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <set>
#include <vector>

namespace expdef {

inline long euler_phi(long n)
{
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p)
            continue;
        while (n % p == 0)
            n /= p;
        result -= result / p;
    }
    if (n > 1)
        result -= result / n;
    return result;
}

inline std::vector<long> prime_factors(long n)
{
    std::vector<long> ps;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p)
            continue;
        ps.push_back(p);
        while (n % p == 0)
            n /= p;
    }
    if (n > 1)
        ps.push_back(n);
    return ps;
}

inline long mod(long a, long n)
{
    long r = a % n;
    return r < 0 ? r + n : r;
}

/// Inverse of a modulo n (requires gcd(a, n) = 1).
inline long inverse_mod(long a, long n)
{
    long t = 0, new_t = 1, r = n, new_r = mod(a, n);
    while (new_r != 0) {
        long q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1)
        throw std::domain_error("no inverse modulo " + std::to_string(n));
    return mod(t, n);
}

/*
 * Exact element of Q(zeta_n), stored as the coefficient vector of
 * sum_j c_j zeta_n^j over the power basis {zeta_n^0, ..., zeta_n^(phi(n)-1)}.
 *
 * Invariant: the level is the conductor of the element, i.e. the least n for
 * which it lies in Q(zeta_n). Every public operation re-establishes this, so
 * operator== is mathematical equality. Rationals live at level 1.
 */
class CycNum {
public:
    CycNum() : level_(1), c_{Rat(0)} {}
    explicit CycNum(const Rat& q) : level_(1), c_{q} {}
    explicit CycNum(long q) : level_(1), c_{Rat(q)} {}
    explicit CycNum(int q) : CycNum(static_cast<long>(q)) {}

    /// Element sum_j coeffs[j] zeta_n^j for any coefficient count; exponents are taken mod n.
    static CycNum from_exponents(long n, const std::vector<Rat>& coeffs)
    {
        if (n < 1)
            throw std::invalid_argument("level must be positive");
        std::vector<Rat> folded(static_cast<std::size_t>(n), Rat(0));
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            folded[static_cast<std::size_t>(static_cast<long>(j) % n)] += coeffs[j];
        return canonical(n, reduce_mod_phi(n, std::move(folded)));
    }

    /// Element from power-basis coordinates; coeffs must have length phi(n).
    static CycNum from_coeffs(long n, std::vector<Rat> coeffs)
    {
        if (n < 1)
            throw std::invalid_argument("level must be positive");
        if (static_cast<long>(coeffs.size()) != euler_phi(n))
            throw std::invalid_argument("coefficient count must equal phi(level)");
        return canonical(n, std::move(coeffs));
    }

    /// zeta_n^k.
    static CycNum zeta(long n, long k = 1)
    {
        if (n < 1)
            throw std::invalid_argument("level must be positive");
        std::vector<Rat> v(static_cast<std::size_t>(mod(k, n)) + 1, Rat(0));
        v.back() = 1;
        return from_exponents(n, v);
    }

    long level() const { return level_; }
    const std::vector<Rat>& coeffs() const { return c_; }

    bool is_zero() const { return level_ == 1 && c_[0] == 0; }
    bool is_rational() const { return level_ == 1; }

    /// The rational value; throws unless is_rational().
    const Rat& rational() const
    {
        if (!is_rational())
            throw std::domain_error("cyclotomic number is not rational");
        return c_[0];
    }

    /// Power-basis coordinates at a multiple N of the level (not canonical).
    std::vector<Rat> coords_at(long big) const
    {
        if (big % level_ != 0)
            throw std::invalid_argument("target level must be a multiple of the level");
        if (big == level_)
            return c_;
        const long step = big / level_;
        std::vector<Rat> v(static_cast<std::size_t>(big), Rat(0));
        for (std::size_t j = 0; j < c_.size(); ++j)
            v[static_cast<std::size_t>(static_cast<long>(j) * step)] = c_[j];
        return reduce_mod_phi(big, std::move(v));
    }

    /// Coordinates at level N (a multiple of the level) over all N exponents, unreduced.
    std::vector<Rat> exponent_vector_at(long big) const
    {
        if (big % level_ != 0)
            throw std::invalid_argument("target level must be a multiple of the level");
        const long step = big / level_;
        std::vector<Rat> v(static_cast<std::size_t>(big), Rat(0));
        for (std::size_t j = 0; j < c_.size(); ++j)
            v[static_cast<std::size_t>(static_cast<long>(j) * step)] = c_[j];
        return v;
    }

    friend CycNum operator+(const CycNum& a, const CycNum& b)
    {
        if (a.level_ == b.level_) {
            std::vector<Rat> c(a.c_.size());
            for (std::size_t i = 0; i < c.size(); ++i)
                c[i] = a.c_[i] + b.c_[i];
            return canonical(a.level_, std::move(c));
        }
        long big = std::lcm(a.level_, b.level_);
        auto x = a.coords_at(big);
        auto y = b.coords_at(big);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] += y[i];
        return canonical(big, std::move(x));
    }

    friend CycNum operator-(const CycNum& a)
    {
        CycNum r = a;
        for (auto& v : r.c_)
            v = -v;
        return r;
    }

    friend CycNum operator-(const CycNum& a, const CycNum& b) { return a + (-b); }

    friend CycNum operator*(const CycNum& a, const CycNum& b)
    {
        if (a.is_rational())
            return scale(b, a.c_[0]);
        if (b.is_rational())
            return scale(a, b.c_[0]);
        // Integer convolution over a common denominator avoids a gcd per product.
        long big = std::lcm(a.level_, b.level_);
        BigInt dx, dy;
        auto x = integer_coords(a.coords_at(big), dx);
        auto y = integer_coords(b.coords_at(big), dy);
        std::vector<BigInt> prod(x.size() + y.size() - 1, BigInt(0));
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0)
                continue;
            for (std::size_t j = 0; j < y.size(); ++j)
                if (y[j] != 0)
                    mpz_addmul(prod[i + j].get_mpz_t(), x[i].get_mpz_t(), y[j].get_mpz_t());
        }
        const std::size_t phi = static_cast<std::size_t>(euler_phi(big));
        if (prod.size() > phi) {
            const RatPoly cyc = cyclotomic_poly(static_cast<std::size_t>(big));
            const auto& pc = cyc.coeffs();
            for (std::size_t k = prod.size(); k-- > phi;) {
                if (prod[k] == 0)
                    continue;
                const BigInt t = prod[k];
                const std::size_t shift = k - phi;
                for (std::size_t j = 0; j <= phi; ++j)
                    if (pc[j] != 0)
                        mpz_submul(prod[shift + j].get_mpz_t(), t.get_mpz_t(), pc[j].get_num_mpz_t());
            }
        }
        prod.resize(phi);
        const BigInt den = dx * dy;
        std::vector<Rat> c(phi);
        for (std::size_t k = 0; k < phi; ++k)
            c[k] = make_rat(prod[k], den);
        return canonical(big, std::move(c));
    }

    friend CycNum operator/(const CycNum& a, const CycNum& b) { return a * inverse(b); }

    CycNum& operator+=(const CycNum& o) { return *this = *this + o; }
    CycNum& operator-=(const CycNum& o) { return *this = *this - o; }
    CycNum& operator*=(const CycNum& o) { return *this = *this * o; }

    /// Inverse by solving (multiplication by a) y = 1 with fraction-free elimination.
    friend CycNum inverse(const CycNum& a)
    {
        if (a.is_zero())
            throw std::domain_error("inverse of zero");
        if (a.is_rational())
            return CycNum(Rat(1) / a.c_[0]);
        const std::size_t phi = a.c_.size();
        const auto& pc = cyclotomic_poly(static_cast<std::size_t>(a.level_)).coeffs();
        BigInt den;
        std::vector<BigInt> col = integer_coords(a.c_, den);
        // m[i] holds row i of [M | e_0]; column j of M is a * zeta^j.
        std::vector<std::vector<BigInt>> m(phi, std::vector<BigInt>(phi + 1, BigInt(0)));
        for (std::size_t j = 0; j < phi; ++j) {
            for (std::size_t i = 0; i < phi; ++i)
                m[i][j] = col[i];
            BigInt top = col[phi - 1];
            for (std::size_t i = phi - 1; i > 0; --i)
                col[i] = col[i - 1];
            col[0] = 0;
            if (top != 0)
                for (std::size_t i = 0; i < phi; ++i)
                    if (pc[i] != 0)
                        mpz_submul(col[i].get_mpz_t(), top.get_mpz_t(), pc[i].get_num_mpz_t());
        }
        m[0][phi] = 1;
        BigInt prev = 1;
        for (std::size_t k = 0; k < phi; ++k) {
            std::size_t piv = k;
            while (piv < phi && m[piv][k] == 0)
                ++piv;
            if (piv == phi)
                throw std::logic_error("singular multiplication matrix");
            std::swap(m[k], m[piv]);
            for (std::size_t i = k + 1; i < phi; ++i) {
                for (std::size_t j = k + 1; j <= phi; ++j) {
                    BigInt t = m[k][k] * m[i][j];
                    mpz_submul(t.get_mpz_t(), m[i][k].get_mpz_t(), m[k][j].get_mpz_t());
                    mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                }
                m[i][k] = 0;
            }
            prev = m[k][k];
        }
        std::vector<Rat> y(phi);
        for (std::size_t k = phi; k-- > 0;) {
            Rat acc(m[k][phi]);
            for (std::size_t j = k + 1; j < phi; ++j)
                if (m[k][j] != 0)
                    acc -= Rat(m[k][j]) * y[j];
            y[k] = acc / Rat(m[k][k]);
        }
        for (auto& v : y)
            v *= den;
        return canonical(a.level_, std::move(y));
    }

    /// a^e for any integer e (negative powers invert).
    friend CycNum pow(const CycNum& a, long e)
    {
        CycNum base = e < 0 ? inverse(a) : a;
        unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
        CycNum acc(1);
        while (k) {
            if (k & 1)
                acc *= base;
            k >>= 1;
            if (k)
                base *= base;
        }
        return acc;
    }

    friend bool operator==(const CycNum& a, const CycNum& b) { return a.level_ == b.level_ && a.c_ == b.c_; }
    friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

    /// Arbitrary but fixed total order (level, then coordinates), for sorting and deduplication.
    friend bool operator<(const CycNum& a, const CycNum& b)
    {
        if (a.level_ != b.level_)
            return a.level_ < b.level_;
        return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
    }

    /// The automorphism zeta_n -> zeta_n^k; requires gcd(k, n) = 1.
    friend CycNum galois(long k, const CycNum& a)
    {
        const long n = a.level_;
        if (std::gcd(mod(k, n), n) != 1)
            throw std::invalid_argument("galois: k = " + std::to_string(k) + " is not coprime to level " +
                                        std::to_string(n));
        if (n == 1)
            return a;
        const long kk = mod(k, n);
        std::vector<Rat> v(static_cast<std::size_t>(n), Rat(0));
        for (std::size_t j = 0; j < a.c_.size(); ++j)
            v[static_cast<std::size_t>(static_cast<long>(j) * kk % n)] = a.c_[j];
        // Automorphisms preserve the conductor, so the level stays canonical.
        CycNum r;
        r.level_ = n;
        r.c_ = reduce_mod_phi(n, std::move(v));
        return r;
    }

    /// Representation at the least level m | n with the element in Q(zeta_m).
    /// Values are always kept reduced, so this is the identity on CycNum; it is
    /// exposed for raw coordinates through reduce_level(n, coords).
    friend CycNum reduce_level(const CycNum& a) { return canonical(a.level_, a.c_); }

    /// Reduce mod Phi_n a coefficient vector over exponents 0..len-1.
    static std::vector<Rat> reduce_mod_phi(long n, std::vector<Rat> v)
    {
        const std::size_t phi = static_cast<std::size_t>(euler_phi(n));
        if (v.size() > phi) {
            const RatPoly& cyc = cyclotomic_poly(static_cast<std::size_t>(n));
            const auto& pc = cyc.coeffs();
            // Phi_n is monic; eliminate from the top down.
            for (std::size_t k = v.size(); k-- > phi;) {
                if (v[k] == 0)
                    continue;
                Rat t = v[k];
                const std::size_t shift = k - phi;
                for (std::size_t j = 0; j <= phi; ++j)
                    if (pc[j] != 0)
                        v[shift + j] -= t * pc[j];
            }
        }
        v.resize(phi, Rat(0));
        return v;
    }

private:
    static std::vector<BigInt> integer_coords(const std::vector<Rat>& v, BigInt& den)
    {
        den = 1;
        for (const auto& q : v)
            if (q != 0)
                den = lcm(den, BigInt(q.get_den()));
        std::vector<BigInt> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0)
                out[i] = v[i].get_num() * (den / v[i].get_den());
        return out;
    }

    static CycNum scale(const CycNum& a, const Rat& s)
    {
        if (s == 0)
            return CycNum();
        CycNum r = a;
        for (auto& v : r.c_)
            v *= s;
        return r;
    }

    // Attempts to write an element of Q(zeta_n) inside Q(zeta_(n/p)).
    static bool descend(long n, long p, const std::vector<Rat>& c, std::vector<Rat>& out)
    {
        const long small = n / p;
        if (small % p == 0) {
            // Phi_n(x) = Phi_(n/p)(x^p): the subfield is spanned by exponents divisible by p.
            for (std::size_t j = 0; j < c.size(); ++j)
                if (static_cast<long>(j) % p != 0 && c[j] != 0)
                    return false;
            out.assign(static_cast<std::size_t>(euler_phi(small)), Rat(0));
            for (std::size_t k = 0; k < out.size(); ++k)
                out[k] = c[k * static_cast<std::size_t>(p)];
            return true;
        }
        // n = p r with gcd(p, r) = 1: zeta_n^j = zeta_p^(j s) zeta_r^(j t) where r s + p t = 1.
        const long r = small;
        const long s = inverse_mod(r, p);
        const long t = r == 1 ? 0 : inverse_mod(p, r);
        std::vector<std::vector<Rat>> parts(static_cast<std::size_t>(p),
                                            std::vector<Rat>(static_cast<std::size_t>(r), Rat(0)));
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (c[j] == 0)
                continue;
            const long jj = static_cast<long>(j);
            parts[static_cast<std::size_t>(jj * s % p)][static_cast<std::size_t>(jj * t % r)] += c[j];
        }
        for (auto& part : parts)
            part = reduce_mod_phi(r, std::move(part));
        // {zeta_p^i : i < p-1} is a basis of Q(zeta_n) over Q(zeta_r).
        const auto& last = parts.back();
        for (long i = 1; i + 1 < p; ++i)
            if (parts[static_cast<std::size_t>(i)] != last)
                return false;
        out = parts.front();
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] -= last[k];
        return true;
    }

    static CycNum canonical(long n, std::vector<Rat> c)
    {
        bool moved = true;
        while (moved && n > 1) {
            moved = false;
            for (long p : prime_factors(n)) {
                std::vector<Rat> out;
                if (descend(n, p, c, out)) {
                    n /= p;
                    c = std::move(out);
                    moved = true;
                    break;
                }
            }
        }
        CycNum r;
        r.level_ = n;
        r.c_ = std::move(c);
        return r;
    }

    long level_;
    std::vector<Rat> c_;
};

/// Canonical element from raw power-basis coordinates at level n.
inline CycNum reduce_level(long n, std::vector<Rat> coords) { return CycNum::from_coeffs(n, std::move(coords)); }

/// e^(2 pi i q) as an exact cyclotomic number.
inline CycNum root_of_unity(const Rat& q)
{
    Rat r = frac(q);
    return CycNum::zeta(to_int64(r.get_den()), to_int64(r.get_num()));
}

/// Complex conjugation on Q^ab: inverts every root of unity.
inline CycNum sigma0(const CycNum& a) { return galois(-1, a); }

/// Distinct Galois conjugates of a, in order of first appearance over k = 1, 2, ...
inline std::vector<CycNum> galois_orbit(const CycNum& a)
{
    const long n = a.level();
    std::vector<CycNum> orbit;
    std::set<CycNum> seen;
    for (long k = 1; k <= n; ++k) {
        if (std::gcd(k, n) != 1)
            continue;
        CycNum b = galois(k, a);
        if (seen.insert(b).second)
            orbit.push_back(std::move(b));
    }
    return orbit;
}

/// Minimal polynomial over Q as the product over the distinct Galois conjugates.
inline RatPoly minpoly(const CycNum& a)
{
    const std::vector<CycNum> orbit = galois_orbit(a);
    using CycPoly = Polynomial<CycNum>;
    CycPoly prod = CycPoly::constant(CycNum(1));
    for (const auto& b : orbit)
        prod *= CycPoly{-b, CycNum(1)};
    std::vector<Rat> c;
    for (const auto& v : prod.coeffs()) {
        if (!v.is_rational())
            throw std::logic_error("minpoly: coefficient failed to descend to Q");
        c.push_back(v.rational());
    }
    RatPoly f(std::move(c));
    if (f.degree() != static_cast<int>(orbit.size()) || f.leading() != 1)
        throw std::logic_error("minpoly: product is not monic of orbit degree");
    return f;
}

/// Rigorous enclosure of the principal embedding zeta_n -> e^(2 pi i / n).
inline ComplexBall numeric_eval(const CycNum& a, long precision_bits)
{
    if (precision_bits < 64)
        throw std::invalid_argument("numeric_eval requires at least 64 bits");
    const mpfr_prec_t work = precision_bits + 32;
    const long n = a.level();
    ComplexBall acc = ComplexBall::from_rat(0, 0, work);
    for (std::size_t j = 0; j < a.coeffs().size(); ++j) {
        const Rat& c = a.coeffs()[j];
        if (c == 0)
            continue;
        ComplexBall z = ComplexBall::unit_root(make_rat(static_cast<long>(j), n), work);
        RealBall cb(c, work);
        acc = acc + ComplexBall(z.re() * cb, z.im() * cb);
    }
    return acc;
}

/// Expression text accepted back by the cyclotomic expression parser, e.g. "z(8) - z(8)^3".
inline std::string to_string(const CycNum& a)
{
    if (a.is_rational())
        return to_string(a.rational());
    std::string out;
    const std::string z = "z(" + std::to_string(a.level()) + ")";
    for (std::size_t j = 0; j < a.coeffs().size(); ++j) {
        Rat c = a.coeffs()[j];
        if (c == 0)
            continue;
        bool neg = c < 0;
        Rat mag = neg ? Rat(-c) : c;
        out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
        if (j == 0) {
            out += to_string(mag);
            continue;
        }
        if (mag != 1)
            out += to_string(mag) + "*";
        out += z;
        if (j > 1)
            out += "^" + std::to_string(j);
    }
    return out;
}

} // namespace expdef

#endif
