#ifndef EXPDEF_RECOGNITION_HPP
#define EXPDEF_RECOGNITION_HPP

#include "rab.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <numbers>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace expdef {

enum class Verdict { RealAbelian, AbelianNotReal, NotAbelianUpToBound };

inline std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::RealAbelian:
        return "RealAbelian";
    case Verdict::AbelianNotReal:
        return "AbelianNotReal";
    case Verdict::NotAbelianUpToBound:
        return "NotAbelianUpToBound";
    }
    return "?";
}

struct RecognitionResult {
    Verdict verdict = Verdict::NotAbelianUpToBound;
    std::optional<CycNum> witness;
    long bound_used = 1;
    // Set when the search gave up early (modulus ceiling or root isolation),
    // so a negative verdict is weaker than "nothing up to the bound".
    bool search_exhausted = false;
    std::string diagnostic;
    long levels_examined = 0;
};

struct RecognitionOptions {
    long max_level = 0;              // 0 selects default_level_bound(f)
    long precision_bits = 256;
    long modulus_bits = 1 << 15;     // CRT modulus ceiling when reconstructing a Galois action
};

namespace detail {

inline BigComplex horner(const std::vector<BigComplex>& c, const BigComplex& z)
{
    BigComplex acc = c.back();
    for (std::size_t i = c.size() - 1; i-- > 0;)
        acc = acc * z + c[i];
    return acc;
}

inline Rat to_rat(const BigFloat& x)
{
    Rat q;
    mpfr_get_q(q.get_mpq_t(), x.get());
    return q;
}

/// Best continued-fraction convergent with denominator <= max_den.
inline Rat best_convergent(const Rat& x, const BigInt& max_den)
{
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Rat r = x;
    for (int guard = 0; guard < 4096; ++guard) {
        BigInt a = floor(r);
        BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den)
            break;
        p0 = p1, q0 = q1, p1 = p2, q1 = q2;
        Rat rest = r - Rat(a);
        if (rest == 0)
            break;
        r = 1 / rest;
    }
    if (q1 == 0)
        return Rat(floor(x));
    return make_rat(p1, q1);
}

inline BigInt integer_abs(const Rat& r)
{
    BigInt n = r.get_num();
    return n < 0 ? BigInt(-n) : n;
}

} // namespace detail

namespace detail {

/// Bits lost to cancellation when evaluating f near x: log2(sum |a_i| |x|^i / (|f'(x)| max(1, |x|))).
inline long cancellation_bits(const std::vector<BigComplex>& c, const std::vector<BigComplex>& dc, const BigComplex& x)
{
    const mpfr_prec_t w = 64;
    BigFloat ax = x.abs(), acc(w);
    for (std::size_t i = c.size(); i-- > 0;)
        acc = acc * ax + c[i].abs();
    BigFloat d = horner(dc, x).abs() * std::max(BigFloat(1, w), ax);
    if (d.is_zero())
        return 1L << 20;
    return std::max(0L, static_cast<long>(mpfr_get_exp(acc.get()) - mpfr_get_exp(d.get())) + 1);
}

inline std::vector<BigComplex> complex_coeffs(const RatPoly& f, mpfr_prec_t w, bool derivative)
{
    std::vector<BigComplex> c;
    for (int i = derivative ? 1 : 0; i <= f.degree(); ++i)
        c.emplace_back(BigFloat(derivative ? Rat(f[i] * i) : f[i], w), BigFloat(w));
    return c;
}

inline BigComplex at_precision(const BigComplex& z, mpfr_prec_t w)
{
    BigComplex x(w);
    mpfr_set(x.re.get(), z.re.get(), MPFR_RNDN);
    mpfr_set(x.im.get(), z.im.get(), MPFR_RNDN);
    return x;
}

/*
 * Newton refinement of isolated simple roots until the relative step is below
 * 2^-target. The working precision per root absorbs the cancellation in
 * evaluating f there.
 */
inline void refine_roots(const RatPoly& f, std::vector<BigComplex>& roots, long target)
{
    const auto c64 = complex_coeffs(f, 64, false), d64 = complex_coeffs(f, 64, true);
    std::map<mpfr_prec_t, std::pair<std::vector<BigComplex>, std::vector<BigComplex>>> cache;
    for (auto& z : roots) {
        const mpfr_prec_t w = target + 64 + cancellation_bits(c64, d64, at_precision(z, 64));
        auto it = cache.find(w);
        if (it == cache.end())
            it = cache.emplace(w, std::make_pair(complex_coeffs(f, w, false), complex_coeffs(f, w, true))).first;
        const auto& [c, dc] = it->second;
        BigComplex x = at_precision(z, w);
        const BigFloat stop = BigFloat::pow2(-target, w), one(1, w);
        for (int iter = 0; iter < 100; ++iter) {
            BigComplex step = horner(c, x) / horner(dc, x);
            x = x - step;
            if (step.abs() <= stop * std::max(one, x.abs()))
                break;
        }
        z = x;
    }
}

} // namespace detail

/*
 * All complex roots of a squarefree polynomial, sorted by real part then
 * imaginary part (parts closer than 2^(-prec/2) count as equal). Aberth
 * iteration isolates the roots at modest precision; Newton then refines them.
 */
inline std::vector<BigComplex> sorted_roots(const RatPoly& f, long precision_bits)
{
    const int n = f.degree();
    if (n < 1)
        throw std::invalid_argument("sorted_roots: polynomial must be nonconstant");
    std::vector<BigComplex> roots;
    if (n == 1) {
        Rat r = -f[0] / f[1];
        roots.emplace_back(BigFloat(r, precision_bits + 64), BigFloat(precision_bits + 64));
        return roots;
    }
    RatPoly g = f.monic();
    long coeff_bits = 0;
    for (const auto& a : g.coeffs())
        coeff_bits = std::max<long>(coeff_bits, static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 2) +
                                                                   mpz_sizeinbase(a.get_den_mpz_t(), 2)));
    mpfr_prec_t w = 96 + coeff_bits;

    // Fujiwara-style radius: 2 max |a_{n-k}|^(1/k).
    double radius = 0;
    for (int k = 1; k <= n; ++k) {
        double a = std::abs(g[n - k].get_d());
        if (a > 0)
            radius = std::max(radius, 2 * std::pow(a, 1.0 / k));
    }
    radius = std::max(radius, 1.0);
    for (int k = 0; k < n; ++k) {
        double ang = 2 * std::numbers::pi * k / n + 0.4;
        roots.emplace_back(BigFloat(radius * std::cos(ang), w), BigFloat(radius * std::sin(ang), w));
    }
    // Isolation only needs a few dozen correct bits; stalls double the working precision.
    bool converged = false;
    for (int attempt = 0; attempt < 6 && !converged; ++attempt, w *= 2) {
        const auto c = detail::complex_coeffs(g, w, false), dc = detail::complex_coeffs(g, w, true);
        for (auto& z : roots)
            z = detail::at_precision(z, w);
        const BigFloat one(1, w);
        const BigFloat stop = BigFloat::pow2(-48, w);
        for (int iter = 0; iter < 1000 && !converged; ++iter) {
            converged = true;
            for (int k = 0; k < n; ++k) {
                BigComplex p = detail::horner(c, roots[k]);
                if (p.norm2().is_zero())
                    continue;
                BigComplex ratio = p / detail::horner(dc, roots[k]);
                BigComplex sum(w);
                for (int j = 0; j < n; ++j)
                    if (j != k)
                        sum = sum + BigComplex(one, BigFloat(w)) / (roots[k] - roots[j]);
                BigComplex step = ratio / (BigComplex(one, BigFloat(w)) - ratio * sum);
                roots[k] = roots[k] - step;
                if (step.abs() > stop * std::max(one, roots[k].abs()))
                    converged = false;
            }
        }
    }
    if (!converged)
        throw std::runtime_error("sorted_roots: root iteration did not converge");
    detail::refine_roots(g, roots, precision_bits + 32);
    for (auto& z : roots)
        z = detail::at_precision(z, precision_bits + 64);
    const BigFloat tol = BigFloat::pow2(-precision_bits / 2, precision_bits + 64);
    std::sort(roots.begin(), roots.end(), [&](const BigComplex& a, const BigComplex& b) {
        BigFloat d = a.re - b.re;
        if (abs(d) > tol)
            return a.re < b.re;
        return a.im < b.im;
    });
    return roots;
}

/// Search ceiling 4 deg^2 prod{p | disc, p <= 10^6}, clamped to hard_max.
inline long default_level_bound(const RatPoly& f, long hard_max = 10000)
{
    if (f.degree() < 1)
        throw std::invalid_argument("default_level_bound: polynomial must be nonconstant");
    if (!is_squarefree(f))
        throw std::invalid_argument("default_level_bound: polynomial is not squarefree");
    auto ints = primitive_integer_coeffs(f);
    std::vector<Rat> rc(ints.begin(), ints.end());
    BigInt disc = detail::integer_abs(discriminant(RatPoly(rc)));
    BigInt bound = 4 * f.degree() * f.degree();
    for (long p = 2; p <= 1000000 && disc > 1; ++p) {
        if (disc % p != 0)
            continue;
        bound *= p;
        while (disc % p == 0)
            disc /= p;
        if (bound > hard_max)
            break;
    }
    return bound > hard_max ? hard_max : to_int64(bound);
}

namespace detail {

using u64 = std::uint64_t;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }

inline u64 powmod(u64 a, u64 e, u64 p)
{
    u64 r = 1 % p;
    for (; e; e >>= 1, a = mulmod(a, a, p))
        if (e & 1)
            r = mulmod(r, a, p);
    return r;
}

inline u64 residue(const BigInt& z, u64 p)
{
    BigInt r = z % BigInt(static_cast<unsigned long>(p));
    if (r < 0)
        r += static_cast<unsigned long>(p);
    return r.get_ui();
}

inline std::optional<u64> residue(const Rat& q, u64 p)
{
    u64 d = residue(BigInt(q.get_den()), p);
    if (d == 0)
        return std::nullopt;
    return mulmod(residue(BigInt(q.get_num()), p), powmod(d, p - 2, p), p);
}

/// Product of two residues of degree < deg f, reduced modulo the monic f.
inline std::vector<u64> mulmod_poly(const std::vector<u64>& a, const std::vector<u64>& b, const std::vector<u64>& f,
                                    u64 p)
{
    using u128 = unsigned __int128;
    const std::size_t d = f.size() - 1;
    std::vector<u128> acc(2 * d, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i])
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            acc[i + j] += static_cast<u128>(a[i]) * b[j];
    }
    for (std::size_t k = acc.size(); k-- > d;) {
        u64 c = static_cast<u64>(acc[k] % p);
        if (!c)
            continue;
        const u64 neg = p - c;
        for (std::size_t i = 0; i < d; ++i)
            acc[k - d + i] += static_cast<u128>(neg) * f[i];
    }
    std::vector<u64> out(d);
    for (std::size_t i = 0; i < d; ++i)
        out[i] = static_cast<u64>(acc[i] % p);
    return out;
}

/// x^e modulo (f, p) for monic f of degree >= 1.
inline std::vector<u64> x_power_mod(u64 e, const std::vector<u64>& f, u64 p)
{
    const std::size_t d = f.size() - 1;
    std::vector<u64> base(d, 0), acc(d, 0);
    acc[0] = 1;
    if (d == 1)
        base[0] = (p - f[0]) % p;
    else
        base[1] = 1;
    for (; e; e >>= 1, base = mulmod_poly(base, base, f, p))
        if (e & 1)
            acc = mulmod_poly(acc, base, f, p);
    return acc;
}

/// Monic reduction of an integer polynomial modulo p (p must not divide the leading coefficient).
inline std::vector<u64> monic_mod(const std::vector<BigInt>& c, u64 p)
{
    std::vector<u64> r(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        r[i] = residue(c[i], p);
    u64 inv = powmod(r.back(), p - 2, p);
    for (auto& v : r)
        v = mulmod(v, inv, p);
    return r;
}

/// Successive primes p = g (mod m) above 2^30 that do not divide `avoid`.
class PrimeStream {
public:
    PrimeStream(long g, long m, BigInt avoid) : m_(static_cast<u64>(m)), avoid_(std::move(avoid))
    {
        const u64 start = u64{1} << 30;
        u64 gg = static_cast<u64>(mod(g, m));
        next_ = start - start % m_ + gg;
        if (next_ < start)
            next_ += m_;
    }

    u64 next()
    {
        for (;;) {
            u64 p = next_;
            next_ += m_;
            BigInt bp(static_cast<unsigned long>(p));
            if (mpz_probab_prime_p(bp.get_mpz_t(), 30) && avoid_ % bp != 0)
                return p;
        }
    }

private:
    u64 m_, next_ = 0;
    BigInt avoid_;
};

/// a/b = r (mod M) with |a|, b <= sqrt(M/2), if it exists.
inline std::optional<Rat> rational_reconstruct(const BigInt& r, const BigInt& modulus)
{
    BigInt bound = sqrt(BigInt(modulus / 2));
    BigInt r0 = modulus, r1 = r, t0 = 0, t1 = 1;
    while (r1 > bound) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1, t2 = t0 - q * t1;
        r0 = r1, r1 = r2, t0 = t1, t1 = t2;
    }
    BigInt b = t1 < 0 ? BigInt(-t1) : t1;
    if (b == 0 || b > bound)
        return std::nullopt;
    BigInt a = t1 < 0 ? BigInt(-r1) : r1;
    if (gcd(a, b) != 1)
        return std::nullopt;
    return make_rat(a, b);
}

/*
 * The rational polynomial S of degree < deg f with S(beta) = sigma_g(beta),
 * assuming the roots of f generate an abelian field inside Q(zeta_m). Modulo a
 * prime p = g (mod m) the automorphism sigma_g acts as Frobenius, so
 * S = x^p (mod f, p); residues are combined by CRT and lifted by rational
 * reconstruction, then confirmed against a fresh prime.
 */
inline std::optional<RatPoly> galois_polynomial(const std::vector<BigInt>& f, long g, long m, const BigInt& avoid,
                                                long modulus_bits)
{
    const std::size_t d = f.size() - 1;
    PrimeStream primes(g, m, avoid);
    BigInt modulus = 1;
    std::vector<BigInt> crt(d, BigInt(0));
    std::size_t count = 0, next_try = 2;
    while (static_cast<long>(mpz_sizeinbase(modulus.get_mpz_t(), 2)) <= modulus_bits) {
        u64 p = primes.next();
        std::vector<u64> fm = monic_mod(f, p);
        std::vector<u64> s = x_power_mod(p, fm, p);
        BigInt bp(static_cast<unsigned long>(p));
        // Garner step: x = crt + modulus * ((s - crt) / modulus mod p).
        u64 minv = powmod(residue(modulus, p), p - 2, p);
        for (std::size_t i = 0; i < d; ++i) {
            u64 diff = (s[i] + p - residue(crt[i], p)) % p;
            crt[i] += modulus * static_cast<unsigned long>(mulmod(diff, minv, p));
        }
        modulus *= bp;
        if (++count < next_try)
            continue;
        next_try = count + std::max<std::size_t>(1, count / 2);
        std::vector<Rat> coeffs;
        bool ok = true;
        for (std::size_t i = 0; i < d && ok; ++i) {
            auto q = rational_reconstruct(crt[i], modulus);
            ok = q.has_value();
            if (ok)
                coeffs.push_back(*q);
        }
        if (!ok)
            continue;
        u64 check = primes.next();
        std::vector<u64> expect = x_power_mod(check, monic_mod(f, check), check);
        for (std::size_t i = 0; i < d && ok; ++i) {
            auto v = residue(coeffs[i], check);
            ok = v && *v == expect[i];
        }
        if (ok)
            return RatPoly(std::move(coeffs));
    }
    return std::nullopt;
}

/// f splits into distinct linear factors modulo several primes p = 1 (mod m).
inline bool splits_at_level(const std::vector<BigInt>& f, long m, const BigInt& avoid, int trials = 8)
{
    PrimeStream primes(1, m, avoid);
    std::vector<u64> x(f.size() - 1, 0);
    if (x.size() == 1)
        return true;
    x[1] = 1;
    for (int t = 0; t < trials; ++t) {
        u64 p = primes.next();
        if (x_power_mod(p, monic_mod(f, p), p) != x)
            return false;
    }
    return true;
}

inline BigComplex evaluate(const RatPoly& s, const BigComplex& z, mpfr_prec_t w)
{
    BigComplex acc(w);
    for (int i = s.degree(); i >= 0; --i)
        acc = acc * z + BigComplex(BigFloat(s[i], w), BigFloat(w));
    return acc;
}

inline long height_bits(const RatPoly& s)
{
    long h = 0;
    for (const auto& c : s.coeffs())
        h = std::max<long>(h, static_cast<long>(mpz_sizeinbase(c.get_num_mpz_t(), 2) +
                                                 mpz_sizeinbase(c.get_den_mpz_t(), 2)));
    return h;
}

/// A small generating set of (Z/m)*.
inline std::vector<long> unit_generators(long m)
{
    std::vector<long> gens;
    std::set<long> sub{1 % m};
    for (long u = 2; u < m; ++u) {
        if (std::gcd(u, m) != 1 || sub.count(u))
            continue;
        gens.push_back(u);
        std::vector<long> frontier(sub.begin(), sub.end());
        while (!frontier.empty()) {
            long x = frontier.back();
            frontier.pop_back();
            for (long g : gens) {
                long y = x * g % m;
                if (sub.insert(y).second)
                    frontier.push_back(y);
            }
        }
    }
    return gens;
}

/// Relative trace of zeta_m^j down to the fixed field of h.
inline CycNum subgroup_trace(long m, long j, const std::vector<long>& h)
{
    std::vector<Rat> v(static_cast<std::size_t>(m), Rat(0));
    for (long x : h)
        v[static_cast<std::size_t>(mod(j * x, m))] += 1;
    return CycNum::from_exponents(m, v);
}

/// A Q-basis of the fixed field of h, chosen among relative traces.
inline std::vector<CycNum> fixed_field_basis(long m, const std::vector<long>& h, long d)
{
    std::vector<CycNum> basis;
    std::vector<std::vector<Rat>> echelon;
    std::vector<std::size_t> lead;
    for (long j = 0; j < m && static_cast<long>(basis.size()) < d; ++j) {
        CycNum t = subgroup_trace(m, j, h);
        std::vector<Rat> v = t.coords_at(m);
        for (std::size_t r = 0; r < echelon.size(); ++r) {
            if (v[lead[r]] == 0)
                continue;
            Rat f = v[lead[r]];
            for (std::size_t k = 0; k < v.size(); ++k)
                v[k] -= f * echelon[r][k];
        }
        auto it = std::find_if(v.begin(), v.end(), [](const Rat& q) { return q != 0; });
        if (it == v.end())
            continue;
        std::size_t pos = static_cast<std::size_t>(it - v.begin());
        Rat inv = 1 / v[pos];
        for (auto& q : v)
            q *= inv;
        echelon.push_back(std::move(v));
        lead.push_back(pos);
        basis.push_back(t);
    }
    return basis;
}

/// Inverse of a square complex matrix by Gauss-Jordan with partial pivoting.
inline std::optional<std::vector<std::vector<BigComplex>>> invert(std::vector<std::vector<BigComplex>> a,
                                                                  mpfr_prec_t w)
{
    const std::size_t n = a.size();
    std::vector<std::vector<BigComplex>> inv(n, std::vector<BigComplex>(n, BigComplex(w)));
    for (std::size_t i = 0; i < n; ++i)
        inv[i][i] = BigComplex(BigFloat(1, w), BigFloat(w));
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (a[r][c].norm2() > a[p][c].norm2())
                p = r;
        if (a[p][c].norm2().is_zero())
            return std::nullopt;
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        BigComplex piv = a[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            a[c][k] = a[c][k] / piv;
            inv[c][k] = inv[c][k] / piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c)
                continue;
            BigComplex f = a[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] = a[r][k] - f * a[c][k];
                inv[r][k] = inv[r][k] - f * inv[c][k];
            }
        }
    }
    return inv;
}

} // namespace detail

/*
 * Looks for the selected root beta of f inside Q(zeta_m) for increasing m.
 *
 * If beta lies in Q(zeta_m), every sigma_g acts on the roots of f through a
 * rational polynomial, recovered from Frobenius elements modulo primes
 * p = g (mod m). That fixes which root is sigma_g(beta), hence the subgroup H
 * fixing beta and the full vector of conjugates of beta over the cosets of H.
 * The coordinates of beta in a basis of the fixed field of H then solve a
 * square linear system over C; they are recovered as rationals by continued
 * fractions and the candidate is verified exactly.
 */
inline RecognitionResult recognize(const RatPoly& f, long root_index, const RecognitionOptions& opt = {})
{
    if (f.degree() < 1)
        throw std::invalid_argument("recognize: polynomial must be nonconstant");
    if (!is_squarefree(f))
        throw std::invalid_argument("recognize: polynomial is not squarefree");
    const long prec = std::max(opt.precision_bits, 64L);
    const long deg = f.degree();
    if (root_index < 0 || root_index >= deg)
        throw std::out_of_range("recognize: root index " + std::to_string(root_index) + " out of range for degree " +
                                std::to_string(deg));
    RecognitionResult res;
    res.bound_used = opt.max_level > 0 ? opt.max_level : default_level_bound(f);

    if (deg == 1) {
        res.levels_examined = 1;
        res.witness = CycNum(Rat(-f[0] / f[1]));
        res.verdict = Verdict::RealAbelian;
        return res;
    }

    std::vector<BigComplex> roots;
    try {
        roots = sorted_roots(f, prec);
    } catch (const std::runtime_error& e) {
        res.search_exhausted = true;
        res.diagnostic = e.what();
        return res;
    }
    const mpfr_prec_t w = prec + 64;
    const BigFloat tol = BigFloat::pow2(-prec / 2, w);
    const BigInt max_den = BigInt(1) << static_cast<unsigned long>(prec / 4);
    const std::size_t r0 = static_cast<std::size_t>(root_index);

    const std::vector<BigInt> ints = primitive_integer_coeffs(f);
    std::vector<Rat> rc(ints.begin(), ints.end());
    const BigInt lead = ints.back() < 0 ? BigInt(-ints.back()) : ints.back();
    const BigInt ramified = detail::integer_abs(discriminant(RatPoly(rc))) * lead;

    // Half the smallest root separation: images of a Galois polynomial must land this close.
    BigFloat sep = BigFloat(1, w);
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            sep = std::min(sep, (roots[i] - roots[j]).abs());
    sep = sep / BigFloat(4, w);

    BigFloat root_mag = BigFloat(1, w);
    for (const auto& z : roots)
        root_mag = std::max(root_mag, z.abs());
    const long mag_bits = static_cast<long>(mpfr_get_exp(root_mag.get()));

    auto accept = [&](const CycNum& beta) {
        if (!f.evaluate_in(beta).is_zero())
            return false;
        if (static_cast<long>(galois_orbit(beta).size()) != deg)
            return false;
        BigComplex mid = numeric_eval(beta, prec).midpoint();
        return (mid - roots[r0]).abs() < tol;
    };

    for (long m = 3; m <= res.bound_used; ++m) {
        if (m % 4 == 2 || euler_phi(m) % deg != 0)
            continue;
        bool supported = true;
        for (long p : prime_factors(m))
            if (ramified % p != 0)
                supported = false;
        if (!supported || !detail::splits_at_level(ints, m, ramified))
            continue;
        ++res.levels_examined;

        // Permutation of root indices induced by each generator of (Z/m)*.
        std::map<long, std::vector<std::size_t>> action;
        bool consistent = true;
        for (long g : detail::unit_generators(m)) {
            auto s = detail::galois_polynomial(ints, g, m, ramified, opt.modulus_bits);
            if (!s) {
                res.search_exhausted = true;
                res.diagnostic = "modulus ceiling reached at level " + std::to_string(m);
                consistent = false;
                break;
            }
            const mpfr_prec_t hw = w + detail::height_bits(*s) + deg * (mag_bits + 1);
            std::vector<BigComplex> fine = roots;
            detail::refine_roots(f, fine, hw);
            for (auto& z : fine)
                z = detail::at_precision(z, hw);
            std::vector<std::size_t> perm(roots.size());
            std::vector<bool> hit(roots.size(), false);
            for (std::size_t k = 0; k < roots.size() && consistent; ++k) {
                BigComplex v = detail::evaluate(*s, fine[k], hw);
                std::size_t best = 0;
                for (std::size_t j = 1; j < roots.size(); ++j)
                    if ((roots[j] - v).norm2() < (roots[best] - v).norm2())
                        best = j;
                if ((roots[best] - v).abs() > sep || hit[best])
                    consistent = false;
                perm[k] = best, hit[best] = true;
            }
            action[g] = std::move(perm);
            if (!consistent)
                break;
        }
        if (!consistent)
            continue;

        // Extend to every unit; sigma_(ug) acts as s_g after s_u.
        std::map<long, std::vector<std::size_t>> perm_of;
        std::vector<std::size_t> id(roots.size());
        for (std::size_t k = 0; k < id.size(); ++k)
            id[k] = k;
        perm_of[1] = id;
        std::vector<long> frontier{1};
        while (!frontier.empty()) {
            long u = frontier.back();
            frontier.pop_back();
            for (const auto& [g, s] : action) {
                long v = u * g % m;
                std::vector<std::size_t> composed(id.size());
                for (std::size_t k = 0; k < id.size(); ++k)
                    composed[k] = s[perm_of[u][k]];
                auto [it, fresh] = perm_of.emplace(v, composed);
                if (fresh)
                    frontier.push_back(v);
                else if (it->second != composed)
                    consistent = false;
            }
        }
        std::vector<long> h;
        for (const auto& [u, s] : perm_of)
            if (s == id)
                h.push_back(u);
        if (!consistent || static_cast<long>(perm_of.size()) != deg * static_cast<long>(h.size()))
            continue;

        std::vector<CycNum> basis = detail::fixed_field_basis(m, h, deg);
        if (static_cast<long>(basis.size()) != deg)
            throw std::logic_error("recognize: fixed field basis has the wrong size");
        std::vector<long> reps;
        std::set<long> covered;
        for (const auto& [u, s] : perm_of) {
            if (covered.count(u))
                continue;
            reps.push_back(u);
            for (long x : h)
                covered.insert(u * x % m);
        }
        std::vector<std::vector<BigComplex>> mat(reps.size());
        for (std::size_t c = 0; c < reps.size(); ++c)
            for (const auto& b : basis)
                mat[c].push_back(numeric_eval(galois(reps[c], b), w).midpoint());
        auto inv = detail::invert(mat, w);
        if (!inv)
            throw std::logic_error("recognize: conjugate matrix of a basis is singular");

        CycNum beta(0);
        bool rational = true;
        for (std::size_t i = 0; i < basis.size() && rational; ++i) {
            BigComplex x(w);
            for (std::size_t c = 0; c < reps.size(); ++c)
                x = x + (*inv)[i][c] * roots[perm_of[reps[c]][r0]];
            Rat q = detail::best_convergent(detail::to_rat(x.re), max_den);
            rational = abs(x.im) <= tol && abs(x.re - BigFloat(q, w)) <= tol;
            beta += CycNum(q) * basis[i];
        }
        if (rational && accept(beta)) {
            res.witness = beta;
            res.verdict = is_real_abelian(beta) ? Verdict::RealAbelian : Verdict::AbelianNotReal;
            res.search_exhausted = false;
            res.diagnostic.clear();
            return res;
        }
    }
    return res;
}

inline RecognitionResult recognize(const RatPoly& f, long root_index, long max_level, long precision_bits)
{
    RecognitionOptions opt;
    opt.max_level = max_level;
    opt.precision_bits = precision_bits;
    return recognize(f, root_index, opt);
}

} // namespace expdef

#endif
