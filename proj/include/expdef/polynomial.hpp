#ifndef EXPDEF_POLYNOMIAL_HPP
#define EXPDEF_POLYNOMIAL_HPP

#include "rational.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace expdef {

inline Rat inverse(const Rat& r)
{
    if (r == 0)
        throw std::domain_error("inverse of zero");
    return Rat(1) / r;
}

/*
 * Dense univariate polynomial over a field F, lowest degree first.
 * Trailing zeros are never stored, so the zero polynomial has no coefficients
 * and degree kZeroDegree.
 *
 * F must be constructible from int, support + - * and ==, and provide an
 * ADL-visible inverse(const F&).
 */
template <class F>
class Polynomial {
public:
    static constexpr int kZeroDegree = -1;

    Polynomial() = default;
    explicit Polynomial(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }
    Polynomial(std::initializer_list<F> coeffs) : c_(coeffs) { trim(); }

    static Polynomial constant(const F& a) { return Polynomial(std::vector<F>{a}); }

    static Polynomial monomial(const F& a, std::size_t deg)
    {
        std::vector<F> c(deg + 1, F(0));
        c[deg] = a;
        return Polynomial(std::move(c));
    }

    static Polynomial x() { return monomial(F(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<F>& coeffs() const { return c_; }
    std::size_t size() const { return c_.size(); }

    /// Coefficient of x^i; zero beyond the degree.
    F operator[](std::size_t i) const { return i < c_.size() ? c_[i] : F(0); }

    F leading() const { return c_.empty() ? F(0) : c_.back(); }

    Polynomial monic() const
    {
        if (is_zero())
            return *this;
        F inv = inverse(leading());
        std::vector<F> c(c_.size(), F(0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            c[i] = c_[i] * inv;
        return Polynomial(std::move(c));
    }

    Polynomial derivative() const
    {
        if (c_.size() <= 1)
            return {};
        std::vector<F> c(c_.size() - 1, F(0));
        for (std::size_t i = 1; i < c_.size(); ++i)
            c[i - 1] = c_[i] * F(static_cast<int>(i));
        return Polynomial(std::move(c));
    }

    F evaluate(const F& at) const { return evaluate_in<F>(at); }

    /// Horner evaluation at a point of any ring T that accepts F coefficients.
    template <class T>
    T evaluate_in(const T& at) const
    {
        T acc = T(0);
        for (std::size_t i = c_.size(); i-- > 0;)
            acc = acc * at + T(c_[i]);
        return acc;
    }

    Polynomial operator-() const
    {
        std::vector<F> c(c_.size(), F(0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            c[i] = F(0) - c_[i];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b)
    {
        std::vector<F> c(std::max(a.size(), b.size()), F(0));
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] = a[i] + b[i];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b)
    {
        std::vector<F> c(std::max(a.size(), b.size()), F(0));
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] = a[i] - b[i];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<F> c(a.size() + b.size() - 1, F(0));
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a.c_[i] == F(0))
                continue;
            for (std::size_t j = 0; j < b.size(); ++j)
                c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
        }
        return Polynomial(std::move(c));
    }

    friend Polynomial operator*(const F& s, const Polynomial& p)
    {
        std::vector<F> c(p.size(), F(0));
        for (std::size_t i = 0; i < p.size(); ++i)
            c[i] = s * p.c_[i];
        return Polynomial(std::move(c));
    }

    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == F(0))
            c_.pop_back();
    }

    std::vector<F> c_;
};

/// (q, r) with a = q*b + r and deg r < deg b.
template <class F>
std::pair<Polynomial<F>, Polynomial<F>> divrem(const Polynomial<F>& a, const Polynomial<F>& b)
{
    if (b.is_zero())
        throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree())
        return {Polynomial<F>{}, a};
    std::vector<F> r = a.coeffs();
    const int db = b.degree();
    std::vector<F> q(static_cast<std::size_t>(a.degree() - db + 1), F(0));
    const F inv_lead = inverse(b.leading());
    const bool monic = b.leading() == F(1);
    for (int k = a.degree() - db; k >= 0; --k) {
        F t = r[static_cast<std::size_t>(k + db)];
        if (t == F(0))
            continue;
        if (!monic)
            t = t * inv_lead;
        q[static_cast<std::size_t>(k)] = t;
        for (int j = 0; j <= db; ++j) {
            const auto& bj = b.coeffs()[static_cast<std::size_t>(j)];
            if (bj == F(0))
                continue;
            auto& slot = r[static_cast<std::size_t>(k + j)];
            slot = slot - t * bj;
        }
    }
    r.resize(static_cast<std::size_t>(db));
    return {Polynomial<F>(std::move(q)), Polynomial<F>(std::move(r))};
}

template <class F>
Polynomial<F> operator%(const Polynomial<F>& a, const Polynomial<F>& b)
{
    return divrem(a, b).second;
}

/// Monic greatest common divisor; gcd(0, 0) = 0.
template <class F>
Polynomial<F> gcd(Polynomial<F> a, Polynomial<F> b)
{
    // Monic remainders keep coefficient growth in check.
    if (!b.is_zero())
        b = b.monic();
    while (!b.is_zero()) {
        auto r = divrem(a, b).second;
        a = std::move(b);
        b = r.is_zero() ? std::move(r) : r.monic();
    }
    return a.is_zero() ? a : a.monic();
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
template <class F>
std::tuple<Polynomial<F>, Polynomial<F>, Polynomial<F>> xgcd(const Polynomial<F>& a,
                                                             const Polynomial<F>& b)
{
    using P = Polynomial<F>;
    P r0 = a, r1 = b;
    P s0 = P::constant(F(1)), s1;
    P t0, t1 = P::constant(F(1));
    while (!r1.is_zero()) {
        auto [q, r] = divrem(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        P s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        P t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero())
        return {r0, s0, t0};
    F inv = inverse(r0.leading());
    return {inv * r0, inv * s0, inv * t0};
}

using RatPoly = Polynomial<Rat>;

/// Polynomial from integer coefficients, lowest degree first.
inline RatPoly rat_poly(std::initializer_list<long> coeffs)
{
    std::vector<Rat> c;
    for (long v : coeffs)
        c.emplace_back(v);
    return RatPoly(std::move(c));
}

/// x^n - 1
inline RatPoly x_pow_minus_one(std::size_t n)
{
    return RatPoly::monomial(Rat(1), n) - RatPoly::constant(Rat(1));
}

inline bool is_squarefree(const RatPoly& f)
{
    if (f.degree() <= 0)
        return !f.is_zero();
    return gcd(f, f.derivative()).degree() == 0;
}

inline RatPoly squarefree_part(const RatPoly& f)
{
    if (f.degree() <= 0)
        return f;
    return divrem(f, gcd(f, f.derivative())).first.monic();
}

/// Scales f to a primitive integer polynomial with positive leading coefficient.
inline std::vector<BigInt> primitive_integer_coeffs(const RatPoly& f)
{
    BigInt den = 1;
    for (const auto& c : f.coeffs())
        den = lcm(den, c.get_den());
    std::vector<BigInt> z;
    z.reserve(f.size());
    BigInt content = 0;
    for (const auto& c : f.coeffs()) {
        BigInt v = c.get_num() * (den / c.get_den());
        content = gcd(content, v);
        z.push_back(v);
    }
    if (content == 0)
        return z;
    if (f.leading() < 0)
        content = -content;
    for (auto& v : z)
        v /= content;
    return z;
}

/// Resultant via the Euclidean remainder sequence over Q.
inline Rat resultant(RatPoly a, RatPoly b)
{
    if (a.is_zero() || b.is_zero())
        return Rat(0);
    Rat acc = 1;
    while (b.degree() > 0) {
        const int da = a.degree(), db = b.degree();
        RatPoly r = a % b;
        if (r.is_zero())
            return Rat(0);
        if ((da % 2 == 1) && (db % 2 == 1))
            acc = -acc;
        const int dr = r.degree();
        Rat lb = b.leading();
        for (int i = 0; i < da - dr; ++i)
            acc *= lb;
        a = std::move(b);
        b = std::move(r);
    }
    // b is a nonzero constant: res(a, c) = c^deg a.
    Rat c = b.leading();
    for (int i = 0; i < a.degree(); ++i)
        acc *= c;
    return acc;
}

/// disc(f) = (-1)^(n(n-1)/2) res(f, f') / lc(f).
inline Rat discriminant(const RatPoly& f)
{
    const int n = f.degree();
    if (n < 1)
        throw std::invalid_argument("discriminant of a constant polynomial");
    if (n == 1)
        return Rat(1);
    Rat d = resultant(f, f.derivative()) / f.leading();
    if ((n * (n - 1) / 2) % 2 == 1)
        d = -d;
    return d;
}

/// Sign of f at +inf (at_plus = true) or -inf.
inline int sign_at_infinity(const RatPoly& f, bool at_plus)
{
    int s = sign(f.leading());
    if (!at_plus && f.degree() % 2 == 1)
        s = -s;
    return s;
}

/// An endpoint for Sturm counting: nullopt stands for the infinite end.
using Endpoint = std::optional<Rat>;

/// Exact number of distinct real roots of a squarefree f in (lo, hi].
inline int sturm_count(const RatPoly& f, const Endpoint& lo, const Endpoint& hi)
{
    if (f.is_zero())
        throw std::invalid_argument("sturm_count of the zero polynomial");
    if (!is_squarefree(f))
        throw std::invalid_argument("sturm_count requires a squarefree polynomial");
    if (lo && hi && *hi <= *lo)
        return 0;

    std::vector<RatPoly> seq{f, f.derivative()};
    while (!seq.back().is_zero()) {
        RatPoly r = seq[seq.size() - 2] % seq.back();
        if (r.is_zero())
            break;
        seq.push_back(-r);
    }
    if (seq.back().is_zero())
        seq.pop_back();

    auto variations = [&](const Endpoint& at, bool upper) {
        int changes = 0, prev = 0;
        for (const auto& p : seq) {
            int s = at ? sign(p.evaluate(*at)) : sign_at_infinity(p, upper);
            if (s == 0)
                continue;
            if (prev != 0 && s != prev)
                ++changes;
            prev = s;
        }
        return changes;
    };
    return variations(lo, false) - variations(hi, true);
}

namespace detail {

inline std::vector<std::size_t> divisors(std::size_t n)
{
    std::vector<std::size_t> small, large;
    for (std::size_t d = 1; d * d <= n; ++d) {
        if (n % d)
            continue;
        small.push_back(d);
        if (d * d != n)
            large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

} // namespace detail

/// Phi_n, computed as (x^n - 1) / prod_{d | n, d < n} Phi_d. Results are memoized.
inline const RatPoly& cyclotomic_poly(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("cyclotomic_poly requires n >= 1");
    static std::mutex mutex;
    static std::map<std::size_t, RatPoly> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(n); it != cache.end())
            return it->second;
    }
    RatPoly denom = RatPoly::constant(Rat(1));
    for (std::size_t d : detail::divisors(n))
        if (d < n)
            denom *= cyclotomic_poly(d);
    auto [q, r] = divrem(x_pow_minus_one(n), denom);
    if (!r.is_zero())
        throw std::logic_error("cyclotomic division left a remainder");
    std::lock_guard lock(mutex);
    return cache.emplace(n, std::move(q)).first->second;
}

/// Human-readable rendering, e.g. "x^2 - 2".
inline std::string to_string(const RatPoly& p, const std::string& var = "x")
{
    if (p.is_zero())
        return "0";
    std::string out;
    for (int i = p.degree(); i >= 0; --i) {
        Rat c = p[static_cast<std::size_t>(i)];
        if (c == 0)
            continue;
        bool neg = c < 0;
        Rat a = neg ? Rat(-c) : c;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        bool unit = a == 1;
        if (!unit || i == 0)
            out += to_string(a);
        if (i > 0) {
            if (!unit)
                out += "*";
            out += var;
            if (i > 1)
                out += "^" + std::to_string(i);
        }
    }
    return out;
}

} // namespace expdef

#endif
