#ifndef EXPDEF_SKMODEL_HPP
#define EXPDEF_SKMODEL_HPP

#include "cyclotomic.hpp"
#include "rab.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace expdef {

using CycPoly = Polynomial<CycNum>;

/*
 * Element of SK = Q^ab(tau): a fraction num/den of polynomials in the formal
 * transcendental tau with cyclotomic coefficients. Canonical form: coprime,
 * den monic, and zero is 0/1. Structural equality is therefore equality.
 */
class SKElement {
public:
    SKElement() : num_(), den_(CycPoly::constant(CycNum(1))) {}
    explicit SKElement(const CycNum& c) : num_(CycPoly::constant(c)), den_(CycPoly::constant(CycNum(1))) {}
    explicit SKElement(const Rat& q) : SKElement(CycNum(q)) {}
    explicit SKElement(long q) : SKElement(CycNum(q)) {}

    SKElement(CycPoly num, CycPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static SKElement tau() { return SKElement(CycPoly::x(), CycPoly::constant(CycNum(1))); }

    /// q * tau, the kernel multiple with coefficient q.
    static SKElement kernel(const Rat& q) { return SKElement(CycPoly::monomial(CycNum(q), 1), CycPoly::constant(CycNum(1))); }

    const CycPoly& num() const { return num_; }
    const CycPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }

    bool is_constant() const { return den_.degree() == 0 && num_.degree() <= 0; }

    /// The cyclotomic value; throws unless is_constant().
    CycNum constant() const
    {
        if (!is_constant())
            throw std::domain_error("SK element depends on tau");
        return num_[0];
    }

    /// The rational q when this element is q * tau (including q = 0), else nullopt.
    std::optional<Rat> kernel_coefficient() const
    {
        if (is_zero())
            return Rat(0);
        if (den_.degree() != 0 || num_.degree() != 1 || num_[0] != CycNum(0) || !num_[1].is_rational())
            return std::nullopt;
        return num_[1].rational();
    }

    // Henrici's algorithms: only gcds of the smaller pieces are needed.
    friend SKElement operator+(const SKElement& a, const SKElement& b)
    {
        if (a.is_zero())
            return b;
        if (b.is_zero())
            return a;
        CycPoly g = gcd(a.den_, b.den_);
        if (g.degree() == 0)
            return reduced(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
        CycPoly da = exact_div(a.den_, g), db = exact_div(b.den_, g);
        CycPoly t = a.num_ * db + b.num_ * da;
        CycPoly g2 = t.is_zero() ? CycPoly::constant(CycNum(1)) : gcd(t, g);
        return reduced(exact_div(t, g2), da * exact_div(b.den_, g2));
    }
    friend SKElement operator-(const SKElement& a) { return reduced(-a.num_, a.den_); }
    friend SKElement operator-(const SKElement& a, const SKElement& b) { return a + (-b); }
    friend SKElement operator*(const SKElement& a, const SKElement& b)
    {
        if (a.is_zero() || b.is_zero())
            return {};
        CycPoly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
        return reduced(exact_div(a.num_, g1) * exact_div(b.num_, g2), exact_div(a.den_, g2) * exact_div(b.den_, g1));
    }
    friend SKElement inverse(const SKElement& a)
    {
        if (a.is_zero())
            throw std::domain_error("inverse of zero in SK");
        return reduced(a.den_, a.num_);
    }
    friend SKElement operator/(const SKElement& a, const SKElement& b) { return a * inverse(b); }

    friend bool operator==(const SKElement& a, const SKElement& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const SKElement& a, const SKElement& b) { return !(a == b); }

    /// From a numerator and denominator already known to be coprime; only rescales.
    static SKElement reduced(CycPoly num, CycPoly den)
    {
        SKElement r;
        r.num_ = std::move(num);
        r.den_ = std::move(den);
        r.make_monic();
        return r;
    }

private:
    static CycPoly exact_div(const CycPoly& a, const CycPoly& b)
    {
        if (b.degree() == 0 && b[0] == CycNum(1))
            return a;
        return divrem(a, b).first;
    }

    void make_monic()
    {
        if (den_.is_zero())
            throw std::domain_error("SK element with zero denominator");
        if (num_.is_zero()) {
            den_ = CycPoly::constant(CycNum(1));
            return;
        }
        CycNum lead = den_.leading();
        if (lead != CycNum(1)) {
            CycNum inv = inverse(lead);
            num_ = inv * num_;
            den_ = inv * den_;
        }
    }

    void normalize()
    {
        if (den_.is_zero())
            throw std::domain_error("SK element with zero denominator");
        if (num_.is_zero()) {
            den_ = CycPoly::constant(CycNum(1));
            return;
        }
        if (den_.degree() > 0) {
            CycPoly g = gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = divrem(num_, g).first;
                den_ = divrem(den_, g).first;
            }
        }
        make_monic();
    }

    CycPoly num_, den_;
};

/// E on the kernel line: E(q tau) = e^(2 pi i q).
inline CycNum sk_E(const Rat& q) { return root_of_unity(q); }

/// E on an SK element; nullopt outside the domain Q tau.
inline std::optional<CycNum> sk_E(const SKElement& x)
{
    auto q = x.kernel_coefficient();
    if (!q)
        return std::nullopt;
    return sk_E(*q);
}

namespace detail {

inline CycPoly sigma1_poly(const CycPoly& p)
{
    std::vector<CycNum> c(p.coeffs().size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = sigma0(p.coeffs()[k]);
        if (k % 2)
            c[k] = -c[k];
    }
    return CycPoly(std::move(c));
}

} // namespace detail

/// tau -> -tau together with complex conjugation on the coefficients.
inline SKElement sigma1(const SKElement& x)
{
    // A ring automorphism preserves coprimality.
    return SKElement::reduced(detail::sigma1_poly(x.num()), detail::sigma1_poly(x.den()));
}

/// Rigorous enclosure of x under tau -> 2 pi i.
inline ComplexBall numeric_eval(const SKElement& x, long precision_bits)
{
    const mpfr_prec_t work = precision_bits + 32;
    RealBall two_pi = RealBall::pi(work) * RealBall(Rat(2), work);
    ComplexBall tau(RealBall(Rat(0), work), two_pi);
    auto horner = [&](const CycPoly& p) {
        ComplexBall acc = ComplexBall::from_rat(0, 0, work);
        for (std::size_t i = p.coeffs().size(); i-- > 0;)
            acc = acc * tau + numeric_eval(p.coeffs()[i], work);
        return acc;
    };
    ComplexBall n = horner(x.num());
    if (x.den().degree() == 0 && x.den()[0] == CycNum(1))
        return n;
    return n * horner(x.den()).inverse();
}

/// Expression text, e.g. "(z(4))*t^2 + 1/2" or a quotient "(…)/(…)".
inline std::string to_string(const CycPoly& p, const std::string& var = "t")
{
    if (p.is_zero())
        return "0";
    std::string out;
    for (std::size_t k = p.coeffs().size(); k-- > 0;) {
        const CycNum& c = p.coeffs()[k];
        if (c.is_zero())
            continue;
        std::string term;
        std::string cs = to_string(c);
        bool neg = false;
        if (c.is_rational()) {
            neg = c.rational() < 0;
            Rat mag = neg ? Rat(-c.rational()) : c.rational();
            cs = to_string(mag);
        }
        std::string pow = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
        if (k == 0)
            term = c.is_rational() ? cs : "(" + cs + ")";
        else if (c == CycNum(1) || (c.is_rational() && cs == "1"))
            term = pow;
        else
            term = (c.is_rational() ? cs : "(" + cs + ")") + "*" + pow;
        if (out.empty())
            out = (neg ? "-" : "") + term;
        else
            out += (neg ? " - " : " + ") + term;
    }
    return out;
}

inline std::string to_string(const SKElement& x)
{
    std::string n = to_string(x.num());
    if (x.den().degree() == 0)
        return n;
    return "(" + n + ")/(" + to_string(x.den()) + ")";
}

struct DeltaReport {
    int transcendence_degree = 0;
    int linear_dimension = 0;
    int delta = 0;
};

/*
 * delta(X) = trdeg(X, E(X) / Q) - dim_Q span(X) for X inside the kernel line.
 * Every nonzero element is a rational multiple of the transcendental tau and
 * every E-value is a root of unity, so both terms are 1 or both are 0.
 */
inline DeltaReport delta_SK_report(const std::vector<Rat>& xs)
{
    DeltaReport r;
    bool nonzero = false;
    for (const auto& q : xs)
        nonzero = nonzero || q != 0;
    r.linear_dimension = nonzero ? 1 : 0;
    r.transcendence_degree = nonzero ? 1 : 0;
    r.delta = r.transcendence_degree - r.linear_dimension;
    return r;
}

inline int delta_SK(const std::vector<Rat>& xs) { return delta_SK_report(xs).delta; }

using IntVector = std::vector<BigInt>;

/// The exponent q in [0, 1) with a = e^(2 pi i q), if a is a root of unity.
inline std::optional<Rat> root_of_unity_exponent(const CycNum& a)
{
    // A primitive root of order o has canonical level o or o/2 (when o = 2 mod 4).
    const long n = a.level();
    const long cand = 2 * n;
    for (long k = 0; k < cand; ++k)
        if (CycNum::zeta(cand, k) == a)
            return make_rat(k, cand);
    return std::nullopt;
}

namespace detail {

inline BigInt centered_mod(const BigInt& a, const BigInt& m)
{
    BigInt r = a % m;
    if (r < 0)
        r += m;
    if (2 * r > m)
        r -= m;
    return r;
}

/*
 * Hermite normal form of a full-rank square integer matrix (rows are basis
 * vectors): upper triangular, positive pivots, entries above each pivot reduced
 * into (-pivot/2, pivot/2].
 */
inline std::vector<IntVector> hermite_rows(std::vector<IntVector> rows)
{
    const std::size_t n = rows.size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < (n ? rows[0].size() : 0) && r < n; ++c) {
        // Euclid down column c among rows r..n-1.
        for (;;) {
            std::size_t piv = n;
            for (std::size_t i = r; i < n; ++i)
                if (rows[i][c] != 0 && (piv == n || abs(rows[i][c]) < abs(rows[piv][c])))
                    piv = i;
            if (piv == n)
                break;
            std::swap(rows[r], rows[piv]);
            bool done = true;
            for (std::size_t i = r + 1; i < n; ++i) {
                if (rows[i][c] == 0)
                    continue;
                BigInt q = rows[i][c] / rows[r][c];
                for (std::size_t k = 0; k < rows[i].size(); ++k)
                    rows[i][k] -= q * rows[r][k];
                if (rows[i][c] != 0)
                    done = false;
            }
            if (done)
                break;
        }
        if (rows[r][c] == 0)
            continue;
        if (rows[r][c] < 0)
            for (auto& v : rows[r])
                v = -v;
        for (std::size_t i = 0; i < r; ++i) {
            BigInt target = centered_mod(rows[i][c], rows[r][c]);
            BigInt q = (rows[i][c] - target) / rows[r][c];
            for (std::size_t k = 0; k < rows[i].size(); ++k)
                rows[i][k] -= q * rows[r][k];
        }
        ++r;
    }
    return rows;
}

} // namespace detail

/*
 * Basis of {m in Z^n : prod roots_i^(m_i) = 1}. With roots_i = zeta_N^(a_i),
 * the rows [e_i | a_i] and [0 | N] are reduced on the last column; the n rows
 * left with a zero there span the relation lattice.
 */
inline std::vector<IntVector> multiplicative_dependencies(const std::vector<CycNum>& roots)
{
    const std::size_t n = roots.size();
    std::vector<Rat> exps;
    BigInt big_n = 1;
    for (const auto& r : roots) {
        auto e = root_of_unity_exponent(r);
        if (!e)
            throw std::invalid_argument("multiplicative_dependencies: " + to_string(r) + " is not a root of unity");
        exps.push_back(*e);
        big_n = lcm(big_n, BigInt(e->get_den()));
    }
    std::vector<IntVector> rows;
    for (std::size_t i = 0; i < n; ++i) {
        IntVector row(n + 1, BigInt(0));
        row[i] = 1;
        row[n] = BigInt(exps[i] * big_n);
        rows.push_back(std::move(row));
    }
    IntVector last(n + 1, BigInt(0));
    last[n] = big_n;
    rows.push_back(std::move(last));
    // Column-n gcd elimination by repeated Euclid steps.
    for (;;) {
        std::size_t piv = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i][n] != 0 && (piv == rows.size() || abs(rows[i][n]) < abs(rows[piv][n])))
                piv = i;
        bool done = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == piv || rows[i][n] == 0)
                continue;
            BigInt q = rows[i][n] / rows[piv][n];
            for (std::size_t k = 0; k <= n; ++k)
                rows[i][k] -= q * rows[piv][k];
            if (rows[i][n] != 0)
                done = false;
        }
        if (done)
            break;
    }
    std::vector<IntVector> kernel;
    for (const auto& row : rows)
        if (row[n] == 0)
            kernel.emplace_back(row.begin(), row.begin() + static_cast<long>(n));
    return detail::hermite_rows(std::move(kernel));
}

namespace detail {

inline IntVector primitive_normalized(const std::vector<Rat>& v)
{
    BigInt den = 1;
    for (const auto& q : v)
        den = lcm(den, BigInt(q.get_den()));
    IntVector out;
    BigInt g = 0;
    for (const auto& q : v) {
        out.push_back(BigInt(q * den));
        g = gcd(g, out.back());
    }
    int sgn = 0;
    for (const auto& x : out)
        if (x != 0) {
            sgn = x < 0 ? -1 : 1;
            break;
        }
    for (auto& x : out)
        x = x / g * sgn;
    return out;
}

} // namespace detail

/// Basis of the Q-linear relations among q_1 tau, ..., q_n tau, as primitive integer vectors.
inline std::vector<IntVector> additive_dependencies(const std::vector<Rat>& qs)
{
    const std::size_t n = qs.size();
    std::vector<IntVector> out;
    std::size_t pivot = n;
    for (std::size_t i = 0; i < n && pivot == n; ++i)
        if (qs[i] != 0)
            pivot = i;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == pivot)
            continue;
        std::vector<Rat> v(n, Rat(0));
        if (pivot == n) {
            v[j] = 1;
        } else {
            v[j] = qs[pivot];
            v[pivot] = -qs[j];
        }
        out.push_back(detail::primitive_normalized(v));
    }
    return out;
}

struct FreenessReport {
    bool free = true;
    std::string violation; // "additive" or "multiplicative" when not free
    IntVector certificate;
};

/// Free iff there is neither an additive relation among the q_i tau nor a monomial relation among E(q_i tau).
inline FreenessReport is_free_tuple(const std::vector<Rat>& qs)
{
    FreenessReport rep;
    auto add = additive_dependencies(qs);
    if (!add.empty()) {
        rep.free = false;
        rep.violation = "additive";
        rep.certificate = add.front();
        return rep;
    }
    std::vector<CycNum> es;
    for (const auto& q : qs)
        es.push_back(sk_E(q));
    auto mult = multiplicative_dependencies(es);
    if (!mult.empty()) {
        rep.free = false;
        rep.violation = "multiplicative";
        rep.certificate = mult.front();
    }
    return rep;
}

enum class CkTauVerdict { InvolutionExtends, OnlyTrivialAutomorphism };

struct CkTauReport {
    CkTauVerdict verdict;
    std::string description;
};

inline std::string to_string(CkTauVerdict v)
{
    return v == CkTauVerdict::InvolutionExtends ? "InvolutionExtends" : "OnlyTrivialAutomorphism";
}

/*
 * For a kernel generator t in Q^ab the minimal polynomial over Q^ab is x - t,
 * and conjugation extends exactly when sigma0(t) = -t.
 */
inline CkTauReport ck_tau_involution_test(const CycNum& t)
{
    if (t.is_zero())
        throw std::invalid_argument("ck_tau_involution_test: t must be nonzero");
    if (sigma0(t) == -t)
        return {CkTauVerdict::InvolutionExtends,
                "sigma0 extends to an involution sending t to -t; the definable algebraic numbers are the fixed "
                "field of that involution"};
    return {CkTauVerdict::OnlyTrivialAutomorphism,
            "no nontrivial automorphism; the definable algebraic numbers are precisely the elements of Q^ab(t)"};
}

/// Orbit of a under the group generated by sigma0.
inline std::vector<CycNum> sigma0_orbit(const CycNum& a)
{
    CycNum b = sigma0(a);
    if (b == a)
        return {a};
    return {a, b};
}

inline bool orbit_singleton(const CycNum& a) { return sigma0_orbit(a).size() == 1; }

} // namespace expdef

#endif
