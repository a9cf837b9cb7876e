#ifndef EXPDEF_RATIONAL_HPP
#define EXPDEF_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace expdef {

using BigInt = mpz_class;

// mpq_class results are canonical after every arithmetic operation; only the
// two-argument constructor needs an explicit canonicalize().
using Rat = mpq_class;

inline Rat make_rat(const BigInt& num, const BigInt& den)
{
    if (den == 0)
        throw std::domain_error("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(long num, long den = 1) { return make_rat(BigInt(num), BigInt(den)); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

/// "p/q", with "/q" omitted when q = 1.
inline std::string to_string(const Rat& r)
{
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::string to_string(const BigInt& z) { return z.get_str(); }

/// Accepts "p", "-p", "p/q"; surrounding whitespace is not allowed.
inline Rat parse_rat(std::string_view s)
{
    auto bad = [&] { return std::invalid_argument("malformed rational '" + std::string(s) + "'"); };
    if (s.empty())
        throw bad();
    auto slash = s.find('/');
    auto valid_int = [](std::string_view t) {
        if (!t.empty() && (t[0] == '-' || t[0] == '+'))
            t.remove_prefix(1);
        if (t.empty())
            return false;
        for (char c : t)
            if (c < '0' || c > '9')
                return false;
        return true;
    };
    auto to_z = [](std::string_view t) {
        if (!t.empty() && t[0] == '+')
            t.remove_prefix(1);
        return BigInt(std::string(t));
    };
    if (slash == std::string_view::npos) {
        if (!valid_int(s))
            throw bad();
        return Rat(to_z(s));
    }
    auto n = s.substr(0, slash), d = s.substr(slash + 1);
    if (!valid_int(n) || !valid_int(d) || d[0] == '-')
        throw bad();
    BigInt den = to_z(d);
    if (den == 0)
        throw std::domain_error("rational with zero denominator");
    return make_rat(to_z(n), den);
}

inline BigInt gcd(const BigInt& a, const BigInt& b)
{
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline BigInt lcm(const BigInt& a, const BigInt& b)
{
    BigInt l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

/// Floor of a rational.
inline BigInt floor(const Rat& r)
{
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

/// Representative of r modulo 1 in [0, 1).
inline Rat frac(const Rat& r) { return r - Rat(floor(r)); }

inline int sign(const Rat& r) { return sgn(r); }

inline std::int64_t to_int64(const BigInt& z)
{
    if (!z.fits_slong_p())
        throw std::overflow_error("integer does not fit in 64 bits: " + z.get_str());
    return z.get_si();
}

} // namespace expdef

#endif
