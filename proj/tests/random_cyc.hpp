#ifndef EXPDEF_TESTS_RANDOM_CYC_HPP
#define EXPDEF_TESTS_RANDOM_CYC_HPP

#include <expdef/cyclotomic.hpp>

#include <complex>
#include <random>

namespace expdef::test_support {

inline Rat random_rat(std::mt19937_64& rng, int max_num = 10, int max_den = 10)
{
    std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
    return make_rat(num(rng), den(rng));
}

/// Random element of Q(zeta_n) with sparse small rational coordinates.
inline CycNum random_cyc_at(std::mt19937_64& rng, long n, int max_num = 10, int max_den = 10)
{
    std::vector<Rat> c(static_cast<std::size_t>(euler_phi(n)), Rat(0));
    std::uniform_int_distribution<int> coin(0, 2);
    for (auto& v : c)
        if (coin(rng))
            v = random_rat(rng, max_num, max_den);
    return CycNum::from_coeffs(n, std::move(c));
}

inline CycNum random_cyc(std::mt19937_64& rng, long max_level, int max_num = 10, int max_den = 10)
{
    std::uniform_int_distribution<long> level(1, max_level);
    return random_cyc_at(rng, level(rng), max_num, max_den);
}

/// Independent floating-point evaluation of sum_j v_j e^(2 pi i j / n).
inline std::complex<long double> float_eval(long n, const std::vector<Rat>& v)
{
    const long double pi = 3.141592653589793238462643383279502884L;
    std::complex<long double> acc = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] == 0)
            continue;
        long double ang = 2 * pi * static_cast<long double>(j) / static_cast<long double>(n);
        acc += static_cast<long double>(v[j].get_d()) * std::polar(1.0L, ang);
    }
    return acc;
}

inline std::complex<long double> float_eval(const CycNum& a) { return float_eval(a.level(), a.coeffs()); }

} // namespace expdef::test_support

#endif
