#ifndef EXPDEF_RAB_HPP
#define EXPDEF_RAB_HPP

#include "cyclotomic.hpp"
#include "linalg.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace expdef {

/// A real abelian number written as constant + sum r * cos(2 pi s), with 0 < s <= 1/2 increasing.
struct CosDecomposition {
    Rat constant;
    std::vector<std::pair<Rat, Rat>> terms;

    friend bool operator==(const CosDecomposition&, const CosDecomposition&) = default;
};

inline bool is_real_abelian(const CycNum& a) { return sigma0(a) == a; }

inline CycNum rab_projection(const CycNum& a) { return (a + sigma0(a)) * CycNum(make_rat(1, 2)); }

/// 2 cos(2 pi s) = zeta^(sn) + zeta^(-sn), exactly.
inline CycNum two_cos(const Rat& s) { return root_of_unity(s) + root_of_unity(-s); }

/// Exact value of a decomposition.
inline CycNum reconstruct(const CosDecomposition& d)
{
    CycNum acc(d.constant);
    for (const auto& [r, s] : d.terms)
        acc += CycNum(Rat(r / 2)) * two_cos(s);
    return acc;
}

/*
 * At level n > 2 the real subfield has the basis 1, c_1, ..., c_{d-1} with
 * c_j = zeta^j + zeta^-j and d = phi(n)/2 (c_j is monic of degree j in c_1).
 * Solving for the coordinates in that basis gives a unique decomposition with
 * arguments j/n < 1/2.
 */
inline CosDecomposition cos_decomposition(const CycNum& a)
{
    if (!is_real_abelian(a))
        throw std::invalid_argument("cos_decomposition: input is not fixed by complex conjugation");
    CosDecomposition out;
    const long n = a.level();
    if (n <= 2) {
        out.constant = a.rational();
        return out;
    }
    const std::size_t phi = static_cast<std::size_t>(euler_phi(n));
    const std::size_t d = phi / 2;
    RatMatrix m(phi, std::vector<Rat>(d, Rat(0)));
    for (std::size_t j = 0; j < d; ++j) {
        CycNum basis = j == 0 ? CycNum(1) : CycNum::zeta(n, static_cast<long>(j)) + CycNum::zeta(n, -static_cast<long>(j));
        std::vector<Rat> col = basis.coords_at(n);
        for (std::size_t i = 0; i < phi; ++i)
            m[i][j] = col[i];
    }
    auto x = solve_exact(std::move(m), a.coeffs());
    if (!x)
        throw std::logic_error("cos_decomposition: real element outside the real subfield span");
    out.constant = (*x)[0];
    for (std::size_t j = 1; j < d; ++j)
        if ((*x)[j] != 0)
            out.terms.emplace_back(Rat(2 * (*x)[j]), make_rat(static_cast<long>(j), n));
    return out;
}

/// Exact certificate that every complex conjugate of a is real.
inline bool is_totally_real(const CycNum& a)
{
    RatPoly f = squarefree_part(minpoly(a));
    return sturm_count(f, std::nullopt, std::nullopt) == f.degree();
}

/// Human-readable form, e.g. "7/3 + 2·cos(2π·1/8)".
inline std::string to_string(const CosDecomposition& d)
{
    std::string out;
    if (d.constant != 0 || d.terms.empty())
        out = to_string(d.constant);
    for (const auto& [r, s] : d.terms) {
        bool neg = r < 0;
        Rat mag = neg ? Rat(-r) : r;
        if (out.empty())
            out = neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        if (mag != 1)
            out += to_string(mag) + "·";
        out += "cos(2π·" + to_string(s) + ")";
    }
    return out;
}

} // namespace expdef

#endif
