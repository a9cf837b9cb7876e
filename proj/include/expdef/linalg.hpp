#ifndef EXPDEF_LINALG_HPP
#define EXPDEF_LINALG_HPP

#include "rational.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace expdef {

/// Dense matrix of rationals, row-major.
using RatMatrix = std::vector<std::vector<Rat>>;

/*
 * Exact solution of A x = b by Gauss-Jordan elimination. Returns nullopt when
 * the system is inconsistent. Free variables (if A is rank deficient) are set
 * to zero.
 */
inline std::optional<std::vector<Rat>> solve_exact(RatMatrix a, std::vector<Rat> b)
{
    const std::size_t rows = a.size();
    if (b.size() != rows)
        throw std::invalid_argument("solve_exact: right-hand side has the wrong length");
    const std::size_t cols = rows ? a[0].size() : 0;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        Rat inv = 1 / a[r][c];
        for (std::size_t k = c; k < cols; ++k)
            a[r][k] *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0)
                continue;
            Rat f = a[i][c];
            for (std::size_t k = c; k < cols; ++k)
                a[i][k] -= f * a[r][k];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (b[i] != 0)
            return std::nullopt;
    std::vector<Rat> x(cols, Rat(0));
    for (std::size_t i = 0; i < r; ++i)
        x[pivot_col[i]] = b[i];
    return x;
}

} // namespace expdef

#endif
