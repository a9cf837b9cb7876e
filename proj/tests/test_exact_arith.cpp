#include <expdef/polynomial.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace expdef;

namespace {

RatPoly random_poly(std::mt19937_64& rng, int max_deg)
{
    std::uniform_int_distribution<int> deg(0, max_deg), num(-9, 9), den(1, 5);
    std::vector<Rat> c;
    int d = deg(rng);
    for (int i = 0; i <= d; ++i)
        c.push_back(make_rat(num(rng), den(rng)));
    return RatPoly(std::move(c));
}

} // namespace

TEST(Rat, CanonicalFormAndStrings)
{
    EXPECT_EQ(to_string(make_rat(4, -6)), "-2/3");
    EXPECT_EQ(to_string(make_rat(0, 7)), "0");
    EXPECT_EQ(make_rat(0, 7).get_den(), 1);
    EXPECT_EQ(parse_rat("6/4"), make_rat(3, 2));
    EXPECT_EQ(parse_rat("-5"), Rat(-5));
    EXPECT_THROW(parse_rat("1/0"), std::domain_error);
    EXPECT_THROW(parse_rat("1/-2"), std::invalid_argument);
    EXPECT_THROW(parse_rat("x"), std::invalid_argument);
    EXPECT_EQ(frac(make_rat(-1, 4)), make_rat(3, 4));
}

TEST(RatPoly, DifferenceOfSquares)
{
    EXPECT_EQ(rat_poly({1, 1}) * rat_poly({-1, 1}), rat_poly({-1, 0, 1}));
}

TEST(RatPoly, DivremExact)
{
    auto [q, r] = divrem(rat_poly({0, 0, 0, 1}), rat_poly({0, 0, 1}));
    EXPECT_EQ(q, rat_poly({0, 1}));
    EXPECT_TRUE(r.is_zero());
    EXPECT_THROW(divrem(rat_poly({1}), RatPoly{}), std::domain_error);
}

TEST(RatPoly, GcdIsMonic)
{
    // Euclid by hand: x^2-1 = 1*(x^2-2x+1) + (2x-2); x^2-2x+1 = (x/2 - 1/2)(2x-2).
    EXPECT_EQ(gcd(rat_poly({-1, 0, 1}), rat_poly({1, -2, 1})), rat_poly({-1, 1}));
    EXPECT_EQ(gcd(rat_poly({0, 2}), rat_poly({0, 0, 4})), rat_poly({0, 1}));
}

TEST(RatPoly, ZeroDegreeSentinel)
{
    EXPECT_EQ(RatPoly{}.degree(), RatPoly::kZeroDegree);
    EXPECT_EQ(RatPoly({Rat(0), Rat(0)}).degree(), RatPoly::kZeroDegree);
}

TEST(RatPoly, RingLawsOnRandomTriples)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        RatPoly a = random_poly(rng, 6), b = random_poly(rng, 6), c = random_poly(rng, 6);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a + b, b + a);
        if (!b.is_zero()) {
            auto [q, r] = divrem(a, b);
            EXPECT_EQ(q * b + r, a);
            EXPECT_LT(r.degree(), b.degree());
        }
    }
}

TEST(RatPoly, ResultantAndDiscriminant)
{
    EXPECT_EQ(discriminant(rat_poly({-2, 0, 1})), Rat(8));
    EXPECT_EQ(discriminant(rat_poly({1, 1, 1})), Rat(-3));
    EXPECT_EQ(discriminant(rat_poly({-2, 0, 0, 1})), Rat(-108));
    // res(x - a, x - b) = a - b ... up to the sign convention res(f, g) = prod g(roots of f).
    EXPECT_EQ(resultant(rat_poly({-3, 1}), rat_poly({-5, 1})), Rat(-2));
}

TEST(Cyclotomic, SmallCases)
{
    EXPECT_EQ(cyclotomic_poly(1), rat_poly({-1, 1}));
    EXPECT_EQ(cyclotomic_poly(4), rat_poly({1, 0, 1}));
    EXPECT_EQ(cyclotomic_poly(12), rat_poly({1, 0, -1, 0, 1}));
    EXPECT_THROW(cyclotomic_poly(0), std::invalid_argument);
}

TEST(Cyclotomic, DivisorProductIdentity)
{
    for (std::size_t n = 1; n <= 100; ++n) {
        RatPoly prod = RatPoly::constant(Rat(1));
        long phi = 0;
        for (std::size_t d = 1; d <= n; ++d)
            if (n % d == 0)
                prod *= cyclotomic_poly(d);
        for (std::size_t k = 1; k <= n; ++k)
            phi += std::gcd(k, n) == 1;
        EXPECT_EQ(prod, x_pow_minus_one(n)) << n;
        EXPECT_EQ(cyclotomic_poly(n).degree(), phi) << n;
        RatPoly phi_n = cyclotomic_poly(n);
        for (const auto& c : phi_n.coeffs())
            EXPECT_TRUE(is_integer(c));
    }
}

TEST(Sturm, Examples)
{
    EXPECT_EQ(sturm_count(rat_poly({-2, 0, 1}), std::nullopt, std::nullopt), 2);
    EXPECT_EQ(sturm_count(rat_poly({1, 0, 1}), std::nullopt, std::nullopt), 0);
    EXPECT_EQ(sturm_count(rat_poly({-2, 0, 0, 1}), std::nullopt, std::nullopt), 1);
    EXPECT_EQ(sturm_count(rat_poly({-2, 0, 1}), Rat(0), std::nullopt), 1);
    // Half-open interval (lo, hi]: the root at 1 counts only at the upper end.
    EXPECT_EQ(sturm_count(rat_poly({-1, 1}), Rat(1), Rat(2)), 0);
    EXPECT_EQ(sturm_count(rat_poly({-1, 1}), Rat(0), Rat(1)), 1);
    EXPECT_THROW(sturm_count(rat_poly({1, 2, 1}), std::nullopt, std::nullopt), std::invalid_argument);
}

// Oracle: build f from distinct factors with known real roots, isolate the roots
// by bisection on sign changes over a rational grid, and compare counts.
TEST(Sturm, MatchesGridIsolationOnRandomProducts)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> small(-6, 6), pick(0, 1);
    for (int trial = 0; trial < 60; ++trial) {
        RatPoly f = RatPoly::constant(Rat(1));
        std::vector<Rat> roots;
        int factors = 1 + trial % 4;
        for (int k = 0; k < factors; ++k) {
            if (pick(rng)) {
                Rat r = make_rat(small(rng), 3);
                if (std::find(roots.begin(), roots.end(), r) != roots.end())
                    continue;
                roots.push_back(r);
                f *= RatPoly{-r, Rat(1)};
            } else {
                // x^2 + b x + c with integer coefficients; keep only squarefree products.
                RatPoly q = rat_poly({small(rng), small(rng), 1});
                if (!is_squarefree(f * q))
                    continue;
                f *= q;
            }
        }
        if (!is_squarefree(f))
            continue;
        // Linear roots satisfy |r| <= 2 and quadratic roots |r| <= 1 + |b| + |c| <= 13.
        Rat bound = 14;
        // Grid spacing 1/64 is below the minimal gap for these constructions in practice;
        // a sign change or an exact zero on each cell counts one root.
        int grid_roots = 0;
        Rat step = make_rat(1, 64);
        int prev_s = sign(f.evaluate(Rat(-bound)));
        for (Rat x = -bound + step; x <= bound; x += step) {
            int s = sign(f.evaluate(x));
            if (s == 0)
                ++grid_roots;
            else if (prev_s != 0 && s != prev_s)
                ++grid_roots;
            prev_s = s;
        }
        int sturm = sturm_count(f, std::nullopt, std::nullopt);
        // Close pairs of quadratic roots can hide inside a cell; confirm them by refining.
        if (sturm != grid_roots) {
            int fine = 0;
            Rat fstep = make_rat(1, 4096);
            int ps = sign(f.evaluate(-bound));
            for (Rat x = -bound + fstep; x <= bound; x += fstep) {
                int s = sign(f.evaluate(x));
                if (s == 0 || (ps != 0 && s != ps))
                    ++fine;
                ps = s;
            }
            grid_roots = fine;
        }
        EXPECT_EQ(sturm, grid_roots) << to_string(f);
    }
}
