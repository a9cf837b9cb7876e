// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero if any fails.

#include <expdef/io.hpp>

#include "random_cyc.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

using namespace expdef;
using expdef::test_support::random_cyc;
using expdef::test_support::random_cyc_at;
using expdef::test_support::random_rat;

namespace {

struct Result {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (ok)
            detail = why;
        ok = false;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int digits = 2)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << x;
    return os.str();
}

const std::vector<std::string>& pipeline_suite()
{
    static const std::vector<std::string> s{"z(8) + z(8)^-1", "z(5) + z(5)^4", "z(7) + z(7)^-1", "7/3",
                                            "1 + z(12) + z(12)^-1"};
    return s;
}

Result criterion1()
{
    Result r;
    double slowest = 0, worst_residual = -1e9;
    for (const auto& src : pipeline_suite()) {
        auto t0 = Clock::now();
        CycNum a = parse_cyc_expr(src);
        if (!is_real_abelian(a)) {
            r.fail(src + " not recognised as real abelian");
            continue;
        }
        CosDecomposition d = cos_decomposition(a);
        if (reconstruct(d) != a)
            r.fail(src + ": decomposition does not reconstruct the input");
        Definition def = def_real_abelian(d);
        WitnessPlan plan = def.plan.with("x", Recipe::constant(SKElement(a)));
        CheckReport sk = check_with_witnesses(SKModel{}, def.formula, plan);
        if (sk.verdict != CheckVerdict::Pass || !sk.exact)
            r.fail(src + ": SK check " + to_string(sk.verdict) + " " + sk.first_failure);
        CheckReport num = check_with_witnesses(NumericModel(256), def.formula, plan);
        if (num.verdict != CheckVerdict::Pass)
            r.fail(src + ": numeric check " + to_string(num.verdict) + " " + num.first_failure);
        if (!(num.max_residual_log2 < -120))
            r.fail(src + ": numeric residual 2^" + fmt(num.max_residual_log2, 1));
        worst_residual = std::max(worst_residual, num.max_residual_log2);
        double s = seconds_since(t0);
        slowest = std::max(slowest, s);
        if (s >= 5)
            r.fail(src + " took " + fmt(s) + " s");
    }
    if (r.ok)
        r.detail = "5 numbers, SK exact and numeric at 256 bits pass, worst residual 2^" +
                   (worst_residual < -1e8 ? std::string("-inf") : fmt(worst_residual, 1)) + ", slowest " + fmt(slowest) +
                   " s";
    return r;
}

Result criterion2()
{
    Result r;
    const std::vector<std::pair<Definition, std::string>> cases{
        {def_int_forall(), "∀"},
        {def_rat_exists(), "∃"},
        {def_kernel_generators(KernelVariant::General), "∀∃∀"},
        {def_kernel_generators(KernelVariant::PrimeLog), "∀∃"}};
    std::string got;
    for (const auto& [d, want] : cases) {
        std::string c = d.complexity();
        got += (got.empty() ? "" : ", ") + d.name + " " + c;
        if (c != want)
            r.fail(d.name + " has complexity '" + c + "', expected '" + want + "'");
    }
    if (r.ok)
        r.detail = got;
    return r;
}

Result criterion3()
{
    Result r;
    std::mt19937_64 rng(301);
    std::uniform_int_distribution<long> level(1, 60);
    int cases = 0;
    for (; cases < 500; ++cases) {
        long n = level(rng);
        std::vector<long> units;
        for (long k = 1; k <= std::max(n, 1L); ++k)
            if (std::gcd(k, n) == 1)
                units.push_back(k);
        std::uniform_int_distribution<std::size_t> pick(0, units.size() - 1);
        long k = units[pick(rng)], l = units[pick(rng)];
        CycNum a = random_cyc_at(rng, n, 5, 5), b = random_cyc_at(rng, n, 5, 5);
        if (sigma0(sigma0(a)) != a)
            r.fail("sigma0^2 != id at level " + std::to_string(n));
        if (galois(k, galois(l, a)) != galois(mod(k * l, n), a))
            r.fail("composition law fails at level " + std::to_string(n));
        if (galois(k, a + b) != galois(k, a) + galois(k, b) || galois(k, a * b) != galois(k, a) * galois(k, b) ||
            galois(k, CycNum(1)) != CycNum(1))
            r.fail("homomorphism law fails at level " + std::to_string(n));
    }
    if (r.ok)
        r.detail = std::to_string(cases) + " random cases at levels <= 60, no failures";
    return r;
}

Result criterion4()
{
    Result r;
    for (long n = 1; n <= 50; ++n)
        if (minpoly(CycNum::zeta(n, 1)) != cyclotomic_poly(static_cast<std::size_t>(n)))
            r.fail("minpoly(zeta_" + std::to_string(n) + ") != Phi_" + std::to_string(n));
    for (long n = 1; n <= 100; ++n) {
        RatPoly prod = RatPoly::constant(Rat(1));
        for (long d = 1; d <= n; ++d)
            if (n % d == 0)
                prod = prod * cyclotomic_poly(static_cast<std::size_t>(d));
        RatPoly want = RatPoly::monomial(Rat(1), static_cast<std::size_t>(n)) - RatPoly::constant(Rat(1));
        if (prod != want)
            r.fail("product of Phi_d over d | " + std::to_string(n) + " != x^n - 1");
    }
    if (r.ok)
        r.detail = "minpoly(zeta_n) = Phi_n for n <= 50; prod Phi_d = x^n - 1 for n <= 100";
    return r;
}

long nearest_root(const RatPoly& f, const CycNum& a, long prec)
{
    auto roots = sorted_roots(f, prec);
    BigComplex v = numeric_eval(a, prec).midpoint();
    std::size_t best = 0;
    for (std::size_t k = 1; k < roots.size(); ++k)
        if ((roots[k] - v).norm2() < (roots[best] - v).norm2())
            best = k;
    return static_cast<long>(best);
}

bool galois_conjugate(const CycNum& w, const CycNum& a)
{
    long n = std::max(w.level(), a.level());
    n = std::lcm(n, a.level());
    for (long k = 1; k <= n; ++k)
        if (std::gcd(k, n) == 1 && galois(k, w) == a)
            return true;
    return false;
}

Result criterion5()
{
    Result r;
    auto t0 = Clock::now();
    std::mt19937_64 rng(505);
    int found = 0;
    for (int i = 0; i < 200; ++i) {
        CycNum a = random_cyc(rng, 24, 10, 10);
        RatPoly f = minpoly(a);
        RecognitionResult res = recognize(f, nearest_root(f, a, 256), 24, 256);
        if (!res.witness) {
            r.fail("missed " + to_string(a));
            continue;
        }
        if (f.evaluate_in(*res.witness) != CycNum(0))
            r.fail("false positive for " + to_string(a));
        else if (!galois_conjugate(*res.witness, a))
            r.fail("witness for " + to_string(a) + " is not a conjugate");
        else
            ++found;
    }
    double s = seconds_since(t0);
    if (s >= 60)
        r.fail("took " + fmt(s) + " s");
    if (r.ok)
        r.detail = std::to_string(found) + "/200 recovered as exact conjugates in " + fmt(s) + " s";
    return r;
}

Result criterion6()
{
    Result r;
    int grid = 0;
    for (long m = -50; m <= 50; ++m)
        for (long n = 1; n <= 50; ++n) {
            if (std::gcd(m, n) != 1)
                continue;
            ++grid;
            if (exact_theta_check(make_rat(m, n)) != (n == 1))
                r.fail("exact_theta_check(" + std::to_string(m) + "/" + std::to_string(n) + ") is wrong");
        }
    Definition d = def_int_laczkovich();
    for (long x : {-3L, 0L, 1L, 2L}) {
        auto rep = check_with_witnesses(NumericModel(256), d.formula, d.plan.with("x", Recipe::constant(SKElement(x))));
        if (rep.verdict != CheckVerdict::Pass)
            r.fail("numeric Theta(" + std::to_string(x) + ") " + to_string(rep.verdict) + " " + rep.first_failure);
    }
    auto half = check_with_witnesses(NumericModel(256), d.formula,
                                     d.plan.with("x", Recipe::constant(SKElement(make_rat(1, 2)))));
    if (half.verdict != CheckVerdict::Fail)
        r.fail("numeric Theta(1/2) is " + to_string(half.verdict));
    if (r.ok)
        r.detail = std::to_string(grid) + " reduced m/n exact; numeric Theta passes at -3, 0, 1, 2 and fails at 1/2";
    return r;
}

Result criterion7()
{
    Result r;
    const std::vector<std::pair<std::string, CkTauVerdict>> cases{
        {"z(4)", CkTauVerdict::InvolutionExtends},
        {"1", CkTauVerdict::OnlyTrivialAutomorphism},
        {"z(3)", CkTauVerdict::OnlyTrivialAutomorphism}};
    for (const auto& [t, want] : cases) {
        auto got = ck_tau_involution_test(parse_cyc_expr(t)).verdict;
        if (got != want)
            r.fail("t = " + t + " gave " + to_string(got));
    }
    if (r.ok)
        r.detail = "i -> InvolutionExtends, 1 -> OnlyTrivialAutomorphism, zeta_3 -> OnlyTrivialAutomorphism";
    return r;
}

SKElement random_sk(std::mt19937_64& rng)
{
    static const long levels[] = {1, 3, 4, 5, 8, 12};
    std::uniform_int_distribution<int> deg(0, 2), pick(0, 5);
    auto poly = [&](int d, bool monic) {
        std::vector<CycNum> c;
        for (int k = 0; k <= d; ++k)
            c.push_back(random_cyc_at(rng, levels[pick(rng)], 5, 4));
        if (monic)
            c.back() = CycNum(1);
        return CycPoly(std::move(c));
    };
    CycPoly num = poly(deg(rng), false);
    CycPoly den = poly(deg(rng), true);
    return SKElement(num, den);
}

Result criterion8()
{
    Result r;
    std::mt19937_64 rng(808);
    std::uniform_int_distribution<int> size(0, 6);
    for (int i = 0; i < 50; ++i) {
        std::vector<Rat> xs;
        for (int k = size(rng); k > 0; --k)
            xs.push_back(random_rat(rng, 6, 6));
        if (delta_SK(xs) != 0)
            r.fail("delta != 0 on a random set");
    }
    int laws = 0;
    for (int i = 0; i < 200; ++i) {
        SKElement x = random_sk(rng), y = random_sk(rng);
        Rat q = random_rat(rng, 12, 12);
        if (sigma1(sigma1(x)) != x)
            r.fail("sigma1 is not an involution on " + to_string(x));
        if (sigma1(x + y) != sigma1(x) + sigma1(y))
            r.fail("sigma1 is not additive");
        if (sigma1(x * y) != sigma1(x) * sigma1(y))
            r.fail("sigma1 is not multiplicative");
        if (sigma1(SKElement(q)) != SKElement(q))
            r.fail("sigma1 moves a rational");
        if (sigma0(sk_E(q)) != sk_E(-q) || sigma1(SKElement::kernel(q)) != SKElement::kernel(-q))
            r.fail("sigma1 is not compatible with E at " + to_string(q));
        laws += 5;
    }
    if (r.ok)
        r.detail = "delta = 0 on 50 random sets; " + std::to_string(laws) + " sigma1 law checks on 200 random elements";
    return r;
}

Result criterion9()
{
    Result r;
    // Every root of unity of order <= 12, as an exponent k/n in [0, 1).
    std::vector<Rat> exps;
    for (long n = 1; n <= 12; ++n)
        for (long k = 0; k < n; ++k)
            if (std::gcd(k, n) == 1 || (n == 1 && k == 0))
                exps.push_back(make_rat(k, n));
    // Exponents scaled by lcm(1..12) = 27720 make the relation test integer arithmetic.
    const long big = 27720;
    auto is_relation = [&](const std::vector<long>& e, const std::vector<long>& m) {
        long s = 0;
        for (std::size_t i = 0; i < e.size(); ++i)
            s += e[i] * m[i];
        return s % big == 0;
    };
    auto widen = [](const std::vector<long>& v) {
        IntVector out;
        for (long x : v)
            out.push_back(BigInt(x));
        return out;
    };
    auto in_span = [](const std::vector<IntVector>& basis, IntVector v) {
        for (const auto& row : basis) {
            std::size_t p = 0;
            while (p < row.size() && row[p] == 0)
                ++p;
            if (p == row.size())
                continue;
            for (std::size_t k = 0; k < p; ++k)
                if (v[k] != 0)
                    return false;
            if (v[p] % row[p] != 0)
                return false;
            BigInt q = v[p] / row[p];
            for (std::size_t k = p; k < v.size(); ++k)
                v[k] -= q * row[k];
        }
        for (const auto& z : v)
            if (z != 0)
                return false;
        return true;
    };
    long tuples = 0, relations = 0;
    const std::size_t m = exps.size();
    std::vector<std::size_t> idx;
    std::function<void(std::size_t)> visit = [&](std::size_t len) {
        if (!r.ok)
            return;
        if (idx.size() == len) {
            ++tuples;
            std::vector<long> e;
            std::vector<CycNum> roots;
            for (auto i : idx) {
                e.push_back(Rat(exps[i] * big).get_num().get_si());
                roots.push_back(root_of_unity(exps[i]));
            }
            auto basis = multiplicative_dependencies(roots);
            for (const auto& b : basis) {
                std::vector<long> bl;
                for (const auto& z : b)
                    bl.push_back(z.get_si());
                if (!is_relation(e, bl))
                    r.fail("basis vector is not a relation");
            }
            std::vector<long> v(len, -3);
            for (;;) {
                if (is_relation(e, v)) {
                    ++relations;
                    if (!in_span(basis, widen(v)))
                        r.fail("boxed relation outside the computed lattice");
                }
                std::size_t i = 0;
                while (i < len && v[i] == 3)
                    v[i++] = -3;
                if (i == len)
                    break;
                v[i] += 1;
            }
            return;
        }
        for (std::size_t i = 0; i < m; ++i) {
            idx.push_back(i);
            visit(len);
            idx.pop_back();
        }
    };
    for (std::size_t len = 1; len <= 3; ++len)
        visit(len);
    if (r.ok)
        r.detail = std::to_string(tuples) + " tuples over " + std::to_string(m) + " roots, " + std::to_string(relations) +
                   " boxed relations all in the lattice";
    return r;
}

Result criterion10()
{
    Result r;
    std::mt19937_64 rng(1010);
    int real = 0;
    for (int i = 0; i < 500; ++i) {
        CycNum a = random_cyc(rng, 30, 6, 6);
        if (i % 2)
            a = rab_projection(a);
        bool rab = is_real_abelian(a);
        real += rab;
        if (orbit_singleton(a) != rab)
            r.fail("orbit criterion disagrees on " + to_string(a));
    }
    if (orbit_singleton(CycNum::zeta(4, 1)))
        r.fail("orbit of i is a singleton");
    if (!orbit_singleton(CycNum::zeta(8, 1) + CycNum::zeta(8, 7)))
        r.fail("orbit of sqrt 2 is not a singleton");
    if (r.ok)
        r.detail = "500 random elements (" + std::to_string(real) + " real abelian) agree; i moves, sqrt 2 is fixed";
    return r;
}

Result criterion11()
{
    Result r;
    for (const auto& src : pipeline_suite())
        if (!is_totally_real(parse_cyc_expr(src)))
            r.fail(src + " not certified totally real");
    if (is_totally_real(CycNum::zeta(4, 1)) || is_totally_real(CycNum::zeta(3, 1)))
        r.fail("a non-real root of unity was certified totally real");
    if (r.ok)
        r.detail = "criterion 1 suite totally real by Sturm count; zeta_4 and zeta_3 rejected";
    return r;
}

} // namespace

int main()
{
    const std::vector<std::function<Result()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                        criterion5, criterion6, criterion7, criterion8,
                                                        criterion9, criterion10, criterion11};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result res;
        auto t0 = Clock::now();
        try {
            res = criteria[i]();
        } catch (const std::exception& e) {
            res.fail(std::string("exception: ") + e.what());
        }
        failures += !res.ok;
        std::cout << "criterion " << (i + 1) << ": " << (res.ok ? "PASS" : "FAIL") << " [" << fmt(seconds_since(t0))
                  << " s] " << res.detail << std::endl;
    }
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
              << std::endl;
    return failures ? 1 : 0;
}
