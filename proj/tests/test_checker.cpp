#include <expdef/checker.hpp>

#include <gtest/gtest.h>

using namespace expdef;
using namespace expdef::build;

namespace {

const char* kPiDigits =
    "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651"
    "328230664709384460955058223172535940812848111745028410270193852110555964462294895493038196";
const char* kSqrt2Digits =
    "1.41421356237309504880168872420969807856967187537694807317667973799073247846210703885038753432764157273501384623"
    "091229702492483605585073721264412149709993583141322266592750559275579995050115278206057147";

SKElement sk(const CycNum& c) { return SKElement(c); }
SKElement sk(long q) { return SKElement(q); }

CheckReport sk_check(const Definition& d, const WitnessPlan& plan)
{
    return check_with_witnesses(SKModel{}, d.formula, plan);
}

CheckReport num_check(const Definition& d, const WitnessPlan& plan, long bits = 256)
{
    return check_with_witnesses(NumericModel(bits), d.formula, plan);
}

WitnessPlan flip_j(WitnessPlan plan)
{
    for (auto& [v, r] : plan.assignments)
        if (r.kind == Recipe::Kind::Const && r.value == sk(CycNum::zeta(4, 1)))
            r.value = sk(CycNum::zeta(4, 3));
    return plan;
}

} // namespace

TEST(EvalTerm, SKExamples)
{
    SKModel m;
    std::map<std::string, SKElement> env{{"t", SKElement::tau()}, {"q", SKElement::kernel(make_rat(1, 3))}};
    EXPECT_EQ(*eval_term(m, E(zero()), env), sk(1));
    EXPECT_EQ(*eval_term(m, E(var("q")), env), sk(CycNum::zeta(3, 1)));
    EXPECT_FALSE(eval_term(m, E(mul(var("t"), var("t"))), env).has_value());
}

TEST(CheckMatrix, Examples)
{
    SKModel m;
    auto ker = eq(E(var("x")), one());
    EXPECT_EQ(check_matrix(m, ker, {{"x", SKElement::tau()}}), Truth::True);
    EXPECT_EQ(check_matrix(m, ker, {{"x", SKElement::kernel(make_rat(1, 2))}}), Truth::False);
    EXPECT_EQ(check_matrix(m, eq(E(mul(var("x"), var("x"))), one()), {{"x", SKElement::tau()}}), Truth::False);

    NumericModel n(256);
    ComplexBall one_fuzzy(RealBall(BigFloat(1L, 256), BigFloat::pow2(-100)), RealBall(Rat(0), 256));
    ComplexBall one_sharp = ComplexBall::from_rat(1, 0, 256);
    EXPECT_EQ(check_matrix(n, eq(var("x"), var("y")), {{"x", one_fuzzy}, {"y", one_sharp}}), Truth::Unknown);
    EXPECT_EQ(check_matrix(n, eq(var("x"), var("y")), {{"x", one_sharp}, {"y", one_sharp}}), Truth::True);
    EXPECT_EQ(check_matrix(n, ker, {{"x", n.embed(SKElement::tau())}}), Truth::True);
}

TEST(IntForall, Examples)
{
    Definition d = def_int_forall();
    auto three = sk_check(d, d.plan.with("y", Recipe::constant(sk(3))));
    EXPECT_EQ(three.verdict, CheckVerdict::Pass);
    EXPECT_TRUE(three.probe_verified);
    auto tau = sk_check(d, d.plan.with("y", Recipe::constant(SKElement::tau())));
    EXPECT_EQ(tau.verdict, CheckVerdict::Fail);
    EXPECT_TRUE(tau.failure_by_partiality);
    EXPECT_NE(tau.first_failure.find("x := "), std::string::npos);
    EXPECT_EQ(sk_check(d, d.plan.with("y", Recipe::constant(SKElement(make_rat(1, 2))))).verdict, CheckVerdict::Fail);
}

TEST(RatExists, Examples)
{
    Definition d = def_rat_exists();
    auto r = sk_check(d, d.plan.with("y", Recipe::constant(SKElement(make_rat(2, 3)))));
    ASSERT_EQ(r.verdict, CheckVerdict::Pass) << r.first_failure;
    std::map<std::string, std::string> w(r.witnesses.begin(), r.witnesses.end());
    EXPECT_EQ(w.at("z1"), to_string(SKElement::kernel(Rat(2))));
    EXPECT_EQ(w.at("w1"), to_string(SKElement::kernel(Rat(3))));
    EXPECT_FALSE(r.identities.empty());
    auto t = sk_check(d, d.plan.with("y", Recipe::constant(SKElement::tau())));
    EXPECT_EQ(t.verdict, CheckVerdict::Fail);
    EXPECT_NE(t.first_failure.find("witness plan"), std::string::npos);
}

TEST(Theta, InapplicableInSK)
{
    Definition d = def_int_laczkovich();
    auto r = sk_check(d, d.plan.with("x", Recipe::constant(sk(2))));
    EXPECT_EQ(r.verdict, CheckVerdict::Inapplicable);
    EXPECT_NE(r.diagnostic.find("logarithm"), std::string::npos);
}

TEST(Theta, NumericWitnesses)
{
    Definition d = def_int_laczkovich();
    for (long x : {-3L, 0L, 1L, 2L}) {
        auto r = num_check(d, d.plan.with("x", Recipe::constant(sk(x))));
        EXPECT_EQ(r.verdict, CheckVerdict::Pass) << x << ": " << r.first_failure;
    }
    auto half = num_check(d, d.plan.with("x", Recipe::constant(SKElement(make_rat(1, 2)))));
    EXPECT_EQ(half.verdict, CheckVerdict::Fail);
}

TEST(Theta, ExactThetaMatchesIntegrality)
{
    EXPECT_TRUE(exact_theta_check(Rat(2)));
    EXPECT_FALSE(exact_theta_check(make_rat(1, 2)));
    EXPECT_TRUE(exact_theta_check(Rat(-3)));
    for (long m = -1000; m <= 1000; m += 7)
        for (long n = 1; n <= 1000; n += (n < 60 ? 1 : 37)) {
            Rat x = make_rat(m, n);
            EXPECT_EQ(exact_theta_check(x), x.get_den() == 1) << m << "/" << n;
        }
}

TEST(KernelGenerators, SK)
{
    Definition d = def_kernel_generators(KernelVariant::General);
    EXPECT_EQ(sk_check(d, d.plan.with("x", Recipe::constant(SKElement::tau()))).verdict, CheckVerdict::Pass);
    EXPECT_EQ(sk_check(d, d.plan.with("x", Recipe::constant(SKElement::kernel(Rat(-1))))).verdict, CheckVerdict::Pass);
    EXPECT_EQ(sk_check(d, d.plan.with("x", Recipe::constant(SKElement::kernel(Rat(2))))).verdict, CheckVerdict::Fail);
    EXPECT_EQ(sk_check(d, d.plan.with("x", Recipe::constant(SKElement::kernel(make_rat(1, 2))))).verdict,
              CheckVerdict::Fail);

    Definition log = def_kernel_generators(KernelVariant::PrimeLog);
    EXPECT_EQ(sk_check(log, log.plan.with("x", Recipe::constant(SKElement::tau()))).verdict, CheckVerdict::Inapplicable);
    EXPECT_EQ(num_check(log, log.plan.with("x", Recipe::constant(SKElement::tau()))).verdict, CheckVerdict::Pass);
}

TEST(Trig, CosExamples)
{
    Definition d = def_cos(TrigVariant::Exists);
    SKElement x(CycPoly::monomial(-CycNum::zeta(4, 1) * CycNum(make_rat(1, 8)), 1), CycPoly::constant(CycNum(1)));
    CycNum c = (CycNum::zeta(8, 1) + CycNum::zeta(8, 7)) * CycNum(make_rat(1, 2));
    auto plan = d.plan.with("x", Recipe::constant(x)).with("y", Recipe::constant(sk(c)));
    EXPECT_EQ(sk_check(d, plan).verdict, CheckVerdict::Pass);
    EXPECT_EQ(sk_check(d, d.plan.with("x", Recipe::constant(sk(0))).with("y", Recipe::constant(sk(1)))).verdict,
              CheckVerdict::Pass);
}

TEST(Trig, ExistsAndForallVariantsAgree)
{
    for (auto [e, a] : {std::pair{def_cos(TrigVariant::Exists), def_cos(TrigVariant::Forall)},
                        std::pair{def_sin(TrigVariant::Exists), def_sin(TrigVariant::Forall)}}) {
        int passes = 0;
        for (long k = -8; k <= 8; ++k) {
            SKElement x(CycPoly::monomial(-CycNum::zeta(4, 1) * CycNum(make_rat(k, 8)), 1), CycPoly::constant(CycNum(1)));
            for (long s = 0; s < 8; ++s) {
                CycNum y = e.name == "cos" ? (CycNum::zeta(8, s) + CycNum::zeta(8, -s)) * CycNum(make_rat(1, 2))
                                           : (CycNum::zeta(8, s) - CycNum::zeta(8, -s)) * inverse(CycNum(2) * CycNum::zeta(4, 1));
                auto pe = e.plan.with("x", Recipe::constant(x)).with("y", Recipe::constant(sk(y)));
                auto pa = a.plan.with("x", Recipe::constant(x)).with("y", Recipe::constant(sk(y)));
                auto ve = sk_check(e, pe).verdict, va = sk_check(a, pa).verdict;
                EXPECT_EQ(ve, va) << e.name << " k=" << k << " s=" << s;
                passes += ve == CheckVerdict::Pass;
            }
        }
        EXPECT_GT(passes, 0);
        EXPECT_LT(passes, 17 * 8);
    }
}

TEST(Pi, SKAndNumeric)
{
    Definition d = def_pi();
    auto r = sk_check(d, d.plan);
    EXPECT_EQ(r.verdict, CheckVerdict::Pass) << r.first_failure;
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(sk_check(d, d.plan.with("x", Recipe::constant(-sk_pi()))).verdict, CheckVerdict::Fail);
    EXPECT_EQ(sk_check(d, flip_j(d.plan)).verdict, CheckVerdict::Pass);
    EXPECT_EQ(sk_check(d, flip_j(d.plan).with("x", Recipe::constant(-sk_pi()))).verdict, CheckVerdict::Fail);
    auto n = num_check(d, d.plan.with("x", Recipe::decimal_value(kPiDigits)));
    EXPECT_EQ(n.verdict, CheckVerdict::Pass) << n.first_failure;
    EXPECT_EQ(num_check(d, d.plan.with("x", Recipe::decimal_value("3.1416"))).verdict, CheckVerdict::Fail);
}

TEST(Sqrt2, SeparatesSigns)
{
    Definition d = def_sqrt2();
    CycNum r2 = CycNum::zeta(8, 1) + CycNum::zeta(8, 7);
    EXPECT_EQ(sk_check(d, d.plan).verdict, CheckVerdict::Pass);
    EXPECT_EQ(sk_check(d, d.plan.with("x", Recipe::constant(sk(r2)))).verdict, CheckVerdict::Pass);
    EXPECT_EQ(sk_check(d, d.plan.with("x", Recipe::constant(sk(-r2)))).verdict, CheckVerdict::Fail);
    EXPECT_EQ(num_check(d, d.plan.with("x", Recipe::decimal_value(kSqrt2Digits))).verdict, CheckVerdict::Pass);
    EXPECT_EQ(num_check(d, d.plan.with("x", Recipe::decimal_value(std::string("-") + kSqrt2Digits))).verdict,
              CheckVerdict::Fail);
}

TEST(RealAbelian, Examples)
{
    Definition c = def_real_abelian(CosDecomposition{make_rat(7, 3), {}});
    EXPECT_EQ(sk_check(c, c.plan).verdict, CheckVerdict::Pass);
    EXPECT_EQ(sk_check(c, c.plan.with("x", Recipe::constant(sk(2)))).verdict, CheckVerdict::Fail);
    CycNum a = CycNum::zeta(5, 1) + CycNum::zeta(5, 4);
    Definition d = def_real_abelian(cos_decomposition(a));
    auto r = sk_check(d, d.plan.with("x", Recipe::constant(sk(a))));
    EXPECT_EQ(r.verdict, CheckVerdict::Pass) << r.first_failure;
    auto n = num_check(d, d.plan);
    EXPECT_EQ(n.verdict, CheckVerdict::Pass);
    EXPECT_LT(n.max_residual_log2, -120);
    EXPECT_EQ(sk_check(d, d.plan.with("x", Recipe::constant(sk(galois(2, a))))).verdict, CheckVerdict::Fail);
}

TEST(TrigIdentities, SKBothRootsAndNumeric)
{
    SKModel m;
    for (long k : {1L, 3L}) {
        auto r = verify_trig_identities(m, sk(CycNum::zeta(4, k)));
        EXPECT_EQ(r.verdict, CheckVerdict::Pass) << r.first_failure;
        EXPECT_GT(r.atoms_checked, 60);
    }
    SKElement x = inverse(SKElement(CycNum(2) * CycNum::zeta(4, 1))) * SKElement::tau();
    SKElement jx = SKElement(CycNum::zeta(4, 1)) * x;
    CycNum sin_x = (*sk_E(jx) - *sk_E(-jx)) * inverse(CycNum(2) * CycNum::zeta(4, 1));
    EXPECT_TRUE(sin_x.is_zero());
    auto n = verify_trig_identities(NumericModel(256), NumericModel(256).embed(sk(CycNum::zeta(4, 1))));
    EXPECT_EQ(n.verdict, CheckVerdict::Pass) << n.first_failure;
    EXPECT_EQ(verify_trig_identities(m, sk(2)).verdict, CheckVerdict::Fail);
}

TEST(Agreement, NumericMatchesSKAndIsMonotone)
{
    std::vector<Definition> defs{def_pi(), def_sqrt2(), def_real_abelian(cos_decomposition(CycNum::zeta(7, 1) + CycNum::zeta(7, 6))),
                                 def_rat_exists(), def_int_forall(), def_kernel_generators()};
    std::vector<WitnessPlan> plans{defs[0].plan, defs[1].plan, defs[2].plan,
                                   defs[3].plan.with("y", Recipe::constant(SKElement(make_rat(-5, 4)))),
                                   defs[4].plan.with("y", Recipe::constant(sk(-2))),
                                   defs[5].plan.with("x", Recipe::constant(SKElement::tau()))};
    for (std::size_t i = 0; i < defs.size(); ++i) {
        EXPECT_EQ(sk_check(defs[i], plans[i]).verdict, CheckVerdict::Pass) << defs[i].name;
        auto v256 = num_check(defs[i], plans[i], 256).verdict;
        EXPECT_EQ(v256, CheckVerdict::Pass) << defs[i].name;
        auto v128 = num_check(defs[i], plans[i], 128).verdict;
        EXPECT_NE(v128, CheckVerdict::Fail) << defs[i].name;
        for (long b : {128L, 256L}) {
            auto lo = num_check(defs[i], plans[i], b).verdict, hi = num_check(defs[i], plans[i], 2 * b).verdict;
            if (lo == CheckVerdict::Pass || lo == CheckVerdict::Fail)
                EXPECT_EQ(lo, hi) << defs[i].name << " at " << b;
        }
    }
}

TEST(Prenex, PreservesSatisfactionOnProbes)
{
    std::vector<std::pair<Definition, WitnessPlan>> cases;
    Definition pi = def_pi(), r2 = def_sqrt2(), kg = def_kernel_generators(), rat = def_rat_exists();
    cases.emplace_back(pi, pi.plan);
    cases.emplace_back(pi, pi.plan.with("x", Recipe::constant(-sk_pi())));
    cases.emplace_back(r2, r2.plan);
    cases.emplace_back(kg, kg.plan.with("x", Recipe::constant(SKElement::tau())));
    cases.emplace_back(kg, kg.plan.with("x", Recipe::constant(SKElement::kernel(Rat(3)))));
    cases.emplace_back(rat, rat.plan.with("y", Recipe::constant(SKElement::tau())));
    for (const auto& [d, plan] : cases) {
        auto a = check_with_witnesses(SKModel{}, d.formula, plan).verdict;
        auto b = check_with_witnesses(SKModel{}, prenex(d.formula), plan).verdict;
        EXPECT_EQ(a, b) << d.name;
    }
}
