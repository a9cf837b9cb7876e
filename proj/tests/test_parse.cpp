#include <expdef/io.hpp>

#include <gtest/gtest.h>

#include <functional>
#include <random>

using namespace expdef;
using namespace expdef::build;

TEST(CycExpr, Examples)
{
    EXPECT_EQ(parse_cyc_expr("z(8) + z(8)^-1"), CycNum::zeta(8, 1) + CycNum::zeta(8, 7));
    EXPECT_EQ(parse_cyc_expr("3/4"), CycNum(make_rat(3, 4)));
    EXPECT_EQ(parse_cyc_expr("3/4").level(), 1);
    EXPECT_TRUE(parse_cyc_expr("z(4)^2 + 1").is_zero());
    EXPECT_EQ(parse_cyc_expr("-(1 + z(3)) * 2"), CycNum(-2) * (CycNum(1) + CycNum::zeta(3, 1)));
    EXPECT_EQ(parse_cyc_expr("2 - 3 - 4"), CycNum(-5));
    EXPECT_EQ(parse_cyc_expr("12/4/3"), CycNum(1));
    EXPECT_EQ(parse_cyc_expr("i"), CycNum::zeta(4, 1));
}

TEST(CycExpr, ErrorsCarryPositions)
{
    auto pos = [](const char* s) -> long {
        try {
            parse_cyc_expr(s);
        } catch (const ParseError& e) {
            return static_cast<long>(e.position);
        }
        return -1;
    };
    EXPECT_EQ(pos("1 +"), 3);
    EXPECT_EQ(pos("z(8) $"), 5);
    EXPECT_EQ(pos("1/(z(4)^2+1)"), 2);
    EXPECT_EQ(pos("q(3)"), 0);
    EXPECT_EQ(pos("(1 + 2"), 6);
    EXPECT_EQ(pos("z(0)"), 2);
    EXPECT_EQ(pos("2 z(3)"), 2);
}

TEST(CycExpr, RoundTripThroughToString)
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> c(-9, 9), lvl(1, 30);
    for (int t = 0; t < 200; ++t) {
        long n = lvl(rng);
        std::vector<Rat> v(static_cast<std::size_t>(n));
        for (auto& x : v)
            x = make_rat(c(rng), 1 + std::abs(c(rng)));
        CycNum a = CycNum::from_exponents(n, v);
        EXPECT_EQ(parse_cyc_expr(to_string(a)), a) << to_string(a);
    }
}

TEST(Poly, Examples)
{
    EXPECT_EQ(parse_poly("x^2-2"), RatPoly({Rat(-2), Rat(0), Rat(1)}));
    EXPECT_EQ(parse_poly("x"), RatPoly({Rat(0), Rat(1)}));
    EXPECT_EQ(parse_poly("(x-1)*(x+1)"), RatPoly({Rat(-1), Rat(0), Rat(1)}));
    EXPECT_EQ(parse_poly("x^3/2 - 1/3"), RatPoly({make_rat(-1, 3), Rat(0), Rat(0), make_rat(1, 2)}));
    EXPECT_THROW(parse_poly("1/x"), ParseError);
    EXPECT_THROW(parse_poly("x^-1"), ParseError);
    EXPECT_THROW(parse_poly("y"), ParseError);
}

TEST(SKExpr, Examples)
{
    EXPECT_EQ(parse_sk_expr("t"), SKElement::tau());
    EXPECT_EQ(parse_sk_expr("t/2"), SKElement::kernel(make_rat(1, 2)));
    EXPECT_EQ(parse_sk_expr("-z(4)*t/2"), sk_pi());
    EXPECT_EQ(parse_sk_expr("(t + 1)/(t - 1)") * parse_sk_expr("t - 1"), parse_sk_expr("t + 1"));
    EXPECT_EQ(parse_sk_expr("t^-2") * parse_sk_expr("t^2"), SKElement(1L));
    EXPECT_THROW(parse_sk_expr("1/(t - t)"), ParseError);
}

TEST(Sexpr, BuildersRoundTrip)
{
    std::vector<Definition> all{def_int_forall(),
                                def_rat_exists(),
                                def_int_laczkovich(),
                                def_kernel_generators(KernelVariant::General),
                                def_kernel_generators(KernelVariant::PrimeLog),
                                def_cos(TrigVariant::Exists),
                                def_sin(TrigVariant::Forall),
                                def_pi(),
                                def_sqrt2(),
                                def_real_abelian(CosDecomposition{make_rat(7, 3), {}})};
    for (const auto& d : all) {
        for (const auto& f : {d.formula, d.sugared}) {
            std::string s = render(f, RenderFormat::Sexpr);
            FormulaP g = parse_formula(s);
            EXPECT_TRUE(equal(f, g)) << d.name;
            EXPECT_EQ(render(g, RenderFormat::Sexpr), s);
        }
    }
}

TEST(Sexpr, RandomFormulasRoundTrip)
{
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> pick(0, 9);
    const std::vector<std::string> names{"x", "y", "z1", "w_2"};
    std::function<TermP(int)> term = [&](int d) -> TermP {
        int s = d > 3 ? pick(rng) % 3 : pick(rng);
        switch (s) {
        case 0: return zero();
        case 1: return one();
        case 2: return var(names[static_cast<std::size_t>(pick(rng)) % names.size()]);
        case 3: return neg(term(d + 1));
        case 4: return add(term(d + 1), term(d + 1));
        case 5: return mul(term(d + 1), term(d + 1));
        case 6: return E(term(d + 1));
        case 7: return rat(make_rat(pick(rng) - 5, 1 + pick(rng)));
        default: return add(term(d + 1), one());
        }
    };
    std::function<FormulaP(int)> formula = [&](int d) -> FormulaP {
        int s = d > 3 ? 0 : pick(rng);
        switch (s) {
        case 0: case 1: return eq(term(0), term(0));
        case 2: return and_(formula(d + 1), formula(d + 1));
        case 3: return or_(formula(d + 1), formula(d + 1));
        case 4: return not_(formula(d + 1));
        case 5: return implies(formula(d + 1), formula(d + 1));
        case 6: return exists(names[static_cast<std::size_t>(pick(rng)) % names.size()], formula(d + 1));
        case 7: return forall(names[static_cast<std::size_t>(pick(rng)) % names.size()], formula(d + 1));
        default: return pred("Cos", {term(1), term(1)});
        }
    };
    for (int i = 0; i < 300; ++i) {
        FormulaP f = formula(0);
        EXPECT_TRUE(equal(parse_formula(render(f, RenderFormat::Sexpr)), f)) << render(f, RenderFormat::Sexpr);
    }
}

TEST(Sexpr, SugarAndErrors)
{
    EXPECT_TRUE(equal(parse_formula("(and (= x 1) (= y 0) (= z x))"),
                      and_(eq(var("x"), one()), and_(eq(var("y"), zero()), eq(var("z"), var("x"))))));
    EXPECT_TRUE(equal(parse_formula("(= (- x y) 3/2) ; comment"), eq(sub(var("x"), var("y")), rat(make_rat(3, 2)))));
    EXPECT_THROW(parse_formula("(= x"), ParseError);
    EXPECT_THROW(parse_formula("(exists (x) (= x 1))"), ParseError);
    EXPECT_THROW(parse_formula("(= x 1) extra"), ParseError);
    EXPECT_THROW(parse_formula("(frob x)"), ParseError);
}

TEST(Json, ValuesRoundTrip)
{
    CycNum a = parse_cyc_expr("z(5) + 2/3*z(5)^4 - 1");
    EXPECT_EQ(cyc_from_json(to_json(a)), a);
    EXPECT_EQ(to_json(CycNum(make_rat(3, 4))).dump(), R"({"level":1,"coeffs":["3/4"]})");
    SKElement x = parse_sk_expr("(z(3)*t^2 + 1/2)/(t - z(4))");
    EXPECT_EQ(sk_from_json(to_json(x)), x);
    EXPECT_EQ(sk_from_json(Json("t/3")), SKElement::kernel(make_rat(1, 3)));
    CosDecomposition d = cos_decomposition(parse_cyc_expr("z(8) + z(8)^-1"));
    Json dj = to_json(d);
    EXPECT_EQ(dj["terms"].dump(), R"([["2","1/8"]])");
    EXPECT_EQ(cos_decomposition_from_json(dj), d);
}

TEST(Json, WitnessPlanRoundTrip)
{
    for (const auto& d : {def_pi(), def_rat_exists(), def_int_laczkovich(), def_sqrt2()}) {
        Json j = to_json(d.plan);
        WitnessPlan back = plan_from_json(j);
        EXPECT_EQ(to_json(back).dump(), j.dump()) << d.name;
    }
    WitnessPlan p = plan_from_json(Json::parse(R"({"assignments": {"x": "t/2", "y": {"kind": "decimal", "digits": "1.5"}}})"));
    EXPECT_EQ(p.assignments.at("x").value, SKElement::kernel(make_rat(1, 2)));
    EXPECT_EQ(p.assignments.at("y").kind, Recipe::Kind::Decimal);
}

TEST(Json, ReportsAreDeterministic)
{
    Definition d = def_sqrt2();
    auto r1 = check_with_witnesses(SKModel{}, d.formula, d.plan);
    auto r2 = check_with_witnesses(SKModel{}, parse_formula(render(d.formula, RenderFormat::Sexpr)), plan_from_json(to_json(d.plan)));
    EXPECT_EQ(to_json(r1).dump(), to_json(r2).dump());
    EXPECT_EQ(to_json(r1)["verdict"], "pass");
}
