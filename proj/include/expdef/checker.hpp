#ifndef EXPDEF_CHECKER_HPP
#define EXPDEF_CHECKER_HPP

#include "formula.hpp"
#include "recognition.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace expdef {

enum class Truth { False, True, Unknown };

inline std::string to_string(Truth t)
{
    return t == Truth::True ? "true" : t == Truth::False ? "false" : "unknown";
}

inline Truth truth_not(Truth t) { return t == Truth::True ? Truth::False : t == Truth::False ? Truth::True : Truth::Unknown; }

/// Exact model: SK = Q^ab(tau) with E defined on Q tau only.
class SKModel {
public:
    using Elem = SKElement;
    static constexpr bool exact = true;

    std::string name() const { return "sk"; }
    long precision() const { return 0; }

    Elem embed(const SKElement& x) const { return x; }
    Elem rational(const Rat& q) const { return SKElement(q); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    std::optional<Elem> inv(const Elem& a) const
    {
        if (a.is_zero())
            return std::nullopt;
        return inverse(a);
    }

    /// Partial E; nullopt outside Q tau.
    std::optional<Elem> E(const Elem& x) const
    {
        auto v = sk_E(x);
        if (!v)
            return std::nullopt;
        return SKElement(*v);
    }

    Truth equal(const Elem& a, const Elem& b, BigFloat* = nullptr) const { return a == b ? Truth::True : Truth::False; }

    std::optional<Rat> as_rational(const Elem& a) const
    {
        if (!a.is_constant() || !a.constant().is_rational())
            return std::nullopt;
        return a.constant().rational();
    }

    std::optional<Elem> log(const Rat&) const { return std::nullopt; }
    std::optional<Elem> decimal(const std::string&) const { return std::nullopt; }

    bool same(const Elem& a, const Elem& b) const { return a == b; }
    std::string show(const Elem& a) const { return to_string(a); }
};

/*
 * The complex exponential at a fixed precision, with rigorous balls. Equality
 * is true when the difference lies within 2^(-precision/2) of zero, false when
 * it is bounded away by more than that, and unknown otherwise.
 */
class NumericModel {
public:
    using Elem = ComplexBall;
    static constexpr bool exact = false;

    explicit NumericModel(long precision_bits = 256) : prec_(precision_bits)
    {
        if (precision_bits < 64)
            throw std::invalid_argument("numeric model needs at least 64 bits");
        tol_ = BigFloat::pow2(-precision_bits / 2);
    }

    std::string name() const { return "numeric"; }
    long precision() const { return prec_; }
    const BigFloat& tolerance() const { return tol_; }

    Elem embed(const SKElement& x) const { return numeric_eval(x, prec_); }
    Elem rational(const Rat& q) const { return ComplexBall::from_rat(q, 0, prec_); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    std::optional<Elem> inv(const Elem& a) const
    {
        if (a.contains_zero())
            return std::nullopt;
        return a.inverse();
    }
    std::optional<Elem> E(const Elem& x) const { return x.exp(); }

    Truth equal(const Elem& a, const Elem& b, BigFloat* residual = nullptr) const
    {
        ComplexBall d = a - b;
        BigFloat hi = d.mag();
        if (hi <= tol_) {
            if (residual && *residual < hi)
                *residual = hi;
            return Truth::True;
        }
        if (d.mig() > tol_)
            return Truth::False;
        return Truth::Unknown;
    }

    /// A small-height rational p/q (q <= 2^(precision/8)) close to a, if a is numerically real.
    std::optional<Rat> as_rational(const Elem& a) const
    {
        if (a.im().mag() > BigFloat::pow2(-prec_ / 4))
            return std::nullopt;
        return detail::best_convergent(detail::to_rat(a.re().mid()), BigInt(1) << static_cast<unsigned long>(prec_ / 8));
    }

    std::optional<Elem> log(const Rat& c) const
    {
        if (c <= 0)
            return std::nullopt;
        BigFloat m = expdef::log(BigFloat(c, prec_ + 16), MPFR_RNDN, prec_);
        BigFloat rad = detail::mul_up(detail::rounding_error(m), BigFloat(4L, detail::kRadiusPrec));
        rad = detail::add_up(rad, BigFloat::pow2(-prec_ - 8));
        return ComplexBall(RealBall(m, rad), RealBall(Rat(0), prec_));
    }

    std::optional<Elem> decimal(const std::string& s) const
    {
        BigFloat m(prec_);
        if (mpfr_set_str(m.get(), s.c_str(), 10, MPFR_RNDN) != 0)
            return std::nullopt;
        return ComplexBall(RealBall(m, detail::rounding_error(m)), RealBall(Rat(0), prec_));
    }

    bool same(const Elem&, const Elem&) const { return false; }
    std::string show(const Elem& a) const { return a.to_string(30); }

private:
    long prec_;
    BigFloat tol_;
};

/// Value of t under env; nullopt when E is applied outside its domain.
template <class Model>
std::optional<typename Model::Elem> eval_term(const Model& m, const TermP& t,
                                              const std::map<std::string, typename Model::Elem>& env)
{
    switch (t->kind) {
    case Term::Kind::Zero:
        return m.rational(Rat(0));
    case Term::Kind::One:
        return m.rational(Rat(1));
    case Term::Kind::RatConst:
        return m.rational(t->value);
    case Term::Kind::Var: {
        auto it = env.find(t->name);
        if (it == env.end())
            throw std::invalid_argument("unassigned variable " + t->name);
        return it->second;
    }
    case Term::Kind::Neg: {
        auto a = eval_term(m, t->a, env);
        if (!a)
            return std::nullopt;
        return m.neg(*a);
    }
    case Term::Kind::Add:
    case Term::Kind::Mul: {
        auto a = eval_term(m, t->a, env);
        if (!a)
            return std::nullopt;
        auto b = eval_term(m, t->b, env);
        if (!b)
            return std::nullopt;
        return t->kind == Term::Kind::Add ? m.add(*a, *b) : m.mul(*a, *b);
    }
    case Term::Kind::Exp: {
        auto a = eval_term(m, t->a, env);
        if (!a)
            return std::nullopt;
        return m.E(*a);
    }
    }
    return std::nullopt;
}

enum class CheckVerdict { Pass, Fail, Unknown, Inapplicable };

inline std::string to_string(CheckVerdict v)
{
    switch (v) {
    case CheckVerdict::Pass: return "pass";
    case CheckVerdict::Fail: return "fail";
    case CheckVerdict::Unknown: return "unknown";
    case CheckVerdict::Inapplicable: return "inapplicable";
    }
    return "?";
}

struct CheckReport {
    CheckVerdict verdict = CheckVerdict::Unknown;
    std::string model;
    long precision_bits = 0;
    bool exact = false;
    /// Some universal quantifier was checked on probes only ("probe-verified", never "proved").
    bool probe_verified = false;
    std::vector<std::pair<std::string, std::string>> witnesses;
    std::string first_failure;
    bool failure_by_partiality = false;
    /// Exact identities established outside universal probing (SK only).
    std::vector<std::string> identities;
    long atoms_checked = 0;
    /// Largest |lhs - rhs| over true numeric equalities, as log2 (-inf when none).
    double max_residual_log2 = -std::numeric_limits<double>::infinity();
    std::string diagnostic;
};

/// The default universal probes: {k tau : |k| <= 3}, {k tau/2, k tau/3, k tau/4 : 0 < |k| <= 2}, and +-zeta_4.
inline std::vector<SKElement> default_probes()
{
    std::vector<SKElement> out;
    for (long k = -3; k <= 3; ++k)
        out.push_back(SKElement::kernel(Rat(k)));
    for (long d : {2L, 3L, 4L})
        for (long k = -2; k <= 2; ++k)
            if (k != 0)
                out.push_back(SKElement::kernel(make_rat(k, d)));
    out.emplace_back(CycNum::zeta(4, 1));
    out.emplace_back(CycNum::zeta(4, 3));
    return out;
}

struct CheckOptions {
    std::vector<SKElement> probes = default_probes();
    bool probe_scope_values = true; // also probe with every value already in the environment
    std::size_t max_identities = 400;
};

namespace detail {

struct InapplicablePlan : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Outcome {
    Truth t;
    std::string why;
    bool partial = false;
};

template <class Model>
class Evaluator {
public:
    using Elem = typename Model::Elem;

    Evaluator(const Model& m, const WitnessPlan& plan, const CheckOptions& opt, CheckReport& rep)
        : m_(m), plan_(plan), opt_(opt), rep_(rep), residual_(BigFloat(0L, 64))
    {
        for (const auto& p : opt.probes)
            base_probes_.push_back(m.embed(p));
    }

    std::map<std::string, Elem> env;

    std::optional<Elem> recipe(const std::string& v, const Recipe& r)
    {
        switch (r.kind) {
        case Recipe::Kind::Const:
            return m_.embed(r.value);
        case Recipe::Kind::Eval:
            return eval_term(m_, r.a, env);
        case Recipe::Kind::Quotient: {
            auto a = eval_term(m_, r.a, env), b = eval_term(m_, r.b, env);
            if (!a || !b)
                return std::nullopt;
            auto ib = m_.inv(*b);
            return ib ? m_.mul(*a, *ib) : m_.rational(Rat(0));
        }
        case Recipe::Kind::KerNum:
        case Recipe::Kind::KerDen: {
            auto a = eval_term(m_, r.a, env);
            if (!a)
                return std::nullopt;
            auto q = m_.as_rational(*a);
            if (!q)
                return std::nullopt;
            Rat c = r.kind == Recipe::Kind::KerNum ? Rat(q->get_num()) : Rat(q->get_den());
            return m_.embed(SKElement::kernel(c));
        }
        case Recipe::Kind::Log: {
            auto x = m_.log(r.log_of);
            if (!x)
                throw InapplicablePlan("witness for " + v + " is a logarithm of " + to_string(r.log_of) +
                                       ", which does not exist in the " + m_.name() + " model");
            return x;
        }
        case Recipe::Kind::Decimal: {
            auto x = m_.decimal(r.decimal);
            if (!x)
                throw InapplicablePlan("witness for " + v + " is the decimal " + r.decimal +
                                       ", which the " + m_.name() + " model cannot represent");
            return x;
        }
        }
        return std::nullopt;
    }

    Outcome atom(const FormulaP& f)
    {
        ++rep_.atoms_checked;
        auto l = eval_term(m_, f->lhs, env);
        auto r = l ? eval_term(m_, f->rhs, env) : std::nullopt;
        if (!l || !r)
            return {Truth::False, render(f) + " (E outside its domain)", true};
        Truth t = m_.equal(*l, *r, &residual_);
        if (t == Truth::True && Model::exact && probe_depth_ == 0 && rep_.identities.size() < opt_.max_identities)
            rep_.identities.push_back(m_.show(*l) + " = " + m_.show(*r) + "   [" + render(f) + "]");
        if (t == Truth::False)
            return {t, render(f) + " with " + m_.show(*l) + " ≠ " + m_.show(*r)};
        if (t == Truth::Unknown)
            return {t, render(f) + " undecided at this precision"};
        return {t, {}};
    }

    Outcome eval(const FormulaP& f)
    {
        using K = Formula::Kind;
        switch (f->kind) {
        case K::Eq:
            return atom(f);
        case K::Not: {
            Outcome o = eval(f->a);
            Outcome r{truth_not(o.t), {}, false};
            if (r.t == Truth::False)
                r.why = "¬(" + render(f->a) + ") fails";
            return r;
        }
        case K::And: {
            Outcome a = eval(f->a);
            if (a.t == Truth::False)
                return a;
            Outcome b = eval(f->b);
            if (b.t == Truth::False)
                return b;
            return a.t == Truth::Unknown ? a : b;
        }
        case K::Or:
        case K::Implies: {
            Outcome a = eval(f->a);
            if (f->kind == K::Implies)
                a.t = truth_not(a.t);
            if (a.t == Truth::True)
                return {Truth::True, {}};
            Outcome b = eval(f->b);
            if (b.t == Truth::True)
                return b;
            if (a.t == Truth::Unknown)
                return {Truth::Unknown, a.why.empty() ? render(f->a) + " undecided" : a.why};
            return b;
        }
        case K::Exists:
        case K::Forall:
            return quantifier(f);
        case K::Pred:
            throw std::invalid_argument("check: expand macros before checking");
        }
        return {Truth::Unknown, "?"};
    }

    std::vector<Elem> probes_for(const std::string& v)
    {
        std::vector<Elem> out = base_probes_;
        auto extra = plan_.probes.find(v);
        if (extra != plan_.probes.end())
            for (const auto& p : extra->second)
                out.push_back(m_.embed(p));
        if (opt_.probe_scope_values)
            for (const auto& [name, val] : env)
                out.push_back(val);
        if constexpr (Model::exact) {
            std::vector<Elem> uniq;
            for (auto& p : out) {
                bool seen = false;
                for (const auto& u : uniq)
                    if (m_.same(u, p)) {
                        seen = true;
                        break;
                    }
                if (!seen)
                    uniq.push_back(std::move(p));
            }
            return uniq;
        }
        return out;
    }

    Outcome quantifier(const FormulaP& f)
    {
        const std::string& v = f->var;
        auto saved = env.find(v) == env.end() ? std::optional<Elem>() : std::optional<Elem>(env.at(v));
        auto restore = [&] {
            if (saved)
                env.insert_or_assign(v, *saved);
            else
                env.erase(v);
        };
        const bool is_exists = f->kind == Formula::Kind::Exists;
        auto r = plan_.assignments.find(v);
        if (is_exists && r != plan_.assignments.end()) {
            auto val = recipe(v, r->second);
            if (!val) {
                restore();
                return {Truth::False, "witness plan gives no value for " + v, false};
            }
            if (probe_depth_ == 0)
                rep_.witnesses.emplace_back(v, m_.show(*val));
            env.insert_or_assign(v, *val);
            Outcome o = eval(f->a);
            restore();
            if (o.t == Truth::False)
                o.why += " (witness " + v + ")";
            return o;
        }
        // Without a recipe the variable ranges over the probe set: a search for
        // an existential, a probe check for a universal.
        std::vector<Elem> cands = probes_for(v);
        ++probe_depth_;
        if (!is_exists)
            rep_.probe_verified = true;
        Outcome result{is_exists ? Truth::False : Truth::True, {}};
        bool unknown = false;
        std::string unknown_why, first_false;
        bool first_partial = false;
        for (const auto& c : cands) {
            env.insert_or_assign(v, c);
            Outcome o = eval(f->a);
            if (is_exists && o.t == Truth::True) {
                result = o;
                unknown = false;
                break;
            }
            if (!is_exists && o.t == Truth::False) {
                result = {Truth::False, o.why + " at " + v + " := " + m_.show(c), o.partial};
                unknown = false;
                break;
            }
            if (o.t == Truth::Unknown && !unknown) {
                unknown = true;
                unknown_why = o.why;
            }
            if (o.t == Truth::False && first_false.empty()) {
                first_false = o.why;
                first_partial = o.partial;
            }
        }
        --probe_depth_;
        restore();
        if (unknown)
            return {Truth::Unknown, unknown_why};
        if (is_exists && result.t == Truth::False)
            return {Truth::False, "no probe satisfies ∃" + v + (first_false.empty() ? "" : ": " + first_false),
                    first_partial};
        return result;
    }

    BigFloat residual() const { return residual_; }

private:
    const Model& m_;
    const WitnessPlan& plan_;
    const CheckOptions& opt_;
    CheckReport& rep_;
    BigFloat residual_;
    std::vector<Elem> base_probes_;
    int probe_depth_ = 0;
};

template <class Model>
void finish_report(const Model& m, CheckReport& rep, const BigFloat& residual)
{
    rep.model = m.name();
    rep.precision_bits = m.precision();
    rep.exact = Model::exact;
    if (!Model::exact && !residual.is_zero())
        rep.max_residual_log2 = std::log2(residual.to_double());
}

} // namespace detail

/// Three-valued truth of a quantifier-free formula under env.
template <class Model>
Truth check_matrix(const Model& m, const FormulaP& f, const std::map<std::string, typename Model::Elem>& env)
{
    if (!is_quantifier_free(f))
        throw std::invalid_argument("check_matrix: formula has quantifiers");
    CheckReport rep;
    WitnessPlan plan;
    CheckOptions opt;
    opt.probes.clear();
    detail::Evaluator<Model> ev(m, plan, opt, rep);
    ev.env = env;
    return ev.eval(f).t;
}

/*
 * Checks f in the model: free variables and existentials take their values from
 * the plan, existentials without a recipe are searched over the probes, and
 * universals are checked over the probes.
 */
template <class Model>
CheckReport check_with_witnesses(const Model& m, const FormulaP& f, const WitnessPlan& plan,
                                 const CheckOptions& opt = {})
{
    CheckReport rep;
    detail::Evaluator<Model> ev(m, plan, opt, rep);
    try {
        for (const auto& v : free_vars(f)) {
            auto r = plan.assignments.find(v);
            if (r == plan.assignments.end())
                throw std::invalid_argument("no value for free variable " + v);
            auto val = ev.recipe(v, r->second);
            if (!val) {
                rep.verdict = CheckVerdict::Fail;
                rep.first_failure = "no value for free variable " + v + " in this model";
                detail::finish_report(m, rep, ev.residual());
                return rep;
            }
            rep.witnesses.emplace_back(v, m.show(*val));
            ev.env.insert_or_assign(v, *val);
        }
        detail::Outcome o = ev.eval(f);
        rep.verdict = o.t == Truth::True ? CheckVerdict::Pass : o.t == Truth::False ? CheckVerdict::Fail : CheckVerdict::Unknown;
        if (o.t != Truth::True) {
            rep.first_failure = o.why;
            rep.failure_by_partiality = o.partial;
        }
    } catch (const detail::InapplicablePlan& e) {
        rep.verdict = CheckVerdict::Inapplicable;
        rep.diagnostic = e.what();
    }
    detail::finish_report(m, rep, ev.residual());
    return rep;
}

/// Exact core of the Theta definition: for x = m/n in lowest terms, 2^x is rational iff some rational r has r^n = 2^m.
inline bool exact_theta_check(const Rat& x)
{
    const BigInt m = x.get_num();
    const unsigned long n = x.get_den().get_ui();
    // 2^|m| is a perfect n-th power iff n | |m|, tested directly on 2^|m| by mpz_root.
    const unsigned long am = BigInt(abs(m)).get_ui();
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, am);
    BigInt root;
    return mpz_root(root.get_mpz_t(), p.get_mpz_t(), n) != 0;
}

/// The five elementary facts about cos and sin through a chosen square root j of -1.
template <class Model>
CheckReport verify_trig_identities(const Model& m, const typename Model::Elem& j,
                                   std::vector<Rat> grid = {}, std::vector<long> odd_kernel = {-3, -1, 1, 3})
{
    using Elem = typename Model::Elem;
    if (grid.empty())
        for (long k = -8; k <= 8; ++k)
            grid.push_back(make_rat(k, 8));
    CheckReport rep;
    BigFloat residual(0L, 64);
    auto fail = [&](const std::string& why) {
        if (rep.first_failure.empty())
            rep.first_failure = why;
    };
    auto record = [&](const std::string& s) {
        if (rep.identities.size() < 400)
            rep.identities.push_back(s);
    };
    auto jinv = m.inv(j);
    if (!jinv || m.equal(m.mul(j, j), m.rational(Rat(-1))) != Truth::True) {
        rep.verdict = CheckVerdict::Fail;
        rep.first_failure = "j is not a square root of -1";
        detail::finish_report(m, rep, residual);
        return rep;
    }
    const Elem two = m.rational(Rat(2)), zero = m.rational(Rat(0)), one = m.rational(Rat(1));
    auto half = m.rational(make_rat(1, 2));
    auto cos_of = [&](const Elem& x) -> std::optional<Elem> {
        auto a = m.E(m.mul(j, x)), b = m.E(m.neg(m.mul(j, x)));
        if (!a || !b)
            return std::nullopt;
        return m.mul(half, m.add(*a, *b));
    };
    auto sin_of = [&](const Elem& x) -> std::optional<Elem> {
        auto a = m.E(m.mul(j, x)), b = m.E(m.neg(m.mul(j, x)));
        if (!a || !b)
            return std::nullopt;
        return m.mul(m.mul(half, *jinv), m.add(*a, m.neg(*b)));
    };
    auto is = [&](const std::optional<Elem>& a, const Elem& b) -> Truth {
        if (!a)
            return Truth::False;
        return m.equal(*a, b, &residual);
    };
    bool unknown = false;
    auto expect = [&](Truth t, const std::string& what) {
        ++rep.atoms_checked;
        if (t == Truth::True)
            record(what);
        else if (t == Truth::False)
            fail(what);
        else
            unknown = true;
    };
    auto iff = [](Truth a, Truth b) -> Truth {
        if (a == Truth::Unknown || b == Truth::Unknown)
            return Truth::Unknown;
        return a == b ? Truth::True : Truth::False;
    };
    for (const Rat& q : grid) {
        // x = q tau / j, so j x = q tau lies in the domain of E.
        Elem x = m.mul(m.embed(SKElement::kernel(q)), *jinv);
        const std::string at = " at x = " + to_string(q) + "·τ/j";
        auto c = cos_of(x), cm = cos_of(m.neg(x)), s = sin_of(x), sm = sin_of(m.neg(x));
        if (!c || !cm || !s || !sm) {
            fail("E undefined" + at);
            continue;
        }
        expect(m.equal(*cm, *c, &residual), "i. cos(-x) = cos(x)" + at);
        expect(m.equal(*sm, m.neg(*s), &residual), "ii. sin(-x) = -sin(x)" + at);
        auto e2 = m.E(m.mul(m.mul(two, j), x)), e4 = m.E(m.mul(m.mul(two, two), m.mul(j, x)));
        Truth in_half = is(e2, one), in_quarter = is(e4, one);
        expect(iff(m.equal(*s, zero), in_half), "iii. sin(x) = 0 iff x ∈ (1/2j)Ker" + at);
        Truth quarter_not_half = in_quarter == Truth::True ? truth_not(in_half) : in_quarter;
        expect(iff(m.equal(*c, zero), quarter_not_half), "iv. cos(x) = 0 iff x ∈ (1/4j)Ker ∖ (1/2j)Ker" + at);
    }
    for (long k : odd_kernel) {
        Elem alpha = m.embed(SKElement::kernel(Rat(k)));
        Elem arg = m.mul(alpha, m.mul(m.rational(make_rat(1, 4)), *jinv));
        auto a = sin_of(arg), b = sin_of(m.neg(arg));
        Elem minus_one = m.rational(Rat(-1));
        Truth one_first = is(a, one) == Truth::True && is(b, minus_one) == Truth::True ? Truth::True : Truth::False;
        Truth one_second = is(b, one) == Truth::True && is(a, minus_one) == Truth::True ? Truth::True : Truth::False;
        Truth exactly_one = (one_first == Truth::True) != (one_second == Truth::True) ? Truth::True : Truth::False;
        expect(exactly_one, "v. exactly one of sin(±α/4j) is 1 for α = " + std::to_string(k) + "τ");
    }
    rep.verdict = !rep.first_failure.empty() ? CheckVerdict::Fail : unknown ? CheckVerdict::Unknown : CheckVerdict::Pass;
    detail::finish_report(m, rep, residual);
    return rep;
}

} // namespace expdef

#endif
