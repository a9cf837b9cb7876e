#ifndef EXPDEF_FORMULA_HPP
#define EXPDEF_FORMULA_HPP

#include "skmodel.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace expdef {

struct Term;
struct Formula;
using TermP = std::shared_ptr<const Term>;
using FormulaP = std::shared_ptr<const Formula>;

/// Terms over {0, 1, +, -, ·, E}; RatConst is sugar removed by desugar().
struct Term {
    enum class Kind { Zero, One, Var, Neg, Add, Mul, Exp, RatConst };
    Kind kind;
    std::string name; // Var
    Rat value;        // RatConst
    TermP a, b;
};

struct Formula {
    enum class Kind { Eq, And, Or, Not, Implies, Exists, Forall, Pred };
    Kind kind;
    TermP lhs, rhs;           // Eq
    FormulaP a, b;            // connectives; a is the body of a quantifier
    std::string var;          // quantifiers
    std::string pred;         // Pred
    std::vector<TermP> args;  // Pred
};

namespace build {

inline TermP make(Term::Kind k, TermP a = nullptr, TermP b = nullptr)
{
    return std::make_shared<const Term>(Term{k, {}, {}, std::move(a), std::move(b)});
}
inline TermP zero() { return make(Term::Kind::Zero); }
inline TermP one() { return make(Term::Kind::One); }
inline TermP var(const std::string& n) { return std::make_shared<const Term>(Term{Term::Kind::Var, n, {}, nullptr, nullptr}); }
inline TermP neg(TermP a) { return make(Term::Kind::Neg, std::move(a)); }
inline TermP add(TermP a, TermP b) { return make(Term::Kind::Add, std::move(a), std::move(b)); }
inline TermP sub(TermP a, TermP b) { return add(std::move(a), neg(std::move(b))); }
inline TermP mul(TermP a, TermP b) { return make(Term::Kind::Mul, std::move(a), std::move(b)); }
inline TermP E(TermP a) { return make(Term::Kind::Exp, std::move(a)); }
inline TermP rat(const Rat& q) { return std::make_shared<const Term>(Term{Term::Kind::RatConst, {}, q, nullptr, nullptr}); }

/// n as a balanced sum of ones (0 and 1 as themselves, negatives through Neg).
inline TermP integer(const BigInt& n)
{
    if (n < 0)
        return neg(integer(BigInt(-n)));
    if (n == 0)
        return zero();
    if (n == 1)
        return one();
    BigInt lo = n / 2;
    return add(integer(BigInt(n - lo)), integer(lo));
}
inline TermP integer(long n) { return integer(BigInt(n)); }

inline FormulaP eq(TermP l, TermP r)
{
    return std::make_shared<const Formula>(Formula{Formula::Kind::Eq, std::move(l), std::move(r), nullptr, nullptr, {}, {}, {}});
}
inline FormulaP node(Formula::Kind k, FormulaP a, FormulaP b = nullptr)
{
    return std::make_shared<const Formula>(Formula{k, nullptr, nullptr, std::move(a), std::move(b), {}, {}, {}});
}
inline FormulaP and_(FormulaP a, FormulaP b) { return node(Formula::Kind::And, std::move(a), std::move(b)); }
inline FormulaP or_(FormulaP a, FormulaP b) { return node(Formula::Kind::Or, std::move(a), std::move(b)); }
inline FormulaP not_(FormulaP a) { return node(Formula::Kind::Not, std::move(a)); }
inline FormulaP implies(FormulaP a, FormulaP b) { return node(Formula::Kind::Implies, std::move(a), std::move(b)); }
inline FormulaP exists(const std::string& v, FormulaP body)
{
    return std::make_shared<const Formula>(Formula{Formula::Kind::Exists, nullptr, nullptr, std::move(body), nullptr, v, {}, {}});
}
inline FormulaP forall(const std::string& v, FormulaP body)
{
    return std::make_shared<const Formula>(Formula{Formula::Kind::Forall, nullptr, nullptr, std::move(body), nullptr, v, {}, {}});
}
inline FormulaP pred(const std::string& name, std::vector<TermP> args)
{
    return std::make_shared<const Formula>(Formula{Formula::Kind::Pred, nullptr, nullptr, nullptr, nullptr, {}, name, std::move(args)});
}

/// Right-nested conjunction of a nonempty list.
inline FormulaP conj(const std::vector<FormulaP>& fs)
{
    if (fs.empty())
        throw std::invalid_argument("empty conjunction");
    FormulaP acc = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;)
        acc = and_(fs[i], acc);
    return acc;
}

} // namespace build

// ---------------------------------------------------------------------------
// Structure

inline bool equal(const TermP& x, const TermP& y)
{
    if (x == y)
        return true;
    if (!x || !y || x->kind != y->kind)
        return false;
    switch (x->kind) {
    case Term::Kind::Var:
        return x->name == y->name;
    case Term::Kind::RatConst:
        return x->value == y->value;
    default:
        return equal(x->a, y->a) && equal(x->b, y->b);
    }
}

inline bool equal(const FormulaP& x, const FormulaP& y)
{
    if (x == y)
        return true;
    if (!x || !y || x->kind != y->kind)
        return false;
    switch (x->kind) {
    case Formula::Kind::Eq:
        return equal(x->lhs, y->lhs) && equal(x->rhs, y->rhs);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
        return x->var == y->var && equal(x->a, y->a);
    case Formula::Kind::Pred:
        if (x->pred != y->pred || x->args.size() != y->args.size())
            return false;
        for (std::size_t i = 0; i < x->args.size(); ++i)
            if (!equal(x->args[i], y->args[i]))
                return false;
        return true;
    default:
        return equal(x->a, y->a) && equal(x->b, y->b);
    }
}

inline void collect_vars(const TermP& t, std::set<std::string>& out)
{
    if (!t)
        return;
    if (t->kind == Term::Kind::Var)
        out.insert(t->name);
    collect_vars(t->a, out);
    collect_vars(t->b, out);
}

inline void collect_free(const FormulaP& f, std::set<std::string>& bound, std::set<std::string>& out)
{
    if (!f)
        return;
    auto add_term = [&](const TermP& t) {
        std::set<std::string> vs;
        collect_vars(t, vs);
        for (const auto& v : vs)
            if (!bound.count(v))
                out.insert(v);
    };
    switch (f->kind) {
    case Formula::Kind::Eq:
        add_term(f->lhs);
        add_term(f->rhs);
        return;
    case Formula::Kind::Pred:
        for (const auto& t : f->args)
            add_term(t);
        return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
        bool fresh = bound.insert(f->var).second;
        collect_free(f->a, bound, out);
        if (fresh)
            bound.erase(f->var);
        return;
    }
    default:
        collect_free(f->a, bound, out);
        collect_free(f->b, bound, out);
    }
}

inline std::set<std::string> free_vars(const FormulaP& f)
{
    std::set<std::string> bound, out;
    collect_free(f, bound, out);
    return out;
}

/// Every variable name occurring in f, free or bound.
inline std::set<std::string> all_vars(const FormulaP& f)
{
    std::set<std::string> out;
    std::function<void(const FormulaP&)> go = [&](const FormulaP& g) {
        if (!g)
            return;
        collect_vars(g->lhs, out);
        collect_vars(g->rhs, out);
        for (const auto& t : g->args)
            collect_vars(t, out);
        if (!g->var.empty())
            out.insert(g->var);
        go(g->a);
        go(g->b);
    };
    go(f);
    return out;
}

/// Fresh-name supply threaded explicitly through expansion; names are hint + counter.
class NameSupply {
public:
    NameSupply() = default;
    explicit NameSupply(std::set<std::string> taken) : taken_(std::move(taken)) {}

    void reserve(const std::set<std::string>& names) { taken_.insert(names.begin(), names.end()); }

    std::string fresh(const std::string& hint)
    {
        std::string base = hint;
        while (!base.empty() && std::isdigit(static_cast<unsigned char>(base.back())))
            base.pop_back();
        if (base.empty())
            base = "v";
        for (;;) {
            std::string cand = base + std::to_string(++counter_[base]);
            if (taken_.insert(cand).second)
                return cand;
        }
    }

private:
    std::set<std::string> taken_;
    std::map<std::string, long> counter_;
};

inline TermP substitute(const TermP& t, const std::map<std::string, TermP>& s)
{
    if (!t)
        return t;
    if (t->kind == Term::Kind::Var) {
        auto it = s.find(t->name);
        return it == s.end() ? t : it->second;
    }
    if (!t->a)
        return t;
    TermP a = substitute(t->a, s), b = substitute(t->b, s);
    if (a == t->a && b == t->b)
        return t;
    return std::make_shared<const Term>(Term{t->kind, t->name, t->value, a, b});
}

// ---------------------------------------------------------------------------
// Witness plans

/// How to produce the value of one existential variable in a model.
struct Recipe {
    enum class Kind {
        Const,    // a fixed SK element (embedded numerically via tau -> 2 pi i)
        Eval,     // the value of a term over earlier variables
        Quotient, // a / b, or 0 when b = 0
        KerNum,   // p * tau where the term's value is the rational p/q
        KerDen,   // q * tau for the same p/q
        Log,      // a logarithm of a positive rational: numeric only
        Decimal   // a decimal literal: numeric only
    };
    Kind kind = Kind::Const;
    SKElement value;
    TermP a, b;
    Rat log_of;
    std::string decimal;

    static Recipe constant(SKElement v) { Recipe r; r.value = std::move(v); return r; }
    static Recipe eval(TermP t) { Recipe r; r.kind = Kind::Eval; r.a = std::move(t); return r; }
    static Recipe quotient(TermP n, TermP d) { Recipe r; r.kind = Kind::Quotient; r.a = std::move(n); r.b = std::move(d); return r; }
    static Recipe ker_num(TermP t) { Recipe r; r.kind = Kind::KerNum; r.a = std::move(t); return r; }
    static Recipe ker_den(TermP t) { Recipe r; r.kind = Kind::KerDen; r.a = std::move(t); return r; }
    static Recipe log(Rat c) { Recipe r; r.kind = Kind::Log; r.log_of = std::move(c); return r; }
    static Recipe decimal_value(std::string s) { Recipe r; r.kind = Kind::Decimal; r.decimal = std::move(s); return r; }

    bool numeric_only() const { return kind == Kind::Log || kind == Kind::Decimal; }

    Recipe renamed(const std::map<std::string, TermP>& s) const
    {
        Recipe r = *this;
        r.a = substitute(a, s);
        r.b = substitute(b, s);
        return r;
    }
};

/// Values for free variables, recipes for existential variables, and extra universal probes.
struct WitnessPlan {
    std::map<std::string, Recipe> assignments;
    std::map<std::string, std::vector<SKElement>> probes;

    WitnessPlan with(const std::string& v, Recipe r) const
    {
        WitnessPlan p = *this;
        p.assignments[v] = std::move(r);
        return p;
    }
};

// ---------------------------------------------------------------------------
// Macros

struct DefinedPredicate {
    std::string name;
    std::vector<std::string> params;
    FormulaP body;
    std::map<std::string, Recipe> witness_hints; // keyed by bound variables of body
};

using MacroTable = std::map<std::string, DefinedPredicate>;

namespace detail {

// Copy of f with params replaced and every bound variable renamed fresh.
inline FormulaP instantiate(const FormulaP& f, std::map<std::string, TermP>& s, NameSupply& names)
{
    using K = Formula::Kind;
    switch (f->kind) {
    case K::Eq:
        return build::eq(substitute(f->lhs, s), substitute(f->rhs, s));
    case K::Pred: {
        std::vector<TermP> args;
        for (const auto& t : f->args)
            args.push_back(substitute(t, s));
        return build::pred(f->pred, std::move(args));
    }
    case K::Exists:
    case K::Forall: {
        // Macro bodies never shadow, so the binding stays in s for renaming the hints.
        std::string v = names.fresh(f->var);
        s[f->var] = build::var(v);
        FormulaP body = instantiate(f->a, s, names);
        return f->kind == K::Exists ? build::exists(v, body) : build::forall(v, body);
    }
    case K::Not:
        return build::not_(instantiate(f->a, s, names));
    default:
        return build::node(f->kind, instantiate(f->a, s, names), instantiate(f->b, s, names));
    }
}

inline FormulaP expand(const FormulaP& f, const MacroTable& macros, NameSupply& names, WitnessPlan* plan, int depth)
{
    using K = Formula::Kind;
    if (depth > 64)
        throw std::runtime_error("macro expansion too deep (recursive macro?)");
    switch (f->kind) {
    case K::Eq:
        return f;
    case K::Pred: {
        auto it = macros.find(f->pred);
        if (it == macros.end())
            throw std::invalid_argument("unknown predicate " + f->pred);
        const DefinedPredicate& d = it->second;
        if (d.params.size() != f->args.size())
            throw std::invalid_argument("predicate " + d.name + " expects " + std::to_string(d.params.size()) +
                                        " arguments");
        std::map<std::string, TermP> s;
        for (std::size_t i = 0; i < d.params.size(); ++i)
            s[d.params[i]] = f->args[i];
        FormulaP inst = instantiate(d.body, s, names);
        if (plan)
            for (const auto& [v, r] : d.witness_hints) {
                auto bound = s.find(v);
                if (bound == s.end() || bound->second->kind != Term::Kind::Var)
                    throw std::logic_error("witness hint for unbound variable " + v + " in " + d.name);
                plan->assignments[bound->second->name] = r.renamed(s);
            }
        return expand(inst, macros, names, plan, depth + 1);
    }
    case K::Exists:
    case K::Forall: {
        FormulaP body = expand(f->a, macros, names, plan, depth);
        if (body == f->a)
            return f;
        return f->kind == K::Exists ? build::exists(f->var, body) : build::forall(f->var, body);
    }
    case K::Not: {
        FormulaP a = expand(f->a, macros, names, plan, depth);
        return a == f->a ? f : build::not_(a);
    }
    default: {
        FormulaP a = expand(f->a, macros, names, plan, depth), b = expand(f->b, macros, names, plan, depth);
        return a == f->a && b == f->b ? f : build::node(f->kind, a, b);
    }
    }
}

} // namespace detail

/// Replaces every Pred node by its definition; bound variables are renamed apart from all names in f.
/// Witness hints of the expanded macros are added to plan when given.
inline FormulaP expand_macros(const FormulaP& f, const MacroTable& macros, WitnessPlan* plan = nullptr)
{
    NameSupply names(all_vars(f));
    return detail::expand(f, macros, names, plan, 0);
}

inline FormulaP expand_macros(const FormulaP& f, const MacroTable& macros, NameSupply& names, WitnessPlan* plan)
{
    names.reserve(all_vars(f));
    return detail::expand(f, macros, names, plan, 0);
}

/// The predicates used by the builders. Parameters are upper case; bound names are renamed on expansion.
inline const MacroTable& standard_macros()
{
    static const MacroTable table = [] {
        using namespace build;
        MacroTable t;
        auto def = [&](std::string name, std::vector<std::string> params, FormulaP body,
                       std::map<std::string, Recipe> hints = {}) {
            t[name] = DefinedPredicate{name, std::move(params), std::move(body), std::move(hints)};
        };
        auto X = var("X"), Y = var("Y");
        auto two = integer(2);

        def("Ker", {"X"}, eq(E(X), one()));

        def("Int", {"Y"}, forall("x", implies(pred("Ker", {var("x")}), pred("Ker", {mul(Y, var("x"))}))));

        // The side condition w != 0 excludes the trivial witness z = w = 0.
        def("Rat", {"Y"},
            exists("z", exists("w", conj({pred("Ker", {var("z")}), pred("Ker", {var("w")}), not_(eq(var("w"), zero())),
                                          eq(var("z"), mul(var("w"), Y))}))),
            {{"z", Recipe::ker_num(Y)}, {"w", Recipe::ker_den(Y)}});

        def("Theta", {"X"},
            exists("t", conj({eq(E(var("t")), two), pred("Rat", {E(mul(X, var("t")))}), pred("Rat", {X})})),
            {{"t", Recipe::log(Rat(2))}});

        auto tau_set = [&](const std::string& int_pred) {
            return and_(pred("Ker", {X}),
                        forall("y", implies(pred("Ker", {var("y")}),
                                            exists("n", and_(pred(int_pred, {var("n")}), eq(mul(var("n"), X), var("y")))))));
        };
        std::map<std::string, Recipe> n_hint{{"n", Recipe::quotient(var("y"), X)}};
        def("TauSet", {"X"}, tau_set("Int"), n_hint);
        def("TauSetLog", {"X"}, tau_set("Theta"), n_hint);

        auto j = var("j");
        auto jx = mul(j, X);
        auto root_of_minus_one = eq(mul(j, j), neg(one()));
        auto cos_eq = eq(mul(two, Y), add(E(jx), E(neg(jx))));
        auto sin_eq = eq(mul(mul(two, j), Y), sub(E(jx), E(neg(jx))));
        std::map<std::string, Recipe> j_hint{{"j", Recipe::constant(SKElement(CycNum::zeta(4, 1)))}};
        def("Cos", {"X", "Y"}, exists("j", and_(root_of_minus_one, cos_eq)), j_hint);
        def("CosAll", {"X", "Y"}, forall("j", implies(root_of_minus_one, cos_eq)));
        def("Sin", {"X", "Y"}, exists("j", and_(root_of_minus_one, sin_eq)), j_hint);
        def("SinAll", {"X", "Y"}, forall("j", implies(root_of_minus_one, sin_eq)));

        // t is tau/2j or -tau/2j, singled out by sin(t/2) = 1.
        auto T = var("T"), u = var("u"), h = var("h");
        def("Pi", {"T"},
            exists("j", exists("u", exists("h", conj({root_of_minus_one, pred("TauSet", {u}), eq(mul(mul(two, j), T), u),
                                                     eq(add(h, h), T), pred("Sin", {h, one()})})))),
            {{"j", Recipe::constant(SKElement(CycNum::zeta(4, 1)))},
             {"u", Recipe::eval(mul(mul(two, j), T))},
             {"h", Recipe::eval(mul(rat(make_rat(1, 2)), T))}});
        return t;
    }();
    return table;
}

// ---------------------------------------------------------------------------
// Desugaring

namespace detail {

inline BigInt rat_den(const TermP& t)
{
    switch (t->kind) {
    case Term::Kind::RatConst:
        return BigInt(t->value.get_den());
    case Term::Kind::Add:
        return lcm(rat_den(t->a), rat_den(t->b));
    case Term::Kind::Neg:
        return rat_den(t->a);
    case Term::Kind::Mul:
        return rat_den(t->a) * rat_den(t->b);
    default:
        return 1;
    }
}

inline TermP clear(const TermP& t, const BigInt& d)
{
    using namespace build;
    switch (t->kind) {
    case Term::Kind::RatConst: {
        Rat v = t->value * d;
        if (v.get_den() != 1)
            throw std::logic_error("denominator clearing left a fraction");
        return integer(BigInt(v.get_num()));
    }
    case Term::Kind::Add:
        return add(clear(t->a, d), clear(t->b, d));
    case Term::Kind::Neg:
        return neg(clear(t->a, d));
    case Term::Kind::Mul: {
        BigInt da = rat_den(t->a);
        return mul(clear(t->a, da), clear(t->b, BigInt(d / da)));
    }
    case Term::Kind::Exp: {
        if (rat_den(t->a) != 1)
            throw std::invalid_argument("a non-integer rational constant under E cannot be cleared");
        return E(clear(t->a, 1));
    }
    default:
        return d == 1 ? t : mul(integer(d), t);
    }
}

} // namespace detail

/// Removes RatConst nodes: each equation is multiplied through by the least common denominator.
inline FormulaP desugar(const FormulaP& f)
{
    using K = Formula::Kind;
    switch (f->kind) {
    case K::Eq: {
        BigInt d = lcm(detail::rat_den(f->lhs), detail::rat_den(f->rhs));
        return build::eq(detail::clear(f->lhs, d), detail::clear(f->rhs, d));
    }
    case K::Pred:
        throw std::invalid_argument("desugar: expand macros first");
    case K::Exists:
        return build::exists(f->var, desugar(f->a));
    case K::Forall:
        return build::forall(f->var, desugar(f->a));
    case K::Not:
        return build::not_(desugar(f->a));
    default:
        return build::node(f->kind, desugar(f->a), desugar(f->b));
    }
}

// ---------------------------------------------------------------------------
// Prenex form

enum class Quantifier { Exists, Forall };

struct Prenex {
    std::vector<std::pair<Quantifier, std::string>> prefix;
    FormulaP matrix;
};

namespace detail {

inline FormulaP rename_apart(const FormulaP& f, std::set<std::string>& used, std::map<std::string, TermP>& s,
                             NameSupply& names)
{
    using K = Formula::Kind;
    switch (f->kind) {
    case K::Eq:
        return build::eq(substitute(f->lhs, s), substitute(f->rhs, s));
    case K::Pred:
        throw std::invalid_argument("prenex: expand macros first");
    case K::Exists:
    case K::Forall: {
        std::string v = f->var;
        if (!used.insert(v).second)
            v = names.fresh(v);
        used.insert(v);
        auto prev = s.find(f->var);
        std::optional<TermP> saved;
        if (prev != s.end())
            saved = prev->second;
        s[f->var] = build::var(v);
        FormulaP body = rename_apart(f->a, used, s, names);
        if (saved)
            s[f->var] = *saved;
        else
            s.erase(f->var);
        return f->kind == K::Exists ? build::exists(v, body) : build::forall(v, body);
    }
    case K::Not:
        return build::not_(rename_apart(f->a, used, s, names));
    default: {
        FormulaP a = rename_apart(f->a, used, s, names);
        return build::node(f->kind, a, rename_apart(f->b, used, s, names));
    }
    }
}

using Prefix = std::vector<std::pair<Quantifier, std::string>>;

inline Prefix flip(Prefix p)
{
    for (auto& q : p)
        q.first = q.first == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists;
    return p;
}

// Interleave two independent prefixes (each kept in order) with the fewest quantifier blocks.
inline Prefix merge(const Prefix& x, const Prefix& y)
{
    const std::size_t n = x.size(), m = y.size();
    constexpr int inf = 1 << 29;
    // cost[i][j][q]: fewest blocks to emit x[i..], y[j..] when the last emitted quantifier is q (2 = none).
    std::vector<int> cost((n + 1) * (m + 1) * 3, inf);
    auto at = [&](std::size_t i, std::size_t j, int q) -> int& { return cost[(i * (m + 1) + j) * 3 + q]; };
    for (std::size_t i = n + 1; i-- > 0;)
        for (std::size_t j = m + 1; j-- > 0;)
            for (int q = 0; q < 3; ++q) {
                if (i == n && j == m) {
                    at(i, j, q) = 0;
                    continue;
                }
                int best = inf;
                if (i < n) {
                    int qq = static_cast<int>(x[i].first);
                    best = std::min(best, at(i + 1, j, qq) + (qq != q));
                }
                if (j < m) {
                    int qq = static_cast<int>(y[j].first);
                    best = std::min(best, at(i, j + 1, qq) + (qq != q));
                }
                at(i, j, q) = best;
            }
    Prefix out;
    std::size_t i = 0, j = 0;
    int q = 2;
    while (i < n || j < m) {
        int take_x = inf, take_y = inf;
        if (i < n) {
            int qq = static_cast<int>(x[i].first);
            take_x = at(i + 1, j, qq) + (qq != q);
        }
        if (j < m) {
            int qq = static_cast<int>(y[j].first);
            take_y = at(i, j + 1, qq) + (qq != q);
        }
        if (take_x <= take_y) {
            out.push_back(x[i]);
            q = static_cast<int>(x[i++].first);
        } else {
            out.push_back(y[j]);
            q = static_cast<int>(y[j++].first);
        }
    }
    return out;
}

inline Prenex pull(const FormulaP& f)
{
    using K = Formula::Kind;
    switch (f->kind) {
    case K::Eq:
        return {{}, f};
    case K::Exists:
    case K::Forall: {
        Prenex inner = pull(f->a);
        inner.prefix.insert(inner.prefix.begin(),
                            {f->kind == K::Exists ? Quantifier::Exists : Quantifier::Forall, f->var});
        return inner;
    }
    case K::Not: {
        Prenex inner = pull(f->a);
        return {flip(inner.prefix), build::not_(inner.matrix)};
    }
    case K::Implies: {
        Prenex a = pull(f->a), b = pull(f->b);
        return {merge(flip(a.prefix), b.prefix), build::implies(a.matrix, b.matrix)};
    }
    case K::And:
    case K::Or: {
        Prenex a = pull(f->a), b = pull(f->b);
        return {merge(a.prefix, b.prefix), build::node(f->kind, a.matrix, b.matrix)};
    }
    default:
        throw std::invalid_argument("prenex: unexpected node");
    }
}

} // namespace detail

/// Prenex decomposition of a macro-free formula. Bound variables already distinct keep their names.
inline Prenex prenex_parts(const FormulaP& f)
{
    std::set<std::string> used = free_vars(f);
    NameSupply names(all_vars(f));
    std::map<std::string, TermP> s;
    return detail::pull(detail::rename_apart(f, used, s, names));
}

inline FormulaP prenex(const FormulaP& f)
{
    Prenex p = prenex_parts(f);
    FormulaP out = p.matrix;
    for (std::size_t i = p.prefix.size(); i-- > 0;)
        out = p.prefix[i].first == Quantifier::Exists ? build::exists(p.prefix[i].second, out)
                                                      : build::forall(p.prefix[i].second, out);
    return out;
}

/// Alternation word of the prenex prefix, e.g. "∀∃∀"; empty for quantifier-free formulas.
inline std::string quantifier_complexity(const FormulaP& f)
{
    std::string word;
    int last = -1;
    for (const auto& [q, v] : prenex_parts(f).prefix) {
        int k = static_cast<int>(q);
        if (k != last)
            word += q == Quantifier::Exists ? "∃" : "∀";
        last = k;
    }
    return word;
}

inline bool is_quantifier_free(const FormulaP& f)
{
    switch (f->kind) {
    case Formula::Kind::Eq:
        return true;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
    case Formula::Kind::Pred:
        return false;
    case Formula::Kind::Not:
        return is_quantifier_free(f->a);
    default:
        return is_quantifier_free(f->a) && is_quantifier_free(f->b);
    }
}

/// The symbols of the official language occurring in f (connectives, quantifiers, function symbols).
inline std::set<std::string> symbols(const FormulaP& f)
{
    std::set<std::string> out;
    std::function<void(const TermP&)> term = [&](const TermP& t) {
        if (!t)
            return;
        switch (t->kind) {
        case Term::Kind::Zero: out.insert("0"); break;
        case Term::Kind::One: out.insert("1"); break;
        case Term::Kind::Var: break;
        case Term::Kind::Neg: out.insert("−"); break;
        case Term::Kind::Add: out.insert("+"); break;
        case Term::Kind::Mul: out.insert("·"); break;
        case Term::Kind::Exp: out.insert("E"); break;
        case Term::Kind::RatConst: out.insert("rat"); break;
        }
        term(t->a);
        term(t->b);
    };
    std::function<void(const FormulaP&)> go = [&](const FormulaP& g) {
        if (!g)
            return;
        switch (g->kind) {
        case Formula::Kind::Eq: out.insert("="); break;
        case Formula::Kind::And: out.insert("∧"); break;
        case Formula::Kind::Or: out.insert("∨"); break;
        case Formula::Kind::Not: out.insert("¬"); break;
        case Formula::Kind::Implies: out.insert("→"); break;
        case Formula::Kind::Exists: out.insert("∃"); break;
        case Formula::Kind::Forall: out.insert("∀"); break;
        case Formula::Kind::Pred: out.insert("pred:" + g->pred); break;
        }
        term(g->lhs);
        term(g->rhs);
        for (const auto& t : g->args)
            term(t);
        go(g->a);
        go(g->b);
    };
    go(f);
    return out;
}

// ---------------------------------------------------------------------------
// Rendering

enum class RenderFormat { Text, Latex, Sexpr };

namespace detail {

struct Glyphs {
    const char *mul, *neg, *eq, *and_, *or_, *not_, *implies, *exists, *forall, *qsep, *lpar, *rpar;
};

inline const Glyphs& glyphs(RenderFormat fmt)
{
    static const Glyphs text{"·", "-", " = ", " ∧ ", " ∨ ", "¬", " → ", "∃", "∀", " ", "(", ")"};
    static const Glyphs latex{" \\cdot ", "-", " = ", " \\wedge ", " \\vee ", "\\neg ", " \\rightarrow ", "\\exists ",
                              "\\forall ", "\\, ", "\\left(", "\\right)"};
    return fmt == RenderFormat::Latex ? latex : text;
}

inline std::string render_term(const TermP& t, RenderFormat fmt, int ctx)
{
    // ctx: 0 sum position, 1 factor position, 2 unary operand
    const Glyphs& g = glyphs(fmt);
    auto wrap = [&](const std::string& s, bool need) { return need ? g.lpar + s + g.rpar : s; };
    switch (t->kind) {
    case Term::Kind::Zero: return "0";
    case Term::Kind::One: return "1";
    case Term::Kind::Var: return t->name;
    case Term::Kind::RatConst: {
        std::string s = to_string(t->value);
        if (fmt == RenderFormat::Latex && t->value.get_den() != 1)
            s = "\\tfrac{" + t->value.get_num().get_str() + "}{" + t->value.get_den().get_str() + "}";
        return wrap(s, ctx > 0 && (t->value < 0 || t->value.get_den() != 1));
    }
    case Term::Kind::Neg: return wrap(std::string(g.neg) + render_term(t->a, fmt, 2), ctx > 0);
    case Term::Kind::Add: return wrap(render_term(t->a, fmt, 0) + " + " + render_term(t->b, fmt, 0), ctx > 0);
    case Term::Kind::Mul:
        return wrap(render_term(t->a, fmt, 1) + g.mul + render_term(t->b, fmt, 1), ctx > 1);
    case Term::Kind::Exp:
        return (fmt == RenderFormat::Latex ? std::string("E") : std::string("E")) + g.lpar + render_term(t->a, fmt, 0) +
               g.rpar;
    }
    return "?";
}

inline std::string render_formula(const FormulaP& f, RenderFormat fmt, bool nested)
{
    const Glyphs& g = glyphs(fmt);
    auto wrap = [&](const std::string& s) { return nested ? g.lpar + s + g.rpar : s; };
    switch (f->kind) {
    case Formula::Kind::Eq:
        return render_term(f->lhs, fmt, 0) + g.eq + render_term(f->rhs, fmt, 0);
    case Formula::Kind::Pred: {
        std::string s = fmt == RenderFormat::Latex ? "\\mathrm{" + f->pred + "}" : f->pred;
        s += g.lpar;
        for (std::size_t i = 0; i < f->args.size(); ++i)
            s += (i ? ", " : "") + render_term(f->args[i], fmt, 0);
        return s + g.rpar;
    }
    case Formula::Kind::Not:
        if (f->a->kind == Formula::Kind::Eq)
            return std::string(g.not_) + g.lpar + render_formula(f->a, fmt, false) + g.rpar;
        return std::string(g.not_) + render_formula(f->a, fmt, true);
    case Formula::Kind::And:
        return wrap(render_formula(f->a, fmt, true) + g.and_ + render_formula(f->b, fmt, f->b->kind != Formula::Kind::And));
    case Formula::Kind::Or:
        return wrap(render_formula(f->a, fmt, true) + g.or_ + render_formula(f->b, fmt, f->b->kind != Formula::Kind::Or));
    case Formula::Kind::Implies:
        return wrap(render_formula(f->a, fmt, true) + g.implies + render_formula(f->b, fmt, true));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
        std::string q = f->kind == Formula::Kind::Exists ? g.exists : g.forall;
        const FormulaP& body = f->a;
        bool quant = body->kind == Formula::Kind::Exists || body->kind == Formula::Kind::Forall;
        std::string inner = quant || body->kind == Formula::Kind::Eq || body->kind == Formula::Kind::Pred ||
                                    body->kind == Formula::Kind::Not
                                ? render_formula(body, fmt, false)
                                : g.lpar + render_formula(body, fmt, false) + g.rpar;
        return q + f->var + g.qsep + inner;
    }
    }
    return "?";
}

inline std::string sexpr_term(const TermP& t)
{
    switch (t->kind) {
    case Term::Kind::Zero: return "0";
    case Term::Kind::One: return "1";
    case Term::Kind::Var: return t->name;
    case Term::Kind::RatConst: return "(rat " + to_string(t->value) + ")";
    case Term::Kind::Neg: return "(- " + sexpr_term(t->a) + ")";
    case Term::Kind::Add: return "(+ " + sexpr_term(t->a) + " " + sexpr_term(t->b) + ")";
    case Term::Kind::Mul: return "(* " + sexpr_term(t->a) + " " + sexpr_term(t->b) + ")";
    case Term::Kind::Exp: return "(E " + sexpr_term(t->a) + ")";
    }
    return "?";
}

inline std::string sexpr_formula(const FormulaP& f)
{
    switch (f->kind) {
    case Formula::Kind::Eq: return "(= " + sexpr_term(f->lhs) + " " + sexpr_term(f->rhs) + ")";
    case Formula::Kind::And: return "(and " + sexpr_formula(f->a) + " " + sexpr_formula(f->b) + ")";
    case Formula::Kind::Or: return "(or " + sexpr_formula(f->a) + " " + sexpr_formula(f->b) + ")";
    case Formula::Kind::Not: return "(not " + sexpr_formula(f->a) + ")";
    case Formula::Kind::Implies: return "(implies " + sexpr_formula(f->a) + " " + sexpr_formula(f->b) + ")";
    case Formula::Kind::Exists: return "(exists " + f->var + " " + sexpr_formula(f->a) + ")";
    case Formula::Kind::Forall: return "(forall " + f->var + " " + sexpr_formula(f->a) + ")";
    case Formula::Kind::Pred: {
        std::string s = "(pred " + f->pred;
        for (const auto& t : f->args)
            s += " " + sexpr_term(t);
        return s + ")";
    }
    }
    return "?";
}

} // namespace detail

inline std::string render(const TermP& t, RenderFormat fmt = RenderFormat::Text)
{
    return fmt == RenderFormat::Sexpr ? detail::sexpr_term(t) : detail::render_term(t, fmt, 0);
}

inline std::string render(const FormulaP& f, RenderFormat fmt = RenderFormat::Text)
{
    return fmt == RenderFormat::Sexpr ? detail::sexpr_formula(f) : detail::render_formula(f, fmt, false);
}

// ---------------------------------------------------------------------------
// Builders

/// A definition: the formula as written with macros, its expansion into the bare language, and a witness plan.
struct Definition {
    std::string name;
    std::vector<std::string> free;
    FormulaP sugared;
    FormulaP formula;
    WitnessPlan plan;

    std::string complexity() const { return quantifier_complexity(formula); }
};

namespace detail {

inline Definition finish(std::string name, std::vector<std::string> free, FormulaP sugared, WitnessPlan plan = {})
{
    Definition d{std::move(name), std::move(free), sugared, nullptr, std::move(plan)};
    d.formula = desugar(expand_macros(sugared, standard_macros(), &d.plan));
    return d;
}

inline SKElement pi_hat()
{
    // tau / (2 zeta_4) = -zeta_4 tau / 2
    return SKElement(CycPoly::monomial(-CycNum::zeta(4, 1) * CycNum(make_rat(1, 2)), 1), CycPoly::constant(CycNum(1)));
}

} // namespace detail

/// The element tau/(2 zeta_4) of SK, which embeds as pi.
inline SKElement sk_pi() { return detail::pi_hat(); }

/// Z = {y : forall x [E(x) = 1 -> E(yx) = 1]}.
inline Definition def_int_forall()
{
    using namespace build;
    auto x = var("x"), y = var("y");
    return detail::finish("int_forall", {"y"}, forall("x", implies(eq(E(x), one()), eq(E(mul(y, x)), one()))));
}

/// Q = {y : exists z, w in Ker [z = w y]}, with w != 0.
inline Definition def_rat_exists()
{
    return detail::finish("rat_exists", {"y"}, build::pred("Rat", {build::var("y")}));
}

/// Theta(x) = exists t [E(t) = 2 and E(xt) in Q and x in Q].
inline Definition def_int_laczkovich()
{
    return detail::finish("int_laczkovich", {"x"}, build::pred("Theta", {build::var("x")}));
}

enum class KernelVariant { General, PrimeLog };

/// {tau, -tau} = {x : x in Ker and (forall y in Ker)(exists n in Z)[n x = y]}.
inline Definition def_kernel_generators(KernelVariant v = KernelVariant::General)
{
    return detail::finish(v == KernelVariant::General ? "kernel_generators" : "kernel_generators_prime_log", {"x"},
                          build::pred(v == KernelVariant::General ? "TauSet" : "TauSetLog", {build::var("x")}));
}

enum class TrigVariant { Exists, Forall };

inline Definition def_cos(TrigVariant v = TrigVariant::Exists)
{
    return detail::finish(v == TrigVariant::Exists ? "cos" : "cos_forall", {"x", "y"},
                          build::pred(v == TrigVariant::Exists ? "Cos" : "CosAll", {build::var("x"), build::var("y")}));
}

inline Definition def_sin(TrigVariant v = TrigVariant::Exists)
{
    return detail::finish(v == TrigVariant::Exists ? "sin" : "sin_forall", {"x", "y"},
                          build::pred(v == TrigVariant::Exists ? "Sin" : "SinAll", {build::var("x"), build::var("y")}));
}

inline Definition def_pi()
{
    WitnessPlan plan;
    plan.assignments["x"] = Recipe::constant(sk_pi());
    return detail::finish("pi", {"x"}, build::pred("Pi", {build::var("x")}), plan);
}

/// x = constant + sum r_n cos(2 pi s_n), each cosine pinned through pi.
inline Definition def_real_abelian(const CosDecomposition& d)
{
    using namespace build;
    for (const auto& [r, s] : d.terms)
        if (r == 0)
            throw std::invalid_argument("def_real_abelian: zero coefficient in decomposition");
    auto x = var("x");
    WitnessPlan plan;
    plan.assignments["x"] = Recipe::constant(SKElement(reconstruct(d)));
    std::vector<FormulaP> parts;
    TermP rhs = rat(d.constant);
    bool have_const = d.constant != 0;
    if (!d.terms.empty())
        parts.push_back(pred("Pi", {var("p")}));
    std::vector<std::string> bound;
    for (std::size_t k = 0; k < d.terms.size(); ++k) {
        const auto& [r, s] = d.terms[k];
        std::string a = "a" + std::to_string(k + 1), c = "c" + std::to_string(k + 1);
        // q a = 2 p' pi for s = p'/q, then c = cos(a).
        parts.push_back(eq(mul(integer(BigInt(s.get_den())), var(a)), mul(integer(BigInt(2 * s.get_num())), var("p"))));
        parts.push_back(pred("Cos", {var(a), var(c)}));
        TermP summand = r == 1 ? var(c) : mul(rat(r), var(c));
        rhs = (k == 0 && !have_const) ? summand : add(rhs, summand);
        bound.push_back(a);
        bound.push_back(c);
        CycNum cos_value = (root_of_unity(s) + root_of_unity(Rat(-s))) * CycNum(make_rat(1, 2));
        SKElement arg(CycPoly::monomial(-CycNum::zeta(4, 1) * CycNum(s), 1), CycPoly::constant(CycNum(1)));
        plan.assignments[a] = Recipe::constant(arg);
        plan.assignments[c] = Recipe::constant(SKElement(cos_value));
    }
    parts.push_back(eq(x, rhs));
    FormulaP body = conj(parts);
    for (std::size_t k = bound.size(); k-- > 0;)
        body = exists(bound[k], body);
    if (!d.terms.empty()) {
        body = exists("p", body);
        plan.assignments["p"] = Recipe::constant(sk_pi());
    }
    return detail::finish("real_abelian", {"x"}, body, plan);
}

/// +sqrt 2 = 2 cos(pi/4).
inline Definition def_sqrt2()
{
    Definition d = def_real_abelian(cos_decomposition(CycNum::zeta(8, 1) + CycNum::zeta(8, 7)));
    d.name = "sqrt2";
    return d;
}

} // namespace expdef

#endif
