#ifndef EXPDEF_PARSE_HPP
#define EXPDEF_PARSE_HPP

#include "formula.hpp"
#include "skmodel.hpp"

#include <cctype>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace expdef {

/// A syntax or evaluation error at a byte offset of the input.
struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos)
    {
    }
};

namespace detail {

/*
 * Recursive-descent parser for infix expressions over a value type V.
 *
 *   expr   := term (('+' | '-') term)*
 *   term   := unary (('*' | '/' | '·') unary)*
 *   unary  := '-' unary | power
 *   power  := atom ('^' ['-'] integer)?
 *   atom   := integer | '(' expr ')' | identifier [ '(' integer ')' ]
 *
 * Identifiers are resolved by the caller-supplied hook. Juxtaposition is not
 * multiplication, so "2x" is an error and "2*x" is required.
 */
template <class V>
class InfixParser {
public:
    using Ident = std::function<std::optional<V>(const std::string& name, std::optional<long> arg)>;
    using Divide = std::function<V(const V&, const V&)>;
    using Power = std::function<V(const V&, long)>;
    using Lift = std::function<V(const Rat&)>;

    InfixParser(std::string_view src, Ident ident, Divide divide, Power power, Lift lift = [](const Rat& q) { return V(q); })
        : s_(src), ident_(std::move(ident)), divide_(std::move(divide)), power_(std::move(power)), lift_(std::move(lift))
    {
    }

    V parse()
    {
        V v = expr();
        skip();
        if (i_ != s_.size())
            throw ParseError(std::string("unexpected '") + s_[i_] + "'", i_);
        return v;
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;
    Ident ident_;
    Divide divide_;
    Power power_;
    Lift lift_;

    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }

    bool eat(std::string_view tok)
    {
        skip();
        if (s_.substr(i_, tok.size()) == tok) {
            i_ += tok.size();
            return true;
        }
        return false;
    }

    BigInt integer()
    {
        skip();
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
            ++i_;
        if (start == i_)
            throw ParseError("expected an integer", start);
        return BigInt(std::string(s_.substr(start, i_ - start)));
    }

    V expr()
    {
        V acc = term();
        for (;;) {
            if (eat("+"))
                acc = acc + term();
            else if (eat("-"))
                acc = acc - term();
            else
                return acc;
        }
    }

    V term()
    {
        V acc = unary();
        for (;;) {
            if (eat("*") || eat("·")) {
                acc = acc * unary();
            } else if (eat("/")) {
                std::size_t at = i_;
                V d = unary();
                try {
                    acc = divide_(acc, d);
                } catch (const std::domain_error& e) {
                    throw ParseError(e.what(), at);
                }
            } else {
                return acc;
            }
        }
    }

    V unary()
    {
        if (eat("-"))
            return lift_(Rat(0)) - unary();
        if (eat("+"))
            return unary();
        return power();
    }

    V power()
    {
        V base = atom();
        if (!eat("^"))
            return base;
        bool neg = eat("-");
        std::size_t at = i_;
        BigInt e = integer();
        if (!e.fits_slong_p())
            throw ParseError("exponent too large", at);
        try {
            return power_(base, neg ? -e.get_si() : e.get_si());
        } catch (const std::domain_error& err) {
            throw ParseError(err.what(), at);
        }
    }

    V atom()
    {
        skip();
        std::size_t at = i_;
        if (i_ >= s_.size())
            throw ParseError("unexpected end of input", at);
        if (eat("(")) {
            V v = expr();
            if (!eat(")"))
                throw ParseError("expected ')'", i_);
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(s_[i_])))
            return lift_(Rat(integer()));
        if (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_') {
            std::size_t start = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                ++i_;
            std::string name(s_.substr(start, i_ - start));
            std::optional<long> arg;
            if (eat("(")) {
                std::size_t argat = i_;
                BigInt n = integer();
                if (!n.fits_slong_p() || n < 1)
                    throw ParseError("argument must be a positive integer", argat);
                arg = n.get_si();
                if (!eat(")"))
                    throw ParseError("expected ')'", i_);
            }
            if (auto v = ident_(name, arg))
                return *v;
            throw ParseError("unknown symbol '" + name + "'", start);
        }
        throw ParseError(std::string("unexpected '") + s_[i_] + "'", at);
    }
};

inline std::optional<CycNum> cyc_ident(const std::string& name, std::optional<long> arg)
{
    if ((name == "z" || name == "zeta") && arg)
        return CycNum::zeta(*arg, 1);
    if (name == "i" && !arg)
        return CycNum::zeta(4, 1);
    return std::nullopt;
}

} // namespace detail

/// Parses an element of Q^ab such as "z(8) + z(8)^-1" or "3/4"; z(n) is a primitive n-th root of unity and i is z(4).
inline CycNum parse_cyc_expr(std::string_view src)
{
    detail::InfixParser<CycNum> p(
        src, detail::cyc_ident, [](const CycNum& a, const CycNum& b) { return a * inverse(b); },
        [](const CycNum& a, long e) { return pow(a, e); });
    return p.parse();
}

/// Parses a polynomial in x with rational coefficients, e.g. "(x-1)*(x+1)".
inline RatPoly parse_poly(std::string_view src)
{
    detail::InfixParser<RatPoly> p(
        src,
        [](const std::string& name, std::optional<long> arg) -> std::optional<RatPoly> {
            if (name == "x" && !arg)
                return RatPoly::x();
            return std::nullopt;
        },
        [](const RatPoly& a, const RatPoly& b) {
            if (b.degree() != 0)
                throw std::domain_error(b.is_zero() ? "division by zero" : "division by a nonconstant polynomial");
            return a * RatPoly::constant(inverse(b.leading()));
        },
        [](const RatPoly& a, long e) {
            if (e < 0)
                throw std::domain_error("negative exponent in a polynomial");
            RatPoly acc = RatPoly::constant(Rat(1));
            for (long k = 0; k < e; ++k)
                acc = acc * a;
            return acc;
        },
        [](const Rat& q) { return RatPoly::constant(q); });
    return p.parse();
}

/// Parses an element of SK = Q^ab(tau): the grammar of parse_cyc_expr plus the symbol t (or tau).
inline SKElement parse_sk_expr(std::string_view src)
{
    detail::InfixParser<SKElement> p(
        src,
        [](const std::string& name, std::optional<long> arg) -> std::optional<SKElement> {
            if ((name == "t" || name == "tau") && !arg)
                return SKElement::tau();
            if (auto c = detail::cyc_ident(name, arg))
                return SKElement(*c);
            return std::nullopt;
        },
        [](const SKElement& a, const SKElement& b) { return a / b; },
        [](const SKElement& a, long e) {
            SKElement base = e < 0 ? inverse(a) : a;
            SKElement acc(1L);
            for (long k = 0; k < (e < 0 ? -e : e); ++k)
                acc = acc * base;
            return acc;
        });
    return p.parse();
}

// ---------------------------------------------------------------------------
// S-expressions

namespace detail {

struct Sexp {
    std::string atom; // empty for a list
    std::vector<Sexp> items;
    std::size_t pos = 0;

    bool is_list() const { return atom.empty(); }
};

class SexpReader {
public:
    explicit SexpReader(std::string_view s) : s_(s) {}

    Sexp read_all()
    {
        Sexp x = read();
        skip();
        if (i_ != s_.size())
            throw ParseError("trailing input", i_);
        return x;
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;

    void skip()
    {
        while (i_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
                ++i_;
            } else if (s_[i_] == ';') {
                while (i_ < s_.size() && s_[i_] != '\n')
                    ++i_;
            } else {
                break;
            }
        }
    }

    Sexp read()
    {
        skip();
        if (i_ >= s_.size())
            throw ParseError("unexpected end of input", i_);
        Sexp x;
        x.pos = i_;
        if (s_[i_] == ')')
            throw ParseError("unexpected ')'", i_);
        if (s_[i_] == '(') {
            ++i_;
            for (;;) {
                skip();
                if (i_ >= s_.size())
                    throw ParseError("unclosed '('", x.pos);
                if (s_[i_] == ')') {
                    ++i_;
                    return x;
                }
                x.items.push_back(read());
            }
        }
        std::size_t start = i_;
        while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')' &&
               s_[i_] != ';')
            ++i_;
        x.atom = std::string(s_.substr(start, i_ - start));
        return x;
    }
};

inline bool is_identifier(const std::string& s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

inline std::optional<Rat> try_rat(const std::string& s)
{
    try {
        return parse_rat(s);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline const std::string& head(const Sexp& x)
{
    if (!x.is_list() || x.items.empty() || x.items[0].is_list())
        throw ParseError("expected a list headed by an operator", x.pos);
    return x.items[0].atom;
}

inline void arity(const Sexp& x, std::size_t lo, std::size_t hi)
{
    std::size_t n = x.items.size() - 1;
    if (n < lo || n > hi)
        throw ParseError("wrong number of arguments to '" + x.items[0].atom + "'", x.pos);
}

inline TermP sexp_term(const Sexp& x)
{
    using namespace build;
    if (!x.is_list()) {
        if (x.atom == "0")
            return zero();
        if (x.atom == "1")
            return one();
        if (is_identifier(x.atom))
            return var(x.atom);
        if (auto q = try_rat(x.atom))
            return rat(*q);
        throw ParseError("bad term atom '" + x.atom + "'", x.pos);
    }
    const std::string& h = head(x);
    auto arg = [&](std::size_t k) { return sexp_term(x.items[k]); };
    if (h == "E") {
        arity(x, 1, 1);
        return E(arg(1));
    }
    if (h == "rat") {
        arity(x, 1, 1);
        if (x.items[1].is_list())
            throw ParseError("rat expects a literal p/q", x.items[1].pos);
        if (auto q = try_rat(x.items[1].atom))
            return rat(*q);
        throw ParseError("bad rational '" + x.items[1].atom + "'", x.items[1].pos);
    }
    if (h == "-") {
        arity(x, 1, 2);
        return x.items.size() == 2 ? neg(arg(1)) : sub(arg(1), arg(2));
    }
    if (h == "+" || h == "*") {
        arity(x, 2, static_cast<std::size_t>(-1));
        TermP acc = arg(x.items.size() - 1);
        for (std::size_t k = x.items.size() - 1; k-- > 1;)
            acc = h == "+" ? add(arg(k), acc) : mul(arg(k), acc);
        return acc;
    }
    throw ParseError("unknown term operator '" + h + "'", x.pos);
}

inline FormulaP sexp_formula(const Sexp& x)
{
    using namespace build;
    const std::string& h = head(x);
    auto sub = [&](std::size_t k) { return sexp_formula(x.items[k]); };
    if (h == "=") {
        arity(x, 2, 2);
        return eq(sexp_term(x.items[1]), sexp_term(x.items[2]));
    }
    if (h == "not") {
        arity(x, 1, 1);
        return not_(sub(1));
    }
    if (h == "implies") {
        arity(x, 2, 2);
        return implies(sub(1), sub(2));
    }
    if (h == "and" || h == "or") {
        arity(x, 2, static_cast<std::size_t>(-1));
        FormulaP acc = sub(x.items.size() - 1);
        for (std::size_t k = x.items.size() - 1; k-- > 1;)
            acc = h == "and" ? and_(sub(k), acc) : or_(sub(k), acc);
        return acc;
    }
    if (h == "exists" || h == "forall") {
        arity(x, 2, 2);
        if (x.items[1].is_list() || !is_identifier(x.items[1].atom))
            throw ParseError("expected a variable name", x.items[1].pos);
        return h == "exists" ? exists(x.items[1].atom, sub(2)) : forall(x.items[1].atom, sub(2));
    }
    if (h == "pred") {
        arity(x, 1, static_cast<std::size_t>(-1));
        if (x.items[1].is_list() || !is_identifier(x.items[1].atom))
            throw ParseError("expected a predicate name", x.items[1].pos);
        std::vector<TermP> args;
        for (std::size_t k = 2; k < x.items.size(); ++k)
            args.push_back(sexp_term(x.items[k]));
        return pred(x.items[1].atom, args);
    }
    throw ParseError("unknown formula operator '" + h + "'", x.pos);
}

} // namespace detail

/// Parses a formula in the s-expression syntax produced by render(f, RenderFormat::Sexpr).
inline FormulaP parse_formula(std::string_view src)
{
    return detail::sexp_formula(detail::SexpReader(src).read_all());
}

/// Parses a term in the same s-expression syntax.
inline TermP parse_term(std::string_view src)
{
    return detail::sexp_term(detail::SexpReader(src).read_all());
}

} // namespace expdef

#endif
