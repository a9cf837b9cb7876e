#ifndef EXPDEF_IO_HPP
#define EXPDEF_IO_HPP

#include "checker.hpp"
#include "parse.hpp"
#include "recognition.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace expdef {

/// Insertion-ordered JSON, so every document has a fixed field order.
using Json = nlohmann::ordered_json;

inline Json to_json(const Rat& q) { return to_string(q); }

inline Rat rat_from_json(const Json& j)
{
    if (j.is_number_integer())
        return Rat(BigInt(j.get<long>()));
    if (!j.is_string())
        throw std::invalid_argument("expected a rational as \"p/q\"");
    return parse_rat(j.get<std::string>());
}

inline Json to_json(const CycNum& a)
{
    Json c = Json::array();
    for (const auto& q : a.coeffs())
        c.push_back(to_json(q));
    return Json{{"level", a.level()}, {"coeffs", c}};
}

/// Accepts {"level", "coeffs"} with phi(level) coordinates, or an expression string.
inline CycNum cyc_from_json(const Json& j)
{
    if (j.is_string())
        return parse_cyc_expr(j.get<std::string>());
    if (j.is_number_integer())
        return CycNum(j.get<long>());
    std::vector<Rat> c;
    for (const auto& x : j.at("coeffs"))
        c.push_back(rat_from_json(x));
    return CycNum::from_coeffs(j.at("level").get<long>(), std::move(c));
}

inline Json to_json(const CycPoly& p)
{
    Json out = Json::array();
    for (const auto& c : p.coeffs())
        out.push_back(to_json(c));
    return out;
}

inline CycPoly cyc_poly_from_json(const Json& j)
{
    std::vector<CycNum> c;
    for (const auto& x : j)
        c.push_back(cyc_from_json(x));
    return CycPoly(std::move(c));
}

inline Json to_json(const SKElement& x) { return Json{{"num", to_json(x.num())}, {"den", to_json(x.den())}}; }

/// Accepts {"num", "den"} coefficient lists in tau, or an expression string such as "t/2".
inline SKElement sk_from_json(const Json& j)
{
    if (j.is_string())
        return parse_sk_expr(j.get<std::string>());
    return SKElement(cyc_poly_from_json(j.at("num")), cyc_poly_from_json(j.at("den")));
}

inline Json to_json(const RatPoly& p)
{
    Json out = Json::array();
    for (const auto& c : p.coeffs())
        out.push_back(to_json(c));
    return out;
}

inline Json to_json(const CosDecomposition& d)
{
    Json terms = Json::array();
    for (const auto& [r, s] : d.terms)
        terms.push_back(Json::array({to_json(r), to_json(s)}));
    return Json{{"constant", to_json(d.constant)}, {"terms", terms}, {"text", to_string(d)}};
}

inline CosDecomposition cos_decomposition_from_json(const Json& j)
{
    CosDecomposition d;
    d.constant = rat_from_json(j.at("constant"));
    for (const auto& t : j.at("terms"))
        d.terms.emplace_back(rat_from_json(t.at(0)), rat_from_json(t.at(1)));
    return d;
}

inline Json to_json(const RecognitionResult& r)
{
    Json j{{"verdict", to_string(r.verdict)}};
    j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
    j["witness_text"] = r.witness ? Json(to_string(*r.witness)) : Json(nullptr);
    j["bound_used"] = r.bound_used;
    j["levels_examined"] = r.levels_examined;
    j["search_exhausted"] = r.search_exhausted;
    j["diagnostic"] = r.diagnostic;
    return j;
}

inline Json to_json(const Recipe& r)
{
    switch (r.kind) {
    case Recipe::Kind::Const: return Json{{"kind", "const"}, {"value", to_json(r.value)}, {"text", to_string(r.value)}};
    case Recipe::Kind::Eval: return Json{{"kind", "eval"}, {"term", render(r.a, RenderFormat::Sexpr)}};
    case Recipe::Kind::Quotient:
        return Json{{"kind", "quotient"}, {"num", render(r.a, RenderFormat::Sexpr)}, {"den", render(r.b, RenderFormat::Sexpr)}};
    case Recipe::Kind::KerNum: return Json{{"kind", "ker_num"}, {"term", render(r.a, RenderFormat::Sexpr)}};
    case Recipe::Kind::KerDen: return Json{{"kind", "ker_den"}, {"term", render(r.a, RenderFormat::Sexpr)}};
    case Recipe::Kind::Log: return Json{{"kind", "log"}, {"of", to_json(r.log_of)}};
    case Recipe::Kind::Decimal: return Json{{"kind", "decimal"}, {"digits", r.decimal}};
    }
    return nullptr;
}

/// A bare string or number is shorthand for a constant SK value.
inline Recipe recipe_from_json(const Json& j)
{
    if (j.is_string() || j.is_number_integer())
        return Recipe::constant(j.is_string() ? parse_sk_expr(j.get<std::string>()) : SKElement(j.get<long>()));
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "const")
        return Recipe::constant(sk_from_json(j.at("value")));
    if (kind == "eval")
        return Recipe::eval(parse_term(j.at("term").get<std::string>()));
    if (kind == "quotient")
        return Recipe::quotient(parse_term(j.at("num").get<std::string>()), parse_term(j.at("den").get<std::string>()));
    if (kind == "ker_num")
        return Recipe::ker_num(parse_term(j.at("term").get<std::string>()));
    if (kind == "ker_den")
        return Recipe::ker_den(parse_term(j.at("term").get<std::string>()));
    if (kind == "log")
        return Recipe::log(rat_from_json(j.at("of")));
    if (kind == "decimal")
        return Recipe::decimal_value(j.at("digits").get<std::string>());
    throw std::invalid_argument("unknown recipe kind '" + kind + "'");
}

inline Json to_json(const WitnessPlan& p)
{
    Json a = Json::object();
    for (const auto& [v, r] : p.assignments)
        a[v] = to_json(r);
    Json pr = Json::object();
    for (const auto& [v, xs] : p.probes) {
        Json arr = Json::array();
        for (const auto& x : xs)
            arr.push_back(to_json(x));
        pr[v] = arr;
    }
    return Json{{"assignments", a}, {"probes", pr}};
}

inline WitnessPlan plan_from_json(const Json& j)
{
    WitnessPlan p;
    if (j.contains("assignments"))
        for (const auto& [v, r] : j.at("assignments").items())
            p.assignments[v] = recipe_from_json(r);
    if (j.contains("probes"))
        for (const auto& [v, xs] : j.at("probes").items())
            for (const auto& x : xs)
                p.probes[v].push_back(sk_from_json(x));
    return p;
}

inline Json to_json(const Definition& d)
{
    return Json{{"name", d.name},
                {"free", d.free},
                {"formula", render(d.formula, RenderFormat::Sexpr)},
                {"sugared", render(d.sugared, RenderFormat::Sexpr)},
                {"complexity", d.complexity()},
                {"witness_plan", to_json(d.plan)}};
}

inline Json to_json(const CheckReport& r)
{
    Json w = Json::object();
    for (const auto& [v, s] : r.witnesses)
        w[v] = s;
    Json j{{"verdict", to_string(r.verdict)},
           {"model", r.model},
           {"precision_bits", r.precision_bits},
           {"exact", r.exact},
           {"probe_verified", r.probe_verified},
           {"witnesses", w},
           {"first_failure", r.first_failure},
           {"failure_by_partiality", r.failure_by_partiality},
           {"identities", r.identities},
           {"atoms_checked", r.atoms_checked}};
    j["max_residual_log2"] = std::isfinite(r.max_residual_log2) ? Json(r.max_residual_log2) : Json(nullptr);
    j["diagnostic"] = r.diagnostic;
    return j;
}

inline Json to_json(const DeltaReport& d)
{
    return Json{{"transcendence_degree", d.transcendence_degree}, {"linear_dimension", d.linear_dimension}, {"delta", d.delta}};
}

inline Json to_json(const IntVector& v)
{
    Json out = Json::array();
    for (const auto& z : v)
        out.push_back(z.get_str());
    return out;
}

inline Json to_json(const FreenessReport& f)
{
    return Json{{"free", f.free},
                {"violation", f.free ? Json(nullptr) : Json(f.violation)},
                {"certificate", f.free ? Json(nullptr) : to_json(f.certificate)}};
}

inline Json to_json(const CkTauReport& c) { return Json{{"verdict", to_string(c.verdict)}, {"description", c.description}}; }

} // namespace expdef

#endif
