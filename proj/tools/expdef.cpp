#include <expdef/io.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace expdef;

namespace {

enum Exit { kOk = 0, kNegative = 1, kIndeterminate = 2, kUsage = 3 };

struct Output {
    Json doc;
    int code = kOk;
    std::string text;  // human rendering; generated from doc when empty
    std::string latex; // optional; falls back to text
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

long default_precision()
{
    if (const char* env = std::getenv("EXPDEF_PRECISION")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 64)
            return v;
        throw UsageError("EXPDEF_PRECISION must be an integer >= 64");
    }
    return 256;
}

std::string slurp(const std::string& path)
{
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// A formula argument is a path, "-" for stdin, or an inline s-expression.
std::string formula_source(const std::string& arg)
{
    if (!arg.empty() && arg.front() == '(')
        return arg;
    return slurp(arg);
}

std::string plain(const Json& j)
{
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_null())
        return "-";
    return j.dump();
}

std::string generic_text(const Json& doc)
{
    std::string out;
    for (const auto& [k, v] : doc.items())
        out += k + ": " + plain(v) + "\n";
    return out;
}

std::vector<Rat> rat_list(const std::string& csv)
{
    std::vector<Rat> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_rat(item));
    if (out.empty())
        throw UsageError("expected a comma-separated list of rationals");
    return out;
}

const std::map<std::string, std::function<Definition()>>& builtins()
{
    static const std::map<std::string, std::function<Definition()>> table{
        {"int_forall", [] { return def_int_forall(); }},
        {"rat_exists", [] { return def_rat_exists(); }},
        {"int_laczkovich", [] { return def_int_laczkovich(); }},
        {"kernel_generators", [] { return def_kernel_generators(KernelVariant::General); }},
        {"kernel_generators_prime_log", [] { return def_kernel_generators(KernelVariant::PrimeLog); }},
        {"cos", [] { return def_cos(TrigVariant::Exists); }},
        {"cos_forall", [] { return def_cos(TrigVariant::Forall); }},
        {"sin", [] { return def_sin(TrigVariant::Exists); }},
        {"sin_forall", [] { return def_sin(TrigVariant::Forall); }},
        {"pi", [] { return def_pi(); }},
        {"sqrt2", [] { return def_sqrt2(); }},
    };
    return table;
}

Definition builtin(const std::string& name)
{
    auto it = builtins().find(name);
    if (it == builtins().end())
        throw UsageError("unknown builtin definition '" + name + "'");
    return it->second();
}

Output definition_output(const Definition& d, const std::optional<CosDecomposition>& dec)
{
    Output o;
    o.doc = Json{{"name", d.name},
                 {"formula", render(d.formula, RenderFormat::Sexpr)},
                 {"complexity", d.complexity()},
                 {"witness_plan", to_json(d.plan)}};
    if (dec)
        o.doc["decomposition"] = to_json(*dec);
    o.text = "formula: " + render(d.formula) + "\nmacro form: " + render(d.sugared) +
             "\ncomplexity: " + (d.complexity().empty() ? "quantifier-free" : d.complexity()) + "\n";
    if (dec)
        o.text += "decomposition: " + to_string(*dec) + "\n";
    o.latex = render(d.formula, RenderFormat::Latex) + "\n";
    return o;
}

Output refusal(const std::string& verdict, const std::string& reason, int code)
{
    Output o;
    o.doc = Json{{"refused", true}, {"verdict", verdict}, {"reason", reason}};
    return o.code = code, o;
}

struct Options {
    std::string format = "json";
    std::optional<long> precision;
    std::string expr, minpoly, builtin_name, formula, witnesses, model = "sk", x, qs, t;
    long root = 0;
    long max_level = 0;
};

long precision(const Options& o) { return o.precision ? *o.precision : default_precision(); }

RecognitionResult run_recognize(const Options& o)
{
    RatPoly f = parse_poly(o.minpoly);
    if (f.degree() < 1)
        throw UsageError("the minimal polynomial must be nonconstant");
    RecognitionOptions opt;
    opt.max_level = o.max_level;
    opt.precision_bits = precision(o);
    if (o.root < 0 || o.root >= f.degree())
        throw UsageError("--root must lie between 0 and " + std::to_string(f.degree() - 1));
    try {
        return recognize(f, o.root, opt);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

Output cmd_define(const Options& o)
{
    if (!o.builtin_name.empty())
        return definition_output(builtin(o.builtin_name), std::nullopt);
    CycNum a;
    if (!o.expr.empty()) {
        a = parse_cyc_expr(o.expr);
    } else if (!o.minpoly.empty()) {
        RecognitionResult r = run_recognize(o);
        if (r.verdict == Verdict::NotAbelianUpToBound)
            return refusal(to_string(r.verdict),
                           "no abelian witness up to level " + std::to_string(r.bound_used) +
                               (r.diagnostic.empty() ? "" : " (" + r.diagnostic + ")"),
                           kIndeterminate);
        a = *r.witness;
    } else {
        throw UsageError("define needs --expr, --minpoly with --root, or --builtin");
    }
    if (!is_real_abelian(a))
        return refusal(to_string(Verdict::AbelianNotReal),
                       "the number is abelian but not real, so no parameter-free formula pins it down", kNegative);
    CosDecomposition d = cos_decomposition(a);
    Output out = definition_output(def_real_abelian(d), d);
    out.doc["input"] = to_json(a);
    return out;
}

Output cmd_decompose(const Options& o)
{
    CycNum a = parse_cyc_expr(o.expr);
    Output out;
    out.doc = Json{{"input", to_json(a)}, {"real_abelian", is_real_abelian(a)}};
    if (!is_real_abelian(a)) {
        out.doc["decomposition"] = nullptr;
        out.code = kNegative;
        return out;
    }
    CosDecomposition d = cos_decomposition(a);
    out.doc["decomposition"] = to_json(d);
    out.text = to_string(d) + "\n";
    return out;
}

Output cmd_recognize(const Options& o)
{
    RecognitionResult r = run_recognize(o);
    Output out;
    out.doc = to_json(r);
    out.code = r.verdict == Verdict::NotAbelianUpToBound ? kIndeterminate : kOk;
    return out;
}

Output cmd_check(const Options& o)
{
    FormulaP f;
    WitnessPlan plan;
    if (!o.builtin_name.empty()) {
        Definition d = builtin(o.builtin_name);
        f = d.formula;
        plan = d.plan;
    } else if (!o.formula.empty()) {
        f = parse_formula(formula_source(o.formula));
    } else {
        throw UsageError("check needs --formula or --builtin");
    }
    if (!o.witnesses.empty()) {
        WitnessPlan given = plan_from_json(Json::parse(slurp(o.witnesses)));
        for (auto& [v, r] : given.assignments)
            plan.assignments[v] = r;
        for (auto& [v, xs] : given.probes)
            plan.probes[v] = xs;
    }
    f = desugar(expand_macros(f, standard_macros(), &plan));
    CheckReport rep;
    if (o.model == "sk")
        rep = check_with_witnesses(SKModel{}, f, plan);
    else if (o.model == "numeric")
        rep = check_with_witnesses(NumericModel(precision(o)), f, plan);
    else
        throw UsageError("--model must be sk or numeric");
    Output out;
    out.doc = to_json(rep);
    out.code = rep.verdict == CheckVerdict::Pass ? kOk : rep.verdict == CheckVerdict::Fail ? kNegative : kIndeterminate;
    return out;
}

Output cmd_render(const Options& o)
{
    FormulaP f;
    if (!o.builtin_name.empty())
        f = builtin(o.builtin_name).formula;
    else if (!o.formula.empty())
        f = parse_formula(formula_source(o.formula));
    else
        throw UsageError("render needs --formula or --builtin");
    Output out;
    out.doc = Json{{"sexpr", render(f, RenderFormat::Sexpr)},
                   {"text", render(f)},
                   {"latex", render(f, RenderFormat::Latex)},
                   {"complexity", quantifier_complexity(prenex(desugar(expand_macros(f, standard_macros()))))}};
    out.text = render(f) + "\n";
    out.latex = render(f, RenderFormat::Latex) + "\n";
    return out;
}

Output cmd_sigma1(const Options& o)
{
    SKElement x = parse_sk_expr(o.x);
    SKElement y = sigma1(x);
    Output out;
    out.doc = Json{{"input", to_json(x)}, {"sigma1", to_json(y)}, {"text", to_string(y)}};
    out.text = to_string(y) + "\n";
    return out;
}

Output cmd_delta(const Options& o)
{
    Output out;
    out.doc = to_json(delta_SK_report(rat_list(o.qs)));
    return out;
}

Output cmd_free(const Options& o)
{
    FreenessReport r = is_free_tuple(rat_list(o.qs));
    Output out;
    out.doc = to_json(r);
    out.code = r.free ? kOk : kNegative;
    return out;
}

Output cmd_cktau(const Options& o)
{
    CycNum t = parse_cyc_expr(o.t);
    if (t.is_zero())
        throw UsageError("--t must be nonzero");
    Output out;
    out.doc = to_json(ck_tau_involution_test(t));
    return out;
}

void emit(const Output& out, const std::string& format)
{
    if (format == "json")
        std::cout << out.doc.dump(2) << "\n";
    else if (format == "latex" && !out.latex.empty())
        std::cout << out.latex;
    else
        std::cout << (out.text.empty() ? generic_text(out.doc) : out.text);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exponential definability toolkit: exact Q^ab arithmetic, formula compiler and model checker"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text", "latex"}));
    app.add_option("--precision", o.precision, "Working precision in bits (default: EXPDEF_PRECISION or 256)")
        ->check(CLI::Range(64L, 1L << 20));

    auto* define = app.add_subcommand("define", "Compile a real abelian number into its defining formula");
    define->add_option("--expr", o.expr, "Cyclotomic expression, e.g. \"z(8) + z(8)^-1\"");
    define->add_option("--minpoly", o.minpoly, "Minimal polynomial in x");
    define->add_option("--root", o.root, "0-based root index, ordered by real then imaginary part");
    define->add_option("--max-level", o.max_level, "Largest cyclotomic level to search (0 = automatic)");
    define->add_option("--builtin", o.builtin_name, "A named definition such as pi or int_forall");

    auto* decompose = app.add_subcommand("decompose", "Write a real abelian number as a rational cosine sum");
    decompose->add_option("--expr", o.expr, "Cyclotomic expression")->required();

    auto* recog = app.add_subcommand("recognize", "Decide whether a root of a polynomial lies in Q^ab");
    recog->add_option("--minpoly", o.minpoly, "Polynomial in x")->required();
    recog->add_option("--root", o.root, "0-based root index, ordered by real then imaginary part");
    recog->add_option("--max-level", o.max_level, "Largest cyclotomic level to search (0 = automatic)");

    auto* check = app.add_subcommand("check", "Check a formula against a witness plan");
    check->add_option("--formula", o.formula, "S-expression file, '-' for stdin, or inline text");
    check->add_option("--builtin", o.builtin_name, "A named definition with its own witness plan");
    check->add_option("--model", o.model, "sk or numeric")->check(CLI::IsMember({"sk", "numeric"}));
    check->add_option("--witnesses", o.witnesses, "Witness plan JSON, merged over the builtin plan");

    auto* render_cmd = app.add_subcommand("render", "Render a formula as text, LaTeX and s-expression");
    render_cmd->add_option("--formula", o.formula, "S-expression file, '-' for stdin, or inline text");
    render_cmd->add_option("--builtin", o.builtin_name, "A named definition");

    auto* sk = app.add_subcommand("sk", "Operations in the standard-kernel model Q^ab(tau)");
    sk->require_subcommand(1);
    sk->fallthrough();
    auto* s1 = sk->add_subcommand("sigma1", "Apply the involution tau -> -tau with complex conjugation");
    s1->add_option("--x", o.x, "SK expression, e.g. \"(z(3)*t + 1)/t\"")->required();
    auto* delta = sk->add_subcommand("delta", "Predimension of {q tau}");
    delta->add_option("--q", o.qs, "Comma-separated rationals")->required();
    auto* fr = sk->add_subcommand("free", "Freeness of the tuple (q_i tau)");
    fr->add_option("--q", o.qs, "Comma-separated rationals")->required();
    auto* ck = sk->add_subcommand("cktau", "Whether conjugation extends to Q^ab(t) for a kernel generator t");
    ck->add_option("--t", o.t, "Nonzero cyclotomic expression")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        Output out;
        if (define->parsed())
            out = cmd_define(o);
        else if (decompose->parsed())
            out = cmd_decompose(o);
        else if (recog->parsed())
            out = cmd_recognize(o);
        else if (check->parsed())
            out = cmd_check(o);
        else if (render_cmd->parsed())
            out = cmd_render(o);
        else if (s1->parsed())
            out = cmd_sigma1(o);
        else if (delta->parsed())
            out = cmd_delta(o);
        else if (fr->parsed())
            out = cmd_free(o);
        else
            out = cmd_cktau(o);
        emit(out, o.format);
        return out.code;
    } catch (const ParseError& e) {
        std::cerr << "expdef: parse error: " << e.what() << "\n";
    } catch (const UsageError& e) {
        std::cerr << "expdef: " << e.what() << "\n";
    } catch (const Json::exception& e) {
        std::cerr << "expdef: bad JSON: " << e.what() << "\n";
    } catch (const std::logic_error& e) {
        std::cerr << "expdef: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "expdef: " << e.what() << "\n";
    }
    return kUsage;
}
