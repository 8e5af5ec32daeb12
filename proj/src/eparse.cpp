#include <cctype>

#include "witness/error.hpp"
#include "witness/eterm.hpp"

namespace witness::eps {

namespace {

const std::set<std::string> kReserved = {"succ", "pred", "add", "mul", "eps", "=",      "not",
                                         "imp",  "fn",   "exists", "forall", "step", "function", "axiom"};

void expect_arity(const Sexp& s, std::size_t n, const std::string& head) {
    if (s.items.size() != n + 1)
        syntax_error(s, "'" + head + "' takes " + std::to_string(n) + " argument(s), got " +
                            std::to_string(s.items.size() - 1));
}

std::string binder(const Sexp& s) {
    if (!s.is_atom || !is_identifier(s.atom)) syntax_error(s, "expected a variable name");
    return s.atom;
}

}  // namespace

bool is_identifier(const std::string& a) {
    if (a.empty() || !std::isalpha(static_cast<unsigned char>(a[0]))) return false;
    for (char c : a)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
    return !kReserved.count(a);
}

void ParseContext::note_arity(const std::string& f, unsigned k, const Sexp& at) {
    auto [it, inserted] = arity.emplace(f, k);
    if (!inserted && it->second != k)
        fail("ArityError", at.where() + ": symbol '" + f + "' used with " + std::to_string(k) +
                               " argument(s) but has arity " + std::to_string(it->second));
}

ETerm parse_term(const Sexp& s, ParseContext& ctx) {
    if (s.is_atom) {
        if (s.atom == "0") return zero();
        if (is_identifier(s.atom)) return var(s.atom);
        syntax_error(s, "unexpected atom '" + s.atom + "' in term position");
    }
    if (s.items.empty() || !s.items[0].is_atom) syntax_error(s, "expected a term head");
    const std::string& h = s.items[0].atom;
    if (h == "succ" || h == "pred") {
        expect_arity(s, 1, h);
        auto a = parse_term(s.items[1], ctx);
        return h == "succ" ? succ(a) : pred(a);
    }
    if (h == "add" || h == "mul") {
        expect_arity(s, 2, h);
        auto a = parse_term(s.items[1], ctx), b = parse_term(s.items[2], ctx);
        return h == "add" ? add(a, b) : mul(a, b);
    }
    if (h == "eps") {
        expect_arity(s, 2, h);
        return eps(binder(s.items[1]), parse_formula(s.items[2], ctx));
    }
    if (h == "fn") {
        if (s.items.size() < 2 || !s.items[1].is_atom || !is_identifier(s.items[1].atom))
            syntax_error(s, "'fn' needs a function symbol");
        std::vector<ETerm> args;
        for (std::size_t i = 2; i < s.items.size(); ++i) args.push_back(parse_term(s.items[i], ctx));
        ctx.note_arity(s.items[1].atom, static_cast<unsigned>(args.size()), s);
        return fn(s.items[1].atom, std::move(args));
    }
    syntax_error(s.items[0], "unknown term head '" + h + "'");
}

EFormula parse_formula(const Sexp& s, ParseContext& ctx) {
    if (s.is_atom || s.items.empty() || !s.items[0].is_atom) syntax_error(s, "expected a formula");
    const std::string& h = s.items[0].atom;
    if (h == "=") {
        expect_arity(s, 2, h);
        return eq(parse_term(s.items[1], ctx), parse_term(s.items[2], ctx));
    }
    if (h == "not") {
        expect_arity(s, 1, h);
        return neg(parse_formula(s.items[1], ctx));
    }
    if (h == "imp") {
        expect_arity(s, 2, h);
        return imp(parse_formula(s.items[1], ctx), parse_formula(s.items[2], ctx));
    }
    if (h == "exists" || h == "forall") {
        expect_arity(s, 2, h);
        std::string x = binder(s.items[1]);
        EFormula body = parse_formula(s.items[2], ctx);
        ETerm witness = h == "exists" ? eps(x, body) : eps(x, neg(body));
        return substitute(body, x, witness);
    }
    syntax_error(s.items[0], "unknown formula head '" + h + "'");
}

ETerm parse_term(const std::string& text) {
    ParseContext ctx;
    return parse_term(parse_one_sexp(text), ctx);
}

EFormula parse_formula(const std::string& text) {
    ParseContext ctx;
    return parse_formula(parse_one_sexp(text), ctx);
}

}  // namespace witness::eps
