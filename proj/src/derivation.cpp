#include <algorithm>
#include <functional>

#include "witness/error.hpp"
#include "witness/sol2.hpp"

namespace witness::sol2 {

using kam::LK;
using kam::LTerm;

LTerm add_term() {
    using namespace kam;
    return lams({"m", "n", "f", "x"}, app(app(lvar("m"), lvar("f")), app(app(lvar("n"), lvar("f")), lvar("x"))));
}

LTerm mul_term() {
    using namespace kam;
    return lams({"m", "n", "f"}, app(lvar("m"), app(lvar("n"), lvar("f"))));
}

bool continuation_free(const LTerm& t) {
    switch (t->kind) {
    case LK::Cont: return false;
    case LK::Lam: return continuation_free(t->a);
    case LK::App: return continuation_free(t->a) && continuation_free(t->b);
    case LK::PairList:
        return std::all_of(t->values.begin(), t->values.end(), [](const LTerm& v) { return continuation_free(v); });
    default: return true;
    }
}

std::string RealizerRegistry::register_axiom_realizer(const std::string& id, SOFormula formula, LTerm term,
                                                      std::string note) {
    if (index_.count(id)) fail("DuplicateRealizer", "realizer id '" + id + "' is already registered");
    if (!term->free.empty()) fail("DerivationError", "realizer '" + id + "' has free variable " + term->free[0]);
    index_[id] = list_.size();
    list_.push_back(AxiomRealizer{id, std::move(formula), std::move(term), std::move(note)});
    return id;
}

const AxiomRealizer* RealizerRegistry::find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &list_[it->second];
}

std::vector<AxiomRealizer> builtin_realizers() {
    using namespace kam;
    auto x = eps::var("x"), y = eps::var("y");
    auto s = [](ETerm t) { return eps::succ(std::move(t)); };
    auto forall2 = [](SOFormula f) { return forall_ind("x", forall_ind("y", std::move(f))); };
    auto id = identity();
    // Int(x1) -> ... -> Int(xk) -> Int(f x1..xk) is realized by the
    // representation of f behind one storage operator per argument.
    auto T = storage_T();
    auto stored2 = [&](LTerm op) { return app(T, lam("n", app(T, app(op, lvar("n"))))); };
    return {
        {"succ_nonzero", neg(equal(s(eps::zero()), eps::zero())), lam("x", app(lvar("x"), identity())),
         "successor of zero is not zero; the argument passed is the identity"},
        {"succ_injective", forall2(imp(equal(s(x), s(y)), equal(x, y))), id, "successor is injective"},
        {"add_zero", forall_ind("x", equal(eps::add(x, eps::zero()), x)), id, "true equation"},
        {"add_succ", forall2(equal(eps::add(x, s(y)), s(eps::add(x, y)))), id, "true equation"},
        {"mul_zero", forall_ind("x", equal(eps::mul(x, eps::zero()), eps::zero())), id, "true equation"},
        {"mul_succ", forall2(equal(eps::mul(x, s(y)), eps::add(eps::mul(x, y), x))), id, "true equation"},
        {"int_zero", int_of(eps::zero()), church(0), "zero is an integer"},
        {"int_succ", forall_ind("x", imp(int_of(x), int_of(s(x)))), app(T, succ_term()), "stored successor"},
        {"int_add", forall2(imp(int_of(x), imp(int_of(y), int_of(eps::add(x, y))))), stored2(add_term()),
         "stored addition"},
        {"int_mul", forall2(imp(int_of(x), imp(int_of(y), int_of(eps::mul(x, y))))), stored2(mul_term()),
         "stored multiplication"},
    };
}

RealizerRegistry builtin_registry() {
    RealizerRegistry r;
    for (auto& a : builtin_realizers()) r.register_axiom_realizer(a.id, a.formula, a.term, a.note);
    return r;
}

Derivation parse_derivation(const std::string& text) { return Derivation{parse_sexps(text)}; }

namespace {

struct Line {
    LTerm term;
    SOFormula formula;
};

struct Checker {
    RealizerRegistry realizers;
    const eps::FunctionRegistry* reg;
    std::map<std::string, SOFormula> hyps;
    std::vector<Line> lines;
    std::size_t step = 0;
    int line_no = 0;

    [[noreturn]] void error(const std::string& why) const {
        fail("DerivationError", "step " + std::to_string(step) + " (line " + std::to_string(line_no) + "): " + why);
    }

    const Line& premise(const Sexp& s) const {
        if (!s.is_atom || s.atom.empty() || !std::all_of(s.atom.begin(), s.atom.end(), ::isdigit))
            error("expected a step number, got " + print_sexp(s));
        std::size_t i = std::stoul(s.atom);
        if (i == 0 || i > lines.size()) error("premise " + s.atom + " does not name an earlier step");
        return lines[i - 1];
    }

    std::string name(const Sexp& s, const char* what) const {
        if (!s.is_atom || !eps::is_identifier(s.atom)) error(std::string("expected ") + what);
        return s.atom;
    }

    std::vector<std::pair<std::string, SOFormula>> context_of(const LTerm& t) const {
        std::vector<std::pair<std::string, SOFormula>> out;
        for (const auto& v : t->free) {
            auto it = hyps.find(v);
            if (it != hyps.end()) out.emplace_back(v, it->second);
        }
        return out;
    }

    void need(const Sexp& s, std::size_t n) const {
        if (s.items.size() != n) error("rule " + s.items[1].atom + " expects " + std::to_string(n - 2) + " operand(s)");
    }

    Line rule(const Sexp& s) {
        if (s.items.size() < 3 || !s.items[1].is_atom) error("malformed rule line");
        const std::string& n = s.items[1].atom;
        if (n == "1") {
            need(s, 3);
            auto x = name(s.items[2], "a hypothesis name");
            auto it = hyps.find(x);
            if (it == hyps.end()) error("unknown hypothesis " + x);
            return {kam::lvar(x), it->second};
        }
        if (n == "2") {
            need(s, 4);
            const Line& f = premise(s.items[2]);
            const Line& a = premise(s.items[3]);
            if (f.formula->kind != SK::Imp) error("function premise is not an implication: " + print(f.formula));
            if (!alpha_eq(f.formula->l, a.formula))
                error("argument premise proves " + print(a.formula) + " but " + print(f.formula->l) + " is required");
            return {kam::app(f.term, a.term), f.formula->r};
        }
        if (n == "3") {
            need(s, 4);
            const Line& b = premise(s.items[2]);
            auto x = name(s.items[3], "a hypothesis name");
            auto it = hyps.find(x);
            if (it == hyps.end()) error("unknown hypothesis " + x);
            return {kam::lam(x, b.term), imp(it->second, b.formula)};
        }
        if (n == "4") {
            need(s, 3);
            const Line& p = premise(s.items[2]);
            const auto& f = p.formula;
            if (f->kind != SK::Imp || f->l->kind != SK::Imp || !alpha_eq(f->l->l, f->r))
                error("premise is not of the form ((A -> B) -> A): " + print(f));
            return {kam::app(kam::cc(), p.term), f->r};
        }
        if (n == "5" || n == "6") {
            if (s.items.size() != 4 && !(n == "6" && s.items.size() == 5)) error("rule " + n + " expects a premise and a variable");
            const Line& p = premise(s.items[2]);
            auto x = name(s.items[3], "a variable");
            for (const auto& [h, f] : context_of(p.term)) {
                auto fv = free_vars(f);
                if ((n == "5" ? fv.ind : fv.pred).count(x))
                    error("eigenvariable " + x + " is free in hypothesis " + h + ": " + print(f));
            }
            if (n == "5") return {p.term, forall_ind(x, p.formula)};
            std::optional<unsigned> k;
            if (s.items.size() == 5) {
                const auto& a = s.items[4];
                if (!a.is_atom || a.atom.empty() || !std::all_of(a.atom.begin(), a.atom.end(), ::isdigit))
                    error("expected a predicate arity");
                k = static_cast<unsigned>(std::stoul(a.atom));
            }
            std::function<void(const SOFormula&, bool)> scan = [&](const SOFormula& g, bool bound) {
                if (g->kind == SK::PredApp && g->name == x && !bound) {
                    if (k && *k != g->args.size()) error("predicate " + x + " used with arity " + std::to_string(g->args.size()));
                    k = static_cast<unsigned>(g->args.size());
                }
                bool b = bound || (g->kind == SK::ForallPred && g->name == x);
                if (g->l) scan(g->l, b);
                if (g->r) scan(g->r, b);
            };
            scan(p.formula, false);
            return {p.term, forall_pred(x, k.value_or(0), p.formula)};
        }
        if (n == "7") {
            need(s, 4);
            const Line& p = premise(s.items[2]);
            if (p.formula->kind != SK::ForallInd) error("premise is not a first-order universal: " + print(p.formula));
            ETerm t;
            try {
                t = parse_fo(s.items[3]);
            } catch (const Error& e) {
                error(std::string("malformed instantiation term: ") + e.what());
            }
            return {p.term, substitute(p.formula->l, p.formula->name, t)};
        }
        if (n == "8") {
            need(s, 5);
            const Line& p = premise(s.items[2]);
            if (p.formula->kind != SK::ForallPred) error("premise is not a second-order universal: " + print(p.formula));
            const Sexp& ps = s.items[3];
            if (ps.is_atom) error("comprehension parameters must be a list");
            std::vector<std::string> params;
            for (const auto& a : ps.items) {
                auto v = name(a, "a parameter name");
                if (std::find(params.begin(), params.end(), v) != params.end()) error("repeated parameter " + v);
                params.push_back(v);
            }
            if (params.size() != p.formula->arity)
                error("comprehension has " + std::to_string(params.size()) + " parameter(s), predicate " +
                      p.formula->name + " has arity " + std::to_string(p.formula->arity));
            SOFormula phi;
            try {
                phi = parse_so(s.items[4]);
            } catch (const Error& e) {
                error(std::string("malformed comprehension formula: ") + e.what());
            }
            try {
                return {p.term, substitute_pred(p.formula->l, p.formula->name, params, phi)};
            } catch (const Error& e) {
                error(e.what());
            }
        }
        error("unknown rule '" + n + "'");
    }

    Line equation(const Sexp& s) {
        if (s.items.size() != 2) error("equation leaf takes one formula");
        SOFormula f;
        try {
            f = parse_so(s.items[1]);
        } catch (const Error& e) {
            error(e.what());
        }
        auto e = match_equal(f);
        if (!e) error("not an equation: " + print(f));
        auto a = evaluate_closed(e->first, reg), b = evaluate_closed(e->second, reg);
        if (!a || !b) error("equation is not closed or uses an unregistered function: " + print(f));
        if (*a != *b) error("false equation: " + print(f));
        return {kam::identity(), f};
    }

    void run(const Derivation& d) {
        for (const auto& s : d.lines) {
            line_no = s.line;
            if (!s.is_list() || s.items.empty() || !s.items[0].is_atom) error("expected a derivation line");
            const std::string& h = s.items[0].atom;
            if (h == "hyp") {
                if (s.items.size() != 3) error("hyp takes a name and a formula");
                auto x = name(s.items[1], "a hypothesis name");
                SOFormula f;
                try {
                    f = parse_so(s.items[2]);
                } catch (const Error& e) {
                    error(e.what());
                }
                auto [it, fresh] = hyps.emplace(x, f);
                if (!fresh && !alpha_eq(it->second, f)) error("hypothesis " + x + " declared twice with different formulas");
                continue;
            }
            if (h == "realizer") {
                if (s.items.size() != 4) error("realizer takes an id, a formula and a term");
                auto id = name(s.items[1], "a realizer id");
                try {
                    realizers.register_axiom_realizer(id, parse_so(s.items[2]), kam::parse_lterm(s.items[3]), "script");
                } catch (const Error& e) {
                    error(e.what());
                }
                continue;
            }
            ++step;
            if (h == "axiom") {
                if (s.items.size() != 2) error("axiom takes a realizer id");
                auto id = name(s.items[1], "a realizer id");
                const auto* a = realizers.find(id);
                if (!a) error("unregistered axiom '" + id + "'");
                lines.push_back({a->term, a->formula});
            } else if (h == "equation") {
                lines.push_back(equation(s));
            } else if (h == "rule") {
                lines.push_back(rule(s));
            } else {
                error("unknown line kind '" + h + "'");
            }
        }
        if (lines.empty()) fail("DerivationError", "derivation has no steps");
    }
};

}  // namespace

Judgment check_derivation(const Derivation& d, const RealizerRegistry& realizers, const eps::FunctionRegistry* reg) {
    Checker c{realizers, reg, {}, {}, 0, 0};
    c.run(d);
    const Line& last = c.lines.back();
    return Judgment{c.context_of(last.term), last.term, last.formula};
}

}  // namespace witness::sol2
