#include <algorithm>
#include <functional>
#include <set>

#include "witness/error.hpp"
#include "witness/proof.hpp"

namespace witness::eps {

namespace {

int parse_int(const Sexp& s, const std::string& what) {
    if (!s.is_atom || s.atom.empty() || s.atom.size() > 6) syntax_error(s, "expected " + what);
    for (char c : s.atom)
        if (c < '0' || c > '9') syntax_error(s, "expected " + what);
    return std::stoi(s.atom);
}

std::string ident(const Sexp& s) {
    if (!s.is_atom || !is_identifier(s.atom)) syntax_error(s, "expected an identifier");
    return s.atom;
}

void need(const Sexp& s, std::size_t lo, std::size_t hi, const std::string& what) {
    std::size_t n = s.items.size();
    if (n < lo || n > hi) syntax_error(s, "malformed " + what);
}

Justification parse_just(const Sexp& s, ParseContext& ctx) {
    if (!s.is_list() || s.items.empty() || !s.items[0].is_atom) syntax_error(s, "expected a justification");
    const std::string& h = s.items[0].atom;
    Justification j;
    if (h == "I") {
        need(s, 4, 5, "group I justification");
        j.kind = JustKind::AxiomI;
        j.scheme = parse_int(s.items[1], "scheme number");
        if (j.scheme < 1 || j.scheme > 3) syntax_error(s.items[1], "group I has schemes 1-3");
        for (std::size_t i = 2; i < s.items.size(); ++i) j.formulas.push_back(parse_formula(s.items[i], ctx));
        if (j.formulas.size() != (j.scheme == 2 ? 3u : 2u)) syntax_error(s, "wrong number of formulas for I." + std::to_string(j.scheme));
        return j;
    }
    if (h == "II") {
        need(s, 3, 5, "group II justification");
        j.kind = JustKind::AxiomII;
        j.scheme = parse_int(s.items[1], "scheme number");
        if (j.scheme < 1 || j.scheme > 13) syntax_error(s.items[1], "group II has schemes 01-13");
        for (std::size_t i = 2; i < s.items.size(); ++i) j.terms.push_back(parse_term(s.items[i], ctx));
        static const std::size_t want[] = {0, 1, 2, 1, 1, 2, 1, 2, 2, 2, 3, 3, 3, 3};
        if (j.terms.size() != want[j.scheme]) syntax_error(s, "wrong number of terms for II." + std::to_string(j.scheme));
        return j;
    }
    if (h == "III") {
        need(s, 4, 8, "group III justification");
        j.kind = JustKind::Critical;
        j.scheme = parse_int(s.items[1], "scheme number");
        if (j.scheme < 1 || j.scheme > 4) syntax_error(s.items[1], "group III has schemes 1-4");
        std::size_t k = 2;
        j.x = ident(s.items[k++]);
        if (j.scheme == 4) {
            if (s.items.size() != 7) syntax_error(s, "III.4 takes x y A a b");
            j.y = ident(s.items[k++]);
        } else if (s.items.size() != (j.scheme == 3 ? 4u : 5u)) {
            syntax_error(s, "wrong arguments for III." + std::to_string(j.scheme));
        }
        j.formulas.push_back(parse_formula(s.items[k++], ctx));
        for (; k < s.items.size(); ++k) j.terms.push_back(parse_term(s.items[k], ctx));
        return j;
    }
    if (h == "user") {
        need(s, 2, 64, "user-axiom justification");
        j.kind = JustKind::UserAxiom;
        j.user_id = ident(s.items[1]);
        for (std::size_t i = 2; i < s.items.size(); ++i) j.terms.push_back(parse_term(s.items[i], ctx));
        return j;
    }
    if (h == "mp") {
        need(s, 3, 3, "mp justification");
        j.kind = JustKind::MP;
        int a = parse_int(s.items[1], "step number"), b = parse_int(s.items[2], "step number");
        if (a < 1 || b < 1) syntax_error(s, "step numbers start at 1");
        j.imp = static_cast<std::size_t>(a - 1);
        j.ant = static_cast<std::size_t>(b - 1);
        return j;
    }
    syntax_error(s.items[0], "unknown justification '" + h + "'");
}

std::string pad2(int n) { return (n < 10 ? "0" : "") + std::to_string(n); }

std::string print_just(const Justification& j) {
    std::string out;
    switch (j.kind) {
    case JustKind::AxiomI: out = "(I " + std::to_string(j.scheme); break;
    case JustKind::AxiomII: out = "(II " + pad2(j.scheme); break;
    case JustKind::Critical:
        out = "(III " + std::to_string(j.scheme) + " " + j.x;
        if (j.scheme == 4) out += " " + j.y;
        break;
    case JustKind::UserAxiom: out = "(user " + j.user_id; break;
    case JustKind::MP: return "(mp " + std::to_string(j.imp + 1) + " " + std::to_string(j.ant + 1) + ")";
    }
    for (const auto& f : j.formulas) out += " " + print(f);
    for (const auto& t : j.terms) out += " " + print(t);
    return out + ")";
}

}  // namespace

Proof parse_proof(const std::string& text) {
    Proof p;
    ParseContext ctx;
    for (const auto& s : parse_sexps(text)) {
        if (!s.is_list() || s.items.empty() || !s.items[0].is_atom) syntax_error(s, "expected a proof line");
        const std::string& h = s.items[0].atom;
        if (h == "function") {
            need(s, 3, 3, "function declaration");
            std::string f = ident(s.items[1]);
            int k = parse_int(s.items[2], "arity");
            ctx.note_arity(f, static_cast<unsigned>(k), s);
            p.functions[f] = static_cast<unsigned>(k);
        } else if (h == "axiom") {
            need(s, 4, 4, "axiom declaration");
            UserAxiom ax;
            ax.id = ident(s.items[1]);
            if (!s.items[2].is_list()) syntax_error(s.items[2], "expected a variable list");
            for (const auto& v : s.items[2].items) ax.vars.push_back(ident(v));
            ax.formula = parse_formula(s.items[3], ctx);
            if (p.axioms.count(ax.id)) syntax_error(s, "duplicate axiom id '" + ax.id + "'");
            p.axioms[ax.id] = ax;
        } else if (h == "step") {
            need(s, 3, 3, "proof step");
            ProofStep st;
            st.formula = parse_formula(s.items[1], ctx);
            st.just = parse_just(s.items[2], ctx);
            st.line = s.line;
            p.steps.push_back(std::move(st));
        } else {
            syntax_error(s.items[0], "unknown proof line '" + h + "'");
        }
    }
    for (const auto& [f, k] : ctx.arity) {
        auto it = p.functions.find(f);
        if (it == p.functions.end()) p.functions[f] = k;
    }
    return p;
}

std::string print_proof(const Proof& p) {
    std::string out;
    for (const auto& [f, k] : p.functions) out += "(function " + f + " " + std::to_string(k) + ")\n";
    for (const auto& [id, ax] : p.axioms) {
        out += "(axiom " + id + " (";
        for (std::size_t i = 0; i < ax.vars.size(); ++i) out += (i ? " " : "") + ax.vars[i];
        out += ") " + print(ax.formula) + ")\n";
    }
    for (const auto& st : p.steps) out += "(step " + print(st.formula) + " " + print_just(st.just) + ")\n";
    return out;
}

ETerm critical_term(const Justification& j) {
    if (j.kind != JustKind::Critical) fail("InvalidArgument", "not a critical-formula justification");
    return eps(j.x, j.formulas.at(0));
}

EFormula schema_instance(const Justification& j, const Proof& p) {
    const auto& F = j.formulas;
    const auto& T = j.terms;
    switch (j.kind) {
    case JustKind::AxiomI:
        if (j.scheme == 1) return imp(F[0], imp(F[1], F[0]));
        if (j.scheme == 2)
            return imp(imp(F[0], imp(F[1], F[2])), imp(imp(F[0], F[1]), imp(F[0], F[2])));
        return imp(imp(neg(F[0]), neg(F[1])), imp(F[1], F[0]));
    case JustKind::AxiomII: {
        ETerm a = T[0];
        ETerm b = T.size() > 1 ? T[1] : nullptr;
        ETerm c = T.size() > 2 ? T[2] : nullptr;
        switch (j.scheme) {
        case 1: return eq(a, a);
        case 2: return imp(eq(succ(a), succ(b)), eq(a, b));
        case 3: return imp(neg(eq(a, zero())), eq(pred(succ(a)), a));
        case 4: return eq(add(a, zero()), a);
        case 5: return eq(add(a, succ(b)), succ(add(a, b)));
        case 6: return eq(mul(a, zero()), zero());
        case 7: return eq(mul(a, succ(b)), add(mul(a, b), a));
        case 8: return imp(eq(a, b), eq(succ(a), succ(b)));
        case 9: return imp(eq(a, b), eq(pred(a), pred(b)));
        case 10: return imp(eq(a, b), eq(add(a, c), add(b, c)));
        case 11: return imp(eq(a, b), eq(add(c, a), add(c, b)));
        case 12: return imp(eq(a, b), eq(mul(a, c), mul(b, c)));
        case 13: return imp(eq(a, b), eq(mul(c, a), mul(c, b)));
        }
        break;
    }
    case JustKind::Critical: {
        const EFormula& A = F[0];
        ETerm E = eps(j.x, A);
        switch (j.scheme) {
        case 1: return imp(substitute(A, j.x, T[0]), substitute(A, j.x, E));
        case 2: return imp(substitute(A, j.x, T[0]), neg(eq(E, succ(T[0]))));
        case 3: return imp(neg(substitute(A, j.x, E)), eq(E, zero()));
        case 4:
            return imp(eq(T[0], T[1]), eq(substitute(E, j.y, T[0]), substitute(E, j.y, T[1])));
        }
        break;
    }
    case JustKind::UserAxiom: {
        auto it = p.axioms.find(j.user_id);
        if (it == p.axioms.end()) fail("UnknownUserAxiom", "no axiom named '" + j.user_id + "'");
        const auto& ax = it->second;
        if (ax.vars.size() != T.size())
            fail("InstantiationError", "axiom '" + ax.id + "' takes " + std::to_string(ax.vars.size()) +
                                           " term(s), got " + std::to_string(T.size()));
        std::map<std::string, ETerm> s;
        for (std::size_t i = 0; i < T.size(); ++i) s[ax.vars[i]] = T[i];
        return substitute(ax.formula, s);
    }
    case JustKind::MP: break;
    }
    fail("InvalidArgument", "justification has no schema instance");
}

namespace {

void check_symbols(const ETerm& t, const Proof& p, const FunctionRegistry& reg, std::vector<std::string>& errs);

void check_symbols(const EFormula& f, const Proof& p, const FunctionRegistry& reg, std::vector<std::string>& errs) {
    if (f->kind == FK::Eq) {
        check_symbols(f->l, p, reg, errs);
        check_symbols(f->r, p, reg, errs);
        return;
    }
    check_symbols(f->a, p, reg, errs);
    if (f->b) check_symbols(f->b, p, reg, errs);
}

void check_symbols(const ETerm& t, const Proof& p, const FunctionRegistry& reg, std::vector<std::string>& errs) {
    if (t->kind == TK::FnApp) {
        auto k = static_cast<unsigned>(t->args.size());
        auto it = p.functions.find(t->name);
        const auto* e = reg.find(t->name);
        if (it == p.functions.end() && !e)
            errs.push_back("function symbol '" + t->name + "' is neither declared nor registered");
        else if ((it != p.functions.end() && it->second != k) || (e && e->arity != k))
            errs.push_back("ArityError: '" + t->name + "' applied to " + std::to_string(k) + " argument(s)");
    }
    if (t->kind == TK::Eps) {
        check_symbols(t->body, p, reg, errs);
        try {
            split_eps(t);
        } catch (const Error& e) {
            errs.push_back(e.kind() + ": " + e.what());
        }
    }
    for (const auto& a : t->args) check_symbols(a, p, reg, errs);
}

}  // namespace

std::vector<StepError> check_proof(const Proof& p, const FunctionRegistry& reg) {
    std::vector<StepError> errors;
    for (const auto& [id, ax] : p.axioms) {
        auto fv = free_vars(ax.formula);
        for (const auto& v : fv)
            if (std::find(ax.vars.begin(), ax.vars.end(), v) == ax.vars.end())
                errors.push_back({0, "axiom '" + id + "' has undeclared free variable '" + v + "'"});
    }
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const auto& st = p.steps[i];
        auto err = [&](const std::string& r) { errors.push_back({i, r}); };
        if (!is_closed(st.formula)) {
            err("formula is not closed");
            continue;
        }
        std::vector<std::string> sym;
        check_symbols(st.formula, p, reg, sym);
        for (const auto& s : sym) err(s);
        if (!sym.empty()) continue;
        const auto& j = st.just;
        if (j.kind == JustKind::MP) {
            if (j.imp >= i || j.ant >= i) {
                err("modus ponens must cite earlier steps");
                continue;
            }
            const auto& f = p.steps[j.imp].formula;
            if (f->kind != FK::Imp) {
                err("modus ponens premise " + std::to_string(j.imp + 1) + " is not an implication");
                continue;
            }
            if (!alpha_eq(f->a, p.steps[j.ant].formula)) {
                err("antecedent of step " + std::to_string(j.imp + 1) + " does not match step " +
                    std::to_string(j.ant + 1));
                continue;
            }
            if (!alpha_eq(f->b, st.formula)) err("formula is not the consequent of step " + std::to_string(j.imp + 1));
            continue;
        }
        try {
            EFormula inst = schema_instance(j, p);
            if (!alpha_eq(inst, st.formula)) {
                err("formula does not match the schema instance " + print(inst));
                continue;
            }
            if (j.kind == JustKind::Critical && j.scheme == 4) {
                auto c1 = category_of(substitute(critical_term(j), j.y, j.terms[0]));
                auto c2 = category_of(substitute(critical_term(j), j.y, j.terms[1]));
                if (!(c1 == c2)) err("III.4 instance relates epsilon-terms of two different categories");
            }
        } catch (const Error& e) {
            err(e.kind() + ": " + e.what());
        }
    }
    return errors;
}

namespace {

std::vector<ETerm> all_eps(const Proof& p) {
    std::vector<ETerm> out;
    for (const auto& st : p.steps) collect_eps_postorder(st.formula, out);
    return out;
}

}  // namespace

std::vector<Category> enumerate_categories(const Proof& p) {
    std::vector<Category> cats;
    std::map<std::string, std::size_t> index;
    auto intern = [&](const Category& c) {
        auto [it, inserted] = index.emplace(c.key, cats.size());
        if (inserted) cats.push_back(c);
        return it->second;
    };
    for (const auto& t : all_eps(p)) intern(category_of(t));
    // constraint: an epsilon-term inside a skeleton that mentions the
    // skeleton's bound variable has its category listed first
    std::vector<std::set<std::size_t>> preds(cats.size());
    for (std::size_t k = 0; k < cats.size(); ++k) {
        const auto& sk = cats[k].skeleton;
        std::vector<ETerm> inner;
        collect_eps_postorder(sk->body, inner);
        for (const auto& b : inner) {
            if (!occurs_free(sk->name, b)) continue;
            std::size_t j = intern(category_of(b));
            if (j >= preds.size()) preds.resize(j + 1);
            if (j != k) preds[k].insert(j);
        }
    }
    preds.resize(cats.size());
    std::vector<Category> out;
    std::vector<bool> done(cats.size(), false);
    for (std::size_t placed = 0; placed < cats.size(); ++placed) {
        std::size_t pick = cats.size();
        for (std::size_t k = 0; k < cats.size(); ++k) {
            if (done[k]) continue;
            bool ready = std::all_of(preds[k].begin(), preds[k].end(), [&](std::size_t j) { return done[j]; });
            if (!ready) continue;
            if (pick == cats.size() || k < pick) pick = k;
        }
        if (pick == cats.size()) fail("CategoryCycle", "category ordering constraint is cyclic");
        done[pick] = true;
        out.push_back(cats[pick]);
    }
    return out;
}

std::vector<ETerm> enumerate_eps_terms(const Proof& p) {
    std::vector<ETerm> out;
    std::set<std::string> seen;
    for (const auto& t : all_eps(p))
        if (is_closed(t) && seen.insert(alpha_key(t)).second) out.push_back(t);
    return out;
}

ProofConstants proof_constants(const Proof& p) {
    ProofConstants c;
    for (const auto& st : p.steps) c.m = std::max(c.m, max_degree(st.formula));
    c.e = enumerate_eps_terms(p).size();
    c.g = enumerate_categories(p).size();
    return c;
}

}  // namespace witness::eps
