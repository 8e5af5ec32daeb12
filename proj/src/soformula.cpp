#include <algorithm>
#include <cctype>
#include <functional>

#include "witness/error.hpp"
#include "witness/sol2.hpp"

namespace witness::sol2 {

namespace {

SOFormula node(SONode n) { return std::make_shared<const SONode>(std::move(n)); }

void term_vars(const ETerm& t, std::set<std::string>& out) {
    if (t->kind == eps::TK::Var) out.insert(t->name);
    if (t->kind == eps::TK::Eps) fail("ContractViolation", "epsilon-terms are not second-order terms");
    for (const auto& a : t->args) term_vars(a, out);
}

ETerm term_subst(const ETerm& t, const std::map<std::string, ETerm>& m) {
    switch (t->kind) {
    case eps::TK::Var: {
        auto it = m.find(t->name);
        return it == m.end() ? t : it->second;
    }
    case eps::TK::Zero: return t;
    case eps::TK::Eps: fail("ContractViolation", "epsilon-terms are not second-order terms");
    default: break;
    }
    std::vector<ETerm> args;
    for (const auto& a : t->args) args.push_back(term_subst(a, m));
    auto n = std::make_shared<eps::TermNode>(*t);
    n->args = std::move(args);
    return n;
}

void collect(const SOFormula& f, std::set<std::string>& ind, std::set<std::string>& pred, FreeVars& out) {
    switch (f->kind) {
    case SK::PredApp: {
        if (!pred.count(f->name)) out.pred.insert(f->name);
        std::set<std::string> vs;
        for (const auto& a : f->args) term_vars(a, vs);
        for (const auto& v : vs)
            if (!ind.count(v)) out.ind.insert(v);
        return;
    }
    case SK::Imp:
        collect(f->l, ind, pred, out);
        collect(f->r, ind, pred, out);
        return;
    case SK::ForallInd: {
        bool added = ind.insert(f->name).second;
        collect(f->l, ind, pred, out);
        if (added) ind.erase(f->name);
        return;
    }
    case SK::ForallPred: {
        bool added = pred.insert(f->name).second;
        collect(f->l, ind, pred, out);
        if (added) pred.erase(f->name);
        return;
    }
    }
}

std::set<std::string> all_names(const SOFormula& f) {
    std::set<std::string> out;
    std::function<void(const SOFormula&)> go = [&](const SOFormula& g) {
        out.insert(g->name);
        for (const auto& a : g->args) term_vars(a, out);
        if (g->l) go(g->l);
        if (g->r) go(g->r);
    };
    go(f);
    return out;
}

SOFormula subst_map(const SOFormula& f, std::map<std::string, ETerm> m) {
    switch (f->kind) {
    case SK::PredApp: {
        std::vector<ETerm> args;
        for (const auto& a : f->args) args.push_back(term_subst(a, m));
        return pred_app(f->name, std::move(args));
    }
    case SK::Imp: return imp(subst_map(f->l, m), subst_map(f->r, m));
    case SK::ForallPred: return forall_pred(f->name, f->arity, subst_map(f->l, m));
    case SK::ForallInd: break;
    }
    m.erase(f->name);
    auto fv = free_vars(f->l).ind;
    for (auto it = m.begin(); it != m.end();) it = fv.count(it->first) ? std::next(it) : m.erase(it);
    if (m.empty()) return f;
    std::set<std::string> incoming;
    for (const auto& [_, t] : m) term_vars(t, incoming);
    std::string y = f->name;
    if (incoming.count(y)) {
        std::set<std::string> avoid = all_names(f->l);
        avoid.insert(incoming.begin(), incoming.end());
        for (const auto& [x, _] : m) avoid.insert(x);
        y = eps::fresh_name(y, avoid);
        m[f->name] = eps::var(y);
    }
    return forall_ind(y, subst_map(f->l, m));
}

std::string key(const SOFormula& f, std::map<std::string, std::string>& ind, std::map<std::string, std::string>& pred,
                int& counter) {
    switch (f->kind) {
    case SK::PredApp: {
        auto p = pred.find(f->name);
        std::string out = "(" + (p == pred.end() ? f->name : p->second);
        std::map<std::string, ETerm> ren;
        for (const auto& [a, b] : ind) ren[a] = eps::var(b);
        for (const auto& a : f->args) out += " " + eps::print(term_subst(a, ren));
        return out + ")";
    }
    case SK::Imp: return "(imp " + key(f->l, ind, pred, counter) + " " + key(f->r, ind, pred, counter) + ")";
    case SK::ForallInd:
    case SK::ForallPred: {
        auto& m = f->kind == SK::ForallInd ? ind : pred;
        std::string fresh = "_" + std::to_string(counter++);
        auto old = m.find(f->name);
        std::optional<std::string> saved;
        if (old != m.end()) saved = old->second;
        m[f->name] = fresh;
        std::string out = (f->kind == SK::ForallInd ? "(forall " : "(forallP " + std::to_string(f->arity) + " ") +
                          fresh + " " + key(f->l, ind, pred, counter) + ")";
        if (saved)
            m[f->name] = *saved;
        else
            m.erase(f->name);
        return out;
    }
    }
    return "";
}

std::optional<ETerm> match_int(const SOFormula& f) {
    if (f->kind != SK::ForallPred || f->arity != 1) return std::nullopt;
    const std::string& X = f->name;
    auto is_app = [&](const SOFormula& g) { return g->kind == SK::PredApp && g->name == X && g->args.size() == 1; };
    const auto& b = f->l;
    if (b->kind != SK::Imp || b->l->kind != SK::ForallInd || b->r->kind != SK::Imp) return std::nullopt;
    const auto& step = b->l->l;
    const std::string& y = b->l->name;
    if (step->kind != SK::Imp || !is_app(step->l) || !is_app(step->r)) return std::nullopt;
    if (!eps::alpha_eq(step->l->args[0], eps::var(y)) || !eps::alpha_eq(step->r->args[0], eps::succ(eps::var(y))))
        return std::nullopt;
    if (!is_app(b->r->l) || !is_app(b->r->r) || b->r->l->args[0]->kind != eps::TK::Zero) return std::nullopt;
    return b->r->r->args[0];
}

bool is_bot(const SOFormula& f) {
    return f->kind == SK::ForallPred && f->arity == 0 && f->l->kind == SK::PredApp && f->l->name == f->name &&
           f->l->args.empty();
}

ETerm parse_fo_term(const Sexp& s) {
    if (s.is_atom) {
        if (!s.atom.empty() && std::all_of(s.atom.begin(), s.atom.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            if (s.atom.size() > 6) syntax_error(s, "numeral literal too large");
            return eps::numeral(std::stoull(s.atom));
        }
        if (eps::is_identifier(s.atom)) return eps::var(s.atom);
        syntax_error(s, "unexpected atom '" + s.atom + "' in term position");
    }
    if (s.items.empty() || !s.items[0].is_atom) syntax_error(s, "expected a term head");
    const std::string& h = s.items[0].atom;
    auto need = [&](std::size_t n) {
        if (s.items.size() != n + 1) syntax_error(s, "'" + h + "' takes " + std::to_string(n) + " argument(s)");
    };
    if (h == "succ" || h == "s") {
        need(1);
        return eps::succ(parse_fo_term(s.items[1]));
    }
    if (h == "add" || h == "mul") {
        need(2);
        auto a = parse_fo_term(s.items[1]), b = parse_fo_term(s.items[2]);
        return h == "add" ? eps::add(a, b) : eps::mul(a, b);
    }
    if (h == "fn") {
        if (s.items.size() < 2 || !s.items[1].is_atom || !eps::is_identifier(s.items[1].atom))
            syntax_error(s, "'fn' needs a function symbol");
        std::vector<ETerm> args;
        for (std::size_t i = 2; i < s.items.size(); ++i) args.push_back(parse_fo_term(s.items[i]));
        return eps::fn(s.items[1].atom, std::move(args));
    }
    syntax_error(s.items[0], "unknown term head '" + h + "'");
}

const std::set<std::string> kHeads = {"forall", "forallP", "exists", "existsP", "imp", "and", "or",
                                      "not",    "=",       "Int",    "bot"};

std::string name_at(const Sexp& s, const char* what) {
    if (!s.is_atom || !eps::is_identifier(s.atom) || kHeads.count(s.atom))
        syntax_error(s, std::string("expected ") + what);
    return s.atom;
}

unsigned arity_at(const Sexp& s) {
    if (!s.is_atom || s.atom.empty() || s.atom.size() > 3 ||
        !std::all_of(s.atom.begin(), s.atom.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        syntax_error(s, "expected a predicate arity");
    return static_cast<unsigned>(std::stoul(s.atom));
}

}  // namespace

SOFormula pred_app(const std::string& X, std::vector<ETerm> args) {
    return node(SONode{SK::PredApp, X, std::move(args), 0, nullptr, nullptr});
}
SOFormula imp(SOFormula a, SOFormula b) { return node(SONode{SK::Imp, "", {}, 0, std::move(a), std::move(b)}); }
SOFormula forall_ind(const std::string& x, SOFormula body) {
    return node(SONode{SK::ForallInd, x, {}, 0, std::move(body), nullptr});
}
SOFormula forall_pred(const std::string& X, unsigned arity, SOFormula body) {
    return node(SONode{SK::ForallPred, X, {}, arity, std::move(body), nullptr});
}

SOFormula bot() { return forall_pred("X", 0, pred_app("X")); }
SOFormula neg(SOFormula a) { return imp(std::move(a), bot()); }

namespace {
std::string fresh_pred(const std::vector<SOFormula>& parts) {
    std::set<std::string> avoid;
    for (const auto& p : parts) {
        auto fv = free_vars(p);
        avoid.insert(fv.pred.begin(), fv.pred.end());
    }
    return eps::fresh_name("X", avoid);
}
}  // namespace

SOFormula conj(SOFormula a, SOFormula b) {
    std::string X = fresh_pred({a, b});
    return forall_pred(X, 0, imp(imp(a, imp(b, pred_app(X))), pred_app(X)));
}

SOFormula disj(SOFormula a, SOFormula b) {
    std::string X = fresh_pred({a, b});
    return forall_pred(X, 0, imp(imp(a, pred_app(X)), imp(imp(b, pred_app(X)), pred_app(X))));
}

SOFormula exists_ind(const std::string& x, SOFormula body) { return neg(forall_ind(x, neg(std::move(body)))); }
SOFormula exists_pred(const std::string& X, unsigned arity, SOFormula body) {
    return neg(forall_pred(X, arity, neg(std::move(body))));
}

SOFormula equal(ETerm a, ETerm b) { return forall_pred("X", 1, imp(pred_app("X", {a}), pred_app("X", {b}))); }

SOFormula int_of(ETerm t) {
    std::set<std::string> vs;
    term_vars(t, vs);
    std::string y = eps::fresh_name("y", vs);
    auto Y = eps::var(y);
    return forall_pred("X", 1,
                       imp(forall_ind(y, imp(pred_app("X", {Y}), pred_app("X", {eps::succ(Y)}))),
                           imp(pred_app("X", {eps::zero()}), pred_app("X", {t}))));
}

FreeVars free_vars(const SOFormula& f) {
    FreeVars out;
    std::set<std::string> ind, pred;
    collect(f, ind, pred, out);
    return out;
}

bool is_closed(const SOFormula& f) {
    auto fv = free_vars(f);
    return fv.ind.empty() && fv.pred.empty();
}

SOFormula substitute(const SOFormula& f, const std::string& x, const ETerm& t) { return subst_map(f, {{x, t}}); }

SOFormula substitute_pred(const SOFormula& f, const std::string& X, const std::vector<std::string>& params,
                          const SOFormula& phi) {
    switch (f->kind) {
    case SK::PredApp: {
        if (f->name != X) return f;
        if (f->args.size() != params.size())
            fail("ArityError", "predicate " + X + " applied to " + std::to_string(f->args.size()) +
                                   " argument(s), comprehension has " + std::to_string(params.size()));
        std::map<std::string, ETerm> m;
        for (std::size_t i = 0; i < params.size(); ++i) m[params[i]] = f->args[i];
        return subst_map(phi, m);
    }
    case SK::Imp: return imp(substitute_pred(f->l, X, params, phi), substitute_pred(f->r, X, params, phi));
    default: break;
    }
    if (f->kind == SK::ForallPred && f->name == X) return f;
    if (!free_vars(f->l).pred.count(X)) return f;
    auto fphi = free_vars(phi);
    std::set<std::string> phi_ind(fphi.ind);
    for (const auto& p : params) phi_ind.erase(p);
    SOFormula body = f->l;
    std::string y = f->name;
    bool clash = f->kind == SK::ForallInd ? phi_ind.count(y) > 0 : fphi.pred.count(y) > 0;
    if (clash) {
        std::set<std::string> avoid = all_names(f->l);
        avoid.insert(fphi.ind.begin(), fphi.ind.end());
        avoid.insert(fphi.pred.begin(), fphi.pred.end());
        avoid.insert(X);
        y = eps::fresh_name(y, avoid);
        if (f->kind == SK::ForallInd) {
            body = substitute(body, f->name, eps::var(y));
        } else {
            std::vector<std::string> xs;
            std::vector<ETerm> ts;
            for (unsigned i = 0; i < f->arity; ++i) {
                xs.push_back("_a" + std::to_string(i));
                ts.push_back(eps::var(xs.back()));
            }
            body = substitute_pred(body, f->name, xs, pred_app(y, ts));
        }
    }
    body = substitute_pred(body, X, params, phi);
    return f->kind == SK::ForallInd ? forall_ind(y, body) : forall_pred(y, f->arity, body);
}

std::string alpha_key(const SOFormula& f) {
    std::map<std::string, std::string> ind, pred;
    int counter = 0;
    return key(f, ind, pred, counter);
}

bool alpha_eq(const SOFormula& a, const SOFormula& b) { return alpha_key(a) == alpha_key(b); }

std::optional<std::pair<ETerm, ETerm>> match_equal(const SOFormula& f) {
    if (f->kind != SK::ForallPred || f->arity != 1) return std::nullopt;
    const auto& b = f->l;
    if (b->kind != SK::Imp) return std::nullopt;
    for (const auto& side : {b->l, b->r})
        if (side->kind != SK::PredApp || side->name != f->name || side->args.size() != 1) return std::nullopt;
    return std::make_pair(b->l->args[0], b->r->args[0]);
}

std::string print(const SOFormula& f) {
    if (is_bot(f)) return "bot";
    if (auto e = match_equal(f)) return "(= " + eps::print(e->first) + " " + eps::print(e->second) + ")";
    if (auto t = match_int(f)) return "(Int " + eps::print(*t) + ")";
    switch (f->kind) {
    case SK::PredApp: {
        if (f->args.empty()) return f->name;
        std::string out = "(" + f->name;
        for (const auto& a : f->args) out += " " + eps::print(a);
        return out + ")";
    }
    case SK::Imp: return "(imp " + print(f->l) + " " + print(f->r) + ")";
    case SK::ForallInd: return "(forall " + f->name + " " + print(f->l) + ")";
    case SK::ForallPred: return "(forallP " + f->name + " " + std::to_string(f->arity) + " " + print(f->l) + ")";
    }
    return "";
}

SOFormula parse_so(const Sexp& s) {
    if (s.is_atom) {
        if (s.atom == "bot") return bot();
        return pred_app(name_at(s, "a formula"));
    }
    if (s.items.empty() || !s.items[0].is_atom) syntax_error(s, "expected a formula head");
    const std::string& h = s.items[0].atom;
    auto need = [&](std::size_t n) {
        if (s.items.size() != n + 1) syntax_error(s, "'" + h + "' takes " + std::to_string(n) + " argument(s)");
    };
    if (h == "bot") {
        need(0);
        return bot();
    }
    if (h == "imp" || h == "and" || h == "or") {
        need(2);
        auto a = parse_so(s.items[1]), b = parse_so(s.items[2]);
        return h == "imp" ? imp(a, b) : h == "and" ? conj(a, b) : disj(a, b);
    }
    if (h == "not") {
        need(1);
        return neg(parse_so(s.items[1]));
    }
    if (h == "forall" || h == "exists") {
        need(2);
        auto x = name_at(s.items[1], "a variable");
        auto b = parse_so(s.items[2]);
        return h == "forall" ? forall_ind(x, b) : exists_ind(x, b);
    }
    if (h == "forallP" || h == "existsP") {
        need(3);
        auto X = name_at(s.items[1], "a predicate variable");
        unsigned k = arity_at(s.items[2]);
        auto b = parse_so(s.items[3]);
        return h == "forallP" ? forall_pred(X, k, b) : exists_pred(X, k, b);
    }
    if (h == "=") {
        need(2);
        return equal(parse_fo_term(s.items[1]), parse_fo_term(s.items[2]));
    }
    if (h == "Int") {
        need(1);
        return int_of(parse_fo_term(s.items[1]));
    }
    std::string X = name_at(s.items[0], "a predicate name");
    std::vector<ETerm> args;
    for (std::size_t i = 1; i < s.items.size(); ++i) args.push_back(parse_fo_term(s.items[i]));
    return pred_app(X, std::move(args));
}

SOFormula parse_so(const std::string& text) { return parse_so(parse_one_sexp(text)); }

ETerm parse_fo(const Sexp& s) { return parse_fo_term(s); }

SOFormula relativize(const SOFormula& f) {
    switch (f->kind) {
    case SK::PredApp: return f;
    case SK::Imp: return imp(relativize(f->l), relativize(f->r));
    case SK::ForallInd: return forall_ind(f->name, imp(int_of(eps::var(f->name)), relativize(f->l)));
    case SK::ForallPred: return forall_pred(f->name, f->arity, relativize(f->l));
    }
    return f;
}

std::optional<Nat> evaluate_closed(const ETerm& t, const eps::FunctionRegistry* reg) {
    std::vector<Nat> vs;
    for (const auto& a : t->args) {
        auto v = evaluate_closed(a, reg);
        if (!v) return std::nullopt;
        vs.push_back(*v);
    }
    switch (t->kind) {
    case eps::TK::Zero: return Nat(0);
    case eps::TK::Succ: return vs[0] + 1;
    case eps::TK::Pred: return vs[0] == 0 ? Nat(0) : Nat(vs[0] - 1);
    case eps::TK::Add: return vs[0] + vs[1];
    case eps::TK::Mul: return vs[0] * vs[1];
    case eps::TK::FnApp: {
        const auto* e = reg ? reg->find(t->name) : nullptr;
        if (!e || e->arity != vs.size()) return std::nullopt;
        return e->fn(vs);
    }
    default: return std::nullopt;
    }
}

}  // namespace witness::sol2
