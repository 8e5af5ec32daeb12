#include "witness/eterm.hpp"

#include <functional>

#include "witness/error.hpp"

namespace witness::eps {

namespace {

ETerm make(TK k, std::string name, std::vector<ETerm> args, EFormula body = nullptr) {
    return std::make_shared<const TermNode>(TermNode{k, std::move(name), std::move(args), std::move(body)});
}

EFormula makef(FK k, ETerm l, ETerm r, EFormula a, EFormula b) {
    return std::make_shared<const FormulaNode>(FormulaNode{k, std::move(l), std::move(r), std::move(a), std::move(b)});
}

}  // namespace

ETerm zero() {
    static const ETerm z = make(TK::Zero, "", {});
    return z;
}
ETerm var(const std::string& name) { return make(TK::Var, name, {}); }
ETerm succ(ETerm t) { return make(TK::Succ, "", {std::move(t)}); }
ETerm pred(ETerm t) { return make(TK::Pred, "", {std::move(t)}); }
ETerm add(ETerm a, ETerm b) { return make(TK::Add, "", {std::move(a), std::move(b)}); }
ETerm mul(ETerm a, ETerm b) { return make(TK::Mul, "", {std::move(a), std::move(b)}); }
ETerm eps(const std::string& x, EFormula body) { return make(TK::Eps, x, {}, std::move(body)); }
ETerm fn(const std::string& f, std::vector<ETerm> args) { return make(TK::FnApp, f, std::move(args)); }
ETerm numeral(std::uint64_t n) {
    ETerm t = zero();
    for (std::uint64_t i = 0; i < n; ++i) t = succ(t);
    return t;
}
EFormula eq(ETerm l, ETerm r) { return makef(FK::Eq, std::move(l), std::move(r), nullptr, nullptr); }
EFormula neg(EFormula a) { return makef(FK::Not, nullptr, nullptr, std::move(a), nullptr); }
EFormula imp(EFormula a, EFormula b) { return makef(FK::Imp, nullptr, nullptr, std::move(a), std::move(b)); }

namespace {

void print_into(const ETerm& t, std::string& out);

void print_into(const EFormula& f, std::string& out) {
    switch (f->kind) {
    case FK::Eq:
        out += "(= ";
        print_into(f->l, out);
        out += ' ';
        print_into(f->r, out);
        out += ')';
        break;
    case FK::Not:
        out += "(not ";
        print_into(f->a, out);
        out += ')';
        break;
    case FK::Imp:
        out += "(imp ";
        print_into(f->a, out);
        out += ' ';
        print_into(f->b, out);
        out += ')';
        break;
    }
}

void print_into(const ETerm& t, std::string& out) {
    switch (t->kind) {
    case TK::Zero: out += '0'; return;
    case TK::Var: out += t->name; return;
    case TK::Succ: out += "(succ "; break;
    case TK::Pred: out += "(pred "; break;
    case TK::Add: out += "(add "; break;
    case TK::Mul: out += "(mul "; break;
    case TK::Eps:
        out += "(eps " + t->name + ' ';
        print_into(t->body, out);
        out += ')';
        return;
    case TK::FnApp:
        out += "(fn " + t->name;
        for (const auto& a : t->args) {
            out += ' ';
            print_into(a, out);
        }
        out += ')';
        return;
    }
    for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) out += ' ';
        print_into(t->args[i], out);
    }
    out += ')';
}

}  // namespace

std::string print(const ETerm& t) {
    std::string s;
    print_into(t, s);
    return s;
}

std::string print(const EFormula& f) {
    std::string s;
    print_into(f, s);
    return s;
}

namespace {

void fv(const ETerm& t, std::set<std::string>& bound, std::set<std::string>& out);

void fv(const EFormula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    if (f->kind == FK::Eq) {
        fv(f->l, bound, out);
        fv(f->r, bound, out);
        return;
    }
    fv(f->a, bound, out);
    if (f->b) fv(f->b, bound, out);
}

void fv(const ETerm& t, std::set<std::string>& bound, std::set<std::string>& out) {
    if (t->kind == TK::Var) {
        if (!bound.count(t->name)) out.insert(t->name);
        return;
    }
    if (t->kind == TK::Eps) {
        bool fresh = bound.insert(t->name).second;
        fv(t->body, bound, out);
        if (fresh) bound.erase(t->name);
        return;
    }
    for (const auto& a : t->args) fv(a, bound, out);
}

}  // namespace

std::set<std::string> free_vars(const ETerm& t) {
    std::set<std::string> b, out;
    fv(t, b, out);
    return out;
}

std::set<std::string> free_vars(const EFormula& f) {
    std::set<std::string> b, out;
    fv(f, b, out);
    return out;
}

bool is_closed(const ETerm& t) { return free_vars(t).empty(); }
bool is_closed(const EFormula& f) { return free_vars(f).empty(); }
bool occurs_free(const std::string& x, const ETerm& t) { return free_vars(t).count(x) > 0; }
bool occurs_free(const std::string& x, const EFormula& f) { return free_vars(f).count(x) > 0; }

bool contains_eps(const ETerm& t) {
    if (t->kind == TK::Eps) return true;
    for (const auto& a : t->args)
        if (contains_eps(a)) return true;
    return false;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    std::string stem = base;
    auto cut = stem.find_last_not_of("0123456789");
    if (cut != std::string::npos && cut + 1 < stem.size() && stem[cut] == '_') stem = stem.substr(0, cut);
    for (int i = 1;; ++i) {
        std::string cand = stem + "_" + std::to_string(i);
        if (!avoid.count(cand)) return cand;
    }
}

namespace {

using Subst = std::map<std::string, ETerm>;

EFormula subst_f(const EFormula& f, const Subst& s);

std::set<std::string> range_fv(const Subst& s) {
    std::set<std::string> out;
    for (const auto& [k, v] : s) {
        auto f = free_vars(v);
        out.insert(f.begin(), f.end());
    }
    return out;
}

ETerm subst_t(const ETerm& t, const Subst& s) {
    if (s.empty()) return t;
    switch (t->kind) {
    case TK::Zero: return t;
    case TK::Var: {
        auto it = s.find(t->name);
        return it == s.end() ? t : it->second;
    }
    case TK::Eps: {
        Subst inner = s;
        inner.erase(t->name);
        auto body_fv = free_vars(t->body);
        for (auto it = inner.begin(); it != inner.end();)
            it = body_fv.count(it->first) ? std::next(it) : inner.erase(it);
        if (inner.empty()) return t;
        auto rfv = range_fv(inner);
        if (!rfv.count(t->name)) return eps(t->name, subst_f(t->body, inner));
        std::set<std::string> avoid = rfv;
        avoid.insert(body_fv.begin(), body_fv.end());
        for (const auto& [k, v] : inner) avoid.insert(k);
        std::string y = fresh_name(t->name, avoid);
        inner[t->name] = var(y);
        return eps(y, subst_f(t->body, inner));
    }
    default: {
        std::vector<ETerm> args;
        bool changed = false;
        for (const auto& a : t->args) {
            args.push_back(subst_t(a, s));
            changed = changed || args.back() != a;
        }
        if (!changed) return t;
        return std::make_shared<const TermNode>(TermNode{t->kind, t->name, std::move(args), nullptr});
    }
    }
}

EFormula subst_f(const EFormula& f, const Subst& s) {
    switch (f->kind) {
    case FK::Eq: {
        auto l = subst_t(f->l, s), r = subst_t(f->r, s);
        if (l == f->l && r == f->r) return f;
        return eq(l, r);
    }
    case FK::Not: {
        auto a = subst_f(f->a, s);
        return a == f->a ? f : neg(a);
    }
    case FK::Imp: {
        auto a = subst_f(f->a, s), b = subst_f(f->b, s);
        if (a == f->a && b == f->b) return f;
        return imp(a, b);
    }
    }
    return f;
}

}  // namespace

ETerm substitute(const ETerm& t, const std::string& x, const ETerm& u) { return subst_t(t, {{x, u}}); }
EFormula substitute(const EFormula& f, const std::string& x, const ETerm& u) { return subst_f(f, {{x, u}}); }
EFormula substitute(const EFormula& f, const std::map<std::string, ETerm>& s) { return subst_f(f, s); }

namespace {

struct AlphaPrinter {
    std::map<std::string, std::vector<std::string>> scope;
    int counter = 0;
    std::string out;

    void term(const ETerm& t) {
        switch (t->kind) {
        case TK::Zero: out += '0'; return;
        case TK::Var: {
            auto it = scope.find(t->name);
            out += (it != scope.end() && !it->second.empty()) ? it->second.back() : t->name;
            return;
        }
        case TK::Eps: {
            std::string b = "_b" + std::to_string(++counter);
            scope[t->name].push_back(b);
            out += "(eps " + b + ' ';
            formula(t->body);
            out += ')';
            scope[t->name].pop_back();
            return;
        }
        default: break;
        }
        static const char* heads[] = {"", "", "succ", "pred", "add", "mul", "", "fn"};
        out += '(';
        out += heads[static_cast<int>(t->kind)];
        if (t->kind == TK::FnApp) out += ' ' + t->name;
        for (const auto& a : t->args) {
            out += ' ';
            term(a);
        }
        out += ')';
    }

    void formula(const EFormula& f) {
        switch (f->kind) {
        case FK::Eq:
            out += "(= ";
            term(f->l);
            out += ' ';
            term(f->r);
            break;
        case FK::Not:
            out += "(not ";
            formula(f->a);
            break;
        case FK::Imp:
            out += "(imp ";
            formula(f->a);
            out += ' ';
            formula(f->b);
            break;
        }
        out += ')';
    }
};

}  // namespace

std::string alpha_key(const ETerm& t) {
    AlphaPrinter p;
    p.term(t);
    return p.out;
}

std::string alpha_key(const EFormula& f) {
    AlphaPrinter p;
    p.formula(f);
    return p.out;
}

bool alpha_eq(const EFormula& a, const EFormula& b) { return alpha_key(a) == alpha_key(b); }
bool alpha_eq(const ETerm& a, const ETerm& b) { return alpha_key(a) == alpha_key(b); }

unsigned degree(const ETerm& t) {
    switch (t->kind) {
    case TK::Zero:
    case TK::Var:
    case TK::Eps: return 0;
    default: break;
    }
    unsigned best = 0;
    for (const auto& a : t->args) best = std::max(best, degree(a));
    return best + 1;
}

namespace {

void max_degree_t(const ETerm& t, unsigned& best);

void max_degree_f(const EFormula& f, unsigned& best) {
    if (f->kind == FK::Eq) {
        max_degree_t(f->l, best);
        max_degree_t(f->r, best);
        return;
    }
    max_degree_f(f->a, best);
    if (f->b) max_degree_f(f->b, best);
}

void max_degree_t(const ETerm& t, unsigned& best) {
    best = std::max(best, degree(t));
    if (t->kind == TK::Eps) max_degree_f(t->body, best);
    for (const auto& a : t->args) max_degree_t(a, best);
}

}  // namespace

unsigned max_degree(const EFormula& f) {
    unsigned best = 0;
    max_degree_f(f, best);
    return best;
}

void collect_eps_postorder(const ETerm& t, std::vector<ETerm>& out) {
    if (t->kind == TK::Eps) {
        collect_eps_postorder(t->body, out);
        out.push_back(t);
        return;
    }
    for (const auto& a : t->args) collect_eps_postorder(a, out);
}

void collect_eps_postorder(const EFormula& f, std::vector<ETerm>& out) {
    if (f->kind == FK::Eq) {
        collect_eps_postorder(f->l, out);
        collect_eps_postorder(f->r, out);
        return;
    }
    collect_eps_postorder(f->a, out);
    if (f->b) collect_eps_postorder(f->b, out);
}

}  // namespace witness::eps
