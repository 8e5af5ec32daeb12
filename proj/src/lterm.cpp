#include <algorithm>

#include "witness/error.hpp"
#include "witness/kam.hpp"

namespace witness::kam {

namespace {

std::vector<std::string> merge(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::shared_ptr<TermNode> node(LK k) {
    auto n = std::make_shared<TermNode>();
    n->kind = k;
    return n;
}

}  // namespace

LTerm lvar(const std::string& x) {
    auto n = node(LK::Var);
    n->name = x;
    n->free = {x};
    return n;
}

LTerm lam(const std::string& x, LTerm body) {
    auto n = node(LK::Lam);
    n->name = x;
    n->free = body->free;
    n->free.erase(std::remove(n->free.begin(), n->free.end(), x), n->free.end());
    n->a = std::move(body);
    return n;
}

LTerm lams(const std::vector<std::string>& xs, LTerm body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = lam(*it, body);
    return body;
}

LTerm app(LTerm f, LTerm a) {
    auto n = node(LK::App);
    n->free = merge(f->free, a->free);
    n->a = std::move(f);
    n->b = std::move(a);
    return n;
}

LTerm app(LTerm f, std::vector<LTerm> args) {
    for (auto& a : args) f = app(f, a);
    return f;
}

LTerm cc() { return node(LK::CC); }

LTerm cont(Stack s) {
    auto n = node(LK::Cont);
    n->saved = std::move(s);
    return n;
}

LTerm zeta(unsigned k) {
    auto n = node(LK::Zeta);
    n->k = k;
    return n;
}

LTerm kappa(unsigned j, unsigned k, History h) {
    if (k == 0 || j >= k) fail("InvalidArgument", "kappa position out of range");
    auto n = node(LK::Kappa);
    n->j = j;
    n->k = k;
    n->history = std::move(h);
    return n;
}

LTerm pair_list(std::vector<LTerm> values) {
    auto n = node(LK::PairList);
    for (const auto& v : values) n->free = merge(n->free, v->free);
    n->values = std::move(values);
    return n;
}

LTerm inert(const std::string& name) {
    auto n = node(LK::Inert);
    n->name = name;
    return n;
}

bool same_inert(const LTerm& a, const LTerm& b) { return a && b && a->kind == LK::Inert && a.get() == b.get(); }

LTerm church(const Nat& n) {
    if (n > 1000000) fail("Overflow", "numeral too large to build: " + to_string(n));
    auto k = static_cast<std::uint64_t>(n);
    LTerm body = lvar("x");
    for (std::uint64_t i = 0; i < k; ++i) body = app(lvar("f"), body);
    return lam("f", lam("x", body));
}

LTerm succ_term() {
    return lams({"n", "f", "x"}, app(lvar("f"), app(app(lvar("n"), lvar("f")), lvar("x"))));
}

LTerm storage_T() {
    LTerm compose = lam("g", lam("x", app(lvar("g"), app(succ_term(), lvar("x")))));
    return lams({"f", "n"}, app(app(app(lvar("n"), compose), lvar("f")), church(0)));
}

LTerm witness_t() { return lams({"x", "y"}, app(lvar("y"), lvar("x"))); }

LTerm identity() { return lam("x", lvar("x")); }

bool is_free(const std::string& x, const LTerm& t) { return std::binary_search(t->free.begin(), t->free.end(), x); }

namespace {

std::string fresh(std::string base, const LTerm& a, const LTerm& b) {
    do base += "'";
    while (is_free(base, a) || is_free(base, b));
    return base;
}

bool alpha_rec(const LTerm& a, const LTerm& b, std::vector<std::pair<std::string, std::string>>& bound) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case LK::Var:
        for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
            if (it->first == a->name || it->second == b->name) return it->first == a->name && it->second == b->name;
        }
        return a->name == b->name;
    case LK::Lam: {
        bound.emplace_back(a->name, b->name);
        bool r = alpha_rec(a->a, b->a, bound);
        bound.pop_back();
        return r;
    }
    case LK::App: return alpha_rec(a->a, b->a, bound) && alpha_rec(a->b, b->b, bound);
    case LK::CC: return true;
    case LK::Cont: return a->saved.top == b->saved.top && a->saved.bottom == b->saved.bottom;
    case LK::Zeta: return a->k == b->k;
    case LK::Kappa: return a->j == b->j && a->k == b->k && a->history == b->history;
    case LK::PairList:
        if (a->values.size() != b->values.size()) return false;
        for (std::size_t i = 0; i < a->values.size(); ++i)
            if (!alpha_rec(a->values[i], b->values[i], bound)) return false;
        return true;
    case LK::Inert: return a.get() == b.get() || a->name == b->name;
    }
    return false;
}

}  // namespace

bool alpha_equal(const LTerm& a, const LTerm& b) {
    std::vector<std::pair<std::string, std::string>> bound;
    return alpha_rec(a, b, bound);
}

LTerm substitute(const LTerm& t, const std::string& x, const LTerm& u) {
    if (!is_free(x, t)) return t;
    switch (t->kind) {
    case LK::Var: return u;
    case LK::App: return app(substitute(t->a, x, u), substitute(t->b, x, u));
    case LK::Lam: {
        if (!is_free(t->name, u)) return lam(t->name, substitute(t->a, x, u));
        std::string y = fresh(t->name, u, t->a);
        return lam(y, substitute(substitute(t->a, t->name, lvar(y)), x, u));
    }
    case LK::PairList: {
        std::vector<LTerm> vs;
        for (const auto& v : t->values) vs.push_back(substitute(v, x, u));
        return pair_list(vs);
    }
    default: return t;
    }
}

namespace {

// n when t is lam f. lam x. f^n x with distinct f and x.
std::optional<std::uint64_t> church_value(const LTerm& t) {
    if (t->kind != LK::Lam || t->a->kind != LK::Lam || t->name == t->a->name) return std::nullopt;
    const std::string& f = t->name;
    const std::string& x = t->a->name;
    std::uint64_t n = 0;
    const TermNode* b = t->a->a.get();
    while (b->kind == LK::App && b->a->kind == LK::Var && b->a->name == f) {
        ++n;
        b = b->b.get();
    }
    if (b->kind == LK::Var && b->name == x) return n;
    return std::nullopt;
}

void print_rec(const LTerm& t, std::string& out) {
    switch (t->kind) {
    case LK::Var: out += t->name; return;
    case LK::Lam: {
        if (auto n = church_value(t)) {
            out += "(church " + std::to_string(*n) + ")";
            return;
        }
        out += "(lam " + t->name + " ";
        print_rec(t->a, out);
        out += ")";
        return;
    }
    case LK::App: {
        std::vector<const TermNode*> args;
        const TermNode* h = t.get();
        while (h->kind == LK::App) {
            args.push_back(h->b.get());
            h = h->a.get();
        }
        out += "(app ";
        // h is owned by t, so a non-owning alias is safe while printing
        print_rec(LTerm(t, h), out);
        for (auto it = args.rbegin(); it != args.rend(); ++it) {
            out += " ";
            print_rec(LTerm(t, *it), out);
        }
        out += ")";
        return;
    }
    case LK::CC: out += "cc"; return;
    case LK::Cont: out += "(cont " + t->saved.bottom + ":" + std::to_string(t->saved.depth()) + ")"; return;
    case LK::Zeta: out += "(instr zeta " + std::to_string(t->k) + ")"; return;
    case LK::Kappa:
        out += "(instr kappa " + std::to_string(t->j) + " " + std::to_string(t->k);
        for (const auto& [n, p] : t->history) out += " (" + to_string(n) + " " + to_string(p) + ")";
        out += ")";
        return;
    case LK::PairList:
        out += "(instr pairs";
        for (const auto& v : t->values) {
            out += " ";
            print_rec(v, out);
        }
        out += ")";
        return;
    case LK::Inert: out += "(instr const " + t->name + ")"; return;
    }
}

}  // namespace

std::string print(const LTerm& t) {
    std::string out;
    print_rec(t, out);
    return out;
}

std::string print(const Process& p) {
    std::string out = print(p.head) + " * ";
    for (const auto& it : p.stack.items()) out += print(it) + " . ";
    return out + p.stack.bottom;
}

namespace {

bool is_name(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
    return s != "cc" && s != "lam" && s != "app" && s != "church" && s != "instr" && s != "builtin";
}

std::string need_name(const Sexp& s) {
    if (!s.is_atom || !is_name(s.atom)) syntax_error(s, "expected a variable name");
    return s.atom;
}

Nat need_nat(const Sexp& s) {
    if (!s.is_atom) syntax_error(s, "expected a natural number");
    try {
        return parse_nat(s.atom);
    } catch (const Error&) {
        syntax_error(s, "expected a natural number");
    }
}

unsigned need_small(const Sexp& s) {
    Nat n = need_nat(s);
    if (n > 1000) syntax_error(s, "number too large");
    return static_cast<unsigned>(n);
}

}  // namespace

LTerm parse_lterm(const Sexp& s) {
    if (s.is_atom) {
        if (s.atom == "cc") return cc();
        return lvar(need_name(s));
    }
    if (s.items.empty() || !s.items[0].is_atom) syntax_error(s, "expected a lambda-term form");
    const std::string& h = s.items[0].atom;
    const auto& it = s.items;
    if (h == "lam") {
        if (it.size() != 3) syntax_error(s, "lam takes a binder and a body");
        std::vector<std::string> xs;
        if (it[1].is_atom) xs.push_back(need_name(it[1]));
        else
            for (const auto& x : it[1].items) xs.push_back(need_name(x));
        if (xs.empty()) syntax_error(s, "lam needs at least one binder");
        return lams(xs, parse_lterm(it[2]));
    }
    if (h == "app") {
        if (it.size() < 3) syntax_error(s, "app takes a function and at least one argument");
        LTerm f = parse_lterm(it[1]);
        for (std::size_t i = 2; i < it.size(); ++i) f = app(f, parse_lterm(it[i]));
        return f;
    }
    if (h == "church") {
        if (it.size() != 2) syntax_error(s, "church takes one number");
        return church(need_nat(it[1]));
    }
    if (h == "builtin") {
        if (it.size() != 2 || !it[1].is_atom) syntax_error(s, "builtin takes a name");
        const std::string& b = it[1].atom;
        if (b == "T") return storage_T();
        if (b == "witness") return witness_t();
        if (b == "succ") return succ_term();
        if (b == "id") return identity();
        syntax_error(it[1], "unknown builtin '" + b + "'");
    }
    if (h == "instr") {
        if (it.size() < 2 || !it[1].is_atom) syntax_error(s, "instr needs a kind");
        const std::string& k = it[1].atom;
        if (k == "zeta") {
            if (it.size() > 3) syntax_error(s, "zeta takes an optional arity");
            return zeta(it.size() == 3 ? need_small(it[2]) : 1);
        }
        if (k == "kappa") {
            if (it.size() < 4) syntax_error(s, "kappa takes a position and a length");
            unsigned j = need_small(it[2]), len = need_small(it[3]);
            if (len == 0 || j >= len) syntax_error(s, "kappa position out of range");
            History hist;
            for (std::size_t i = 4; i < it.size(); ++i) {
                if (it[i].is_atom || it[i].items.size() != 2) syntax_error(it[i], "history entries are (n p)");
                hist.emplace_back(need_nat(it[i].items[0]), need_nat(it[i].items[1]));
            }
            if (hist.size() != j) syntax_error(s, "kappa history length must equal its position");
            return kappa(j, len, hist);
        }
        if (k == "pairs") {
            std::vector<LTerm> vs;
            for (std::size_t i = 2; i < it.size(); ++i) vs.push_back(parse_lterm(it[i]));
            return pair_list(vs);
        }
        if (k == "const") {
            if (it.size() != 3) syntax_error(s, "const takes a name");
            return inert(need_name(it[2]));
        }
        syntax_error(it[1], "unknown instruction '" + k + "'");
    }
    syntax_error(s, "unknown lambda-term head '" + h + "'");
}

LTerm parse_lterm(const std::string& text) { return parse_lterm(parse_one_sexp(text)); }

std::string head_summary(const LTerm& t) {
    switch (t->kind) {
    case LK::Var: return t->name;
    case LK::Lam: return church_value(t) ? print(t) : "lam " + t->name;
    case LK::App: return "app";
    case LK::CC: return "cc";
    case LK::Cont: return "cont";
    case LK::Zeta: return "zeta" + std::to_string(t->k);
    case LK::Kappa: return "kappa" + std::to_string(t->j);
    case LK::PairList: return print(t);
    case LK::Inert: return t->name;
    }
    return "?";
}

}  // namespace witness::kam
