#include <functional>

#include "witness/error.hpp"
#include "witness/proof.hpp"

namespace witness::eps {

bool operator==(const Category& a, const Category& b) { return a.key == b.key; }

std::string placeholder(unsigned i) { return "_w" + std::to_string(i); }

namespace {

bool is_placeholder(const std::string& v) { return v.size() > 2 && v[0] == '_' && v[1] == 'w'; }

}  // namespace

EpsSplit split_eps(const ETerm& t) {
    if (!t || t->kind != TK::Eps) fail("NotAnEpsTerm", "category requested for a non-epsilon term");
    const std::string& x = t->name;
    std::vector<ETerm> args;
    auto side = [&](const ETerm& s) -> ETerm {
        if (occurs_free(x, s)) return s;
        if (!contains_eps(s) && free_vars(s).empty()) return s;
        args.push_back(s);
        return var(placeholder(static_cast<unsigned>(args.size())));
    };
    std::function<EFormula(const EFormula&)> walk = [&](const EFormula& f) -> EFormula {
        switch (f->kind) {
        case FK::Eq: {
            auto l = side(f->l);
            auto r = side(f->r);
            return eq(l, r);
        }
        case FK::Not: return neg(walk(f->a));
        case FK::Imp: {
            auto a = walk(f->a);
            auto b = walk(f->b);
            return imp(a, b);
        }
        }
        return f;
    };
    ETerm skeleton = eps(x, walk(t->body));
    for (const auto& v : free_vars(skeleton))
        if (!is_placeholder(v))
            fail("CategoryNotEnumerated", "epsilon-term " + print(t) + " keeps the free variable '" + v +
                                              "' inside a side that mentions its bound variable");
    EpsSplit out;
    out.category = {skeleton, static_cast<unsigned>(args.size()), alpha_key(skeleton)};
    out.args = std::move(args);
    return out;
}

Category category_of(const ETerm& t) { return split_eps(t).category; }

namespace {

unsigned count_eps(const ETerm& t);

unsigned count_eps(const EFormula& f) {
    if (f->kind == FK::Eq) return count_eps(f->l) + count_eps(f->r);
    return count_eps(f->a) + (f->b ? count_eps(f->b) : 0);
}

unsigned count_eps(const ETerm& t) {
    unsigned n = t->kind == TK::Eps ? 1 + count_eps(t->body) : 0;
    for (const auto& a : t->args) n += count_eps(a);
    return n;
}

}  // namespace

unsigned rank(const Category& c) { return count_eps(c.skeleton); }

void FunctionRegistry::add(const std::string& name, unsigned arity, HostFn f) {
    entries[name] = Entry{arity, std::move(f)};
}

const FunctionRegistry::Entry* FunctionRegistry::find(const std::string& name) const {
    auto it = entries.find(name);
    return it == entries.end() ? nullptr : &it->second;
}

}  // namespace witness::eps
