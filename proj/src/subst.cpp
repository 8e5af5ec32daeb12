#include "witness/subst.hpp"

#include <algorithm>

#include "witness/error.hpp"

namespace witness::subst {

using eps::FK;
using eps::TK;

Nat Substituent::at(const std::vector<Nat>& key) const {
    auto it = table.find(key);
    return it == table.end() ? Nat(0) : it->second;
}

Layout::Layout(std::vector<Category> cats) : categories(std::move(cats)) {
    for (std::size_t i = 0; i < categories.size(); ++i) index[categories[i].key] = i;
}

std::optional<std::size_t> Layout::find(const Category& c) const {
    auto it = index.find(c.key);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

SubstState initial_state(std::shared_ptr<const Layout> layout) {
    SubstState s;
    for (const auto& c : layout->categories) s.subs.push_back({c.arity, {}});
    s.layout = std::move(layout);
    return s;
}

const eps::EpsSplit& Evaluator::split(const ETerm& e) const {
    auto it = cache_.find(e.get());
    if (it != cache_.end()) return it->second.second;
    auto [pos, _] = cache_.emplace(e.get(), std::make_pair(e, eps::split_eps(e)));
    return pos->second.second;
}

std::pair<std::optional<std::size_t>, std::vector<Nat>> Evaluator::locate(const ETerm& e, const SubstState& s,
                                                                         Env& env) const {
    const auto& sp = split(e);
    std::vector<Nat> key;
    for (const auto& a : sp.args) key.push_back(term(a, s, env));
    return {s.layout->find(sp.category), std::move(key)};
}

Nat Evaluator::term(const ETerm& t, const SubstState& s, Env& env) const {
    switch (t->kind) {
    case TK::Zero: return 0;
    case TK::Var:
        for (auto it = env.rbegin(); it != env.rend(); ++it)
            if (it->first == t->name) return it->second;
        fail("UnboundVariable", "variable '" + t->name + "' has no value");
    case TK::Succ: return term(t->args[0], s, env) + 1;
    case TK::Pred: {
        Nat v = term(t->args[0], s, env);
        return v == 0 ? v : Nat(v - 1);
    }
    case TK::Add: return term(t->args[0], s, env) + term(t->args[1], s, env);
    case TK::Mul: return term(t->args[0], s, env) * term(t->args[1], s, env);
    case TK::FnApp: {
        const auto* e = reg_.find(t->name);
        if (!e) fail("UnregisteredFunction", "function symbol '" + t->name + "' has no registered evaluator");
        if (e->arity != t->args.size()) fail("ArityError", "function symbol '" + t->name + "' arity mismatch");
        std::vector<Nat> args;
        for (const auto& a : t->args) args.push_back(term(a, s, env));
        return e->fn(args);
    }
    case TK::Eps: {
        auto [pos, key] = locate(t, s, env);
        if (!pos) return 0;
        return s.subs[*pos].at(key);
    }
    }
    return 0;
}

bool Evaluator::formula(const EFormula& f, const SubstState& s, Env& env) const {
    switch (f->kind) {
    case FK::Eq: return term(f->l, s, env) == term(f->r, s, env);
    case FK::Not: return !formula(f->a, s, env);
    case FK::Imp: return !formula(f->a, s, env) || formula(f->b, s, env);
    }
    return false;
}

Nat Evaluator::term(const ETerm& t, const SubstState& s) const {
    Env env;
    return term(t, s, env);
}

bool Evaluator::formula(const EFormula& f, const SubstState& s) const {
    Env env;
    return formula(f, s, env);
}

Nat resolve_term(const ETerm& t, const SubstState& s, const FunctionRegistry& reg) {
    return Evaluator(reg).term(t, s);
}

bool eval_formula(const EFormula& f, const SubstState& s, const FunctionRegistry& reg) {
    return Evaluator(reg).formula(f, s);
}

namespace {

bool is_candidate(const eps::Justification& j) { return j.kind == eps::JustKind::Critical && j.scheme == 1; }

std::optional<std::size_t> first_false(const Proof& p, const SubstState& s, const Evaluator& ev) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const auto& st = p.steps[i];
        if (st.just.kind == eps::JustKind::MP) continue;
        bool ok = ev.formula(st.formula, s);
        if (ok) continue;
        if (!is_candidate(st.just))
            fail("UntrueAxiomInstance", "axiom instance at step " + std::to_string(i + 1) +
                                            " is false: " + eps::print(st.formula));
        if (!found) found = i;
    }
    return found;
}

std::size_t last_nonnull(const SubstState& s) {
    for (std::size_t i = s.subs.size(); i-- > 0;)
        if (!s.subs[i].null()) return i + 1;
    return 0;
}

SubstState do_step(const Proof& p, const SubstState& s, const Evaluator& ev, std::size_t idx, Repair* info,
                   Budget& work) {
    const auto& j = p.steps[idx].just;
    ETerm E = eps::critical_term(j);
    Env env;
    auto [pos, key] = ev.locate(E, s, env);
    if (!pos) fail("UnknownCategory", "category of " + eps::print(E) + " is not in the layout");
    const std::string& x = j.x;
    Nat n = 0;
    for (;; ++n) {
        work.charge();
        env.push_back({x, n});
        bool hit = ev.formula(j.formulas[0], s, env);
        env.pop_back();
        if (hit) break;
    }
    SubstState t = s;
    t.generation = s.generation + 1;
    Nat old = t.subs[*pos].at(key);
    if (n == 0) t.subs[*pos].table.erase(key);
    else t.subs[*pos].table[key] = n;
    for (std::size_t k = *pos + 1; k < t.subs.size(); ++k) t.subs[k].table.clear();
    if (info) *info = Repair{idx, *pos, key, old, n};
    return t;
}

}  // namespace

std::optional<std::size_t> first_false_critical(const Proof& p, const SubstState& s, const FunctionRegistry& reg) {
    Evaluator ev(reg);
    return first_false(p, s, ev);
}

SubstState step(const Proof& p, const SubstState& s, const FunctionRegistry& reg, Repair* info, Budget* work) {
    Evaluator ev(reg);
    auto idx = first_false(p, s, ev);
    if (!idx) fail("NoFalseCritical", "substitution is already final");
    Budget local(10000000);
    return do_step(p, s, ev, *idx, info, work ? *work : local);
}

bool verify_property_p(const SubstState& s, const FunctionRegistry& reg, std::uint64_t scan_limit) {
    Evaluator ev(reg);
    for (std::size_t c = 0; c < s.subs.size(); ++c) {
        const auto& sk = s.layout->categories[c].skeleton;
        for (const auto& [key, v] : s.subs[c].table) {
            if (v == 0 || v > scan_limit) return false;
            Env env;
            for (std::size_t i = 0; i < key.size(); ++i)
                env.push_back({eps::placeholder(static_cast<unsigned>(i + 1)), key[i]});
            for (Nat u = 0; u <= v; ++u) {
                env.push_back({sk->name, u});
                bool holds = ev.formula(sk->body, s, env);
                env.pop_back();
                if (holds != (u == v)) return false;
            }
        }
    }
    return true;
}

std::size_t characteristic(const SubstState& s) { return s.subs.size() - last_nonnull(s); }

Nat order_of(const SubstState& s, const std::vector<ETerm>& eps_order, const FunctionRegistry& reg) {
    Evaluator ev(reg);
    Nat o = 0;
    for (const auto& t : eps_order) {
        o <<= 1;
        if (ev.term(t, s) == 0) o += 1;
    }
    return o;
}

namespace {

Nat degree_with(const SubstState& s, const Proof& p, const Evaluator& ev, Budget& work) {
    auto idx = first_false(p, s, ev);
    if (!idx) return 0;
    const auto& j = p.steps[*idx].just;
    const std::string& x = j.x;
    const EFormula& A = j.formulas[0];
    Nat k = ev.term(j.terms[0], s);
    std::vector<ETerm> inner;
    eps::collect_eps_postorder(A, inner);
    std::vector<std::pair<ETerm, bool>> family;  // term, mentions x
    std::set<std::string> seen;
    for (const auto& t : inner) {
        auto fv = eps::free_vars(t);
        if (fv.size() > 1 || (fv.size() == 1 && !fv.count(x))) continue;
        if (seen.insert(eps::alpha_key(t)).second) family.push_back({t, fv.count(x) > 0});
    }
    Nat o = 0;
    Env env;
    for (Nat v = 0; v <= k; ++v) {
        env.push_back({x, v});
        for (const auto& [t, open] : family) {
            work.charge();
            if (!open && v != 0) continue;
            o <<= 1;
            if (ev.term(t, s, env) == 0) o += 1;
        }
        env.pop_back();
    }
    return o;
}

}  // namespace

Nat degree_of(const SubstState& s, const Proof& p, const FunctionRegistry& reg, Budget* work) {
    Evaluator ev(reg);
    Budget local(10000000);
    return degree_with(s, p, ev, work ? *work : local);
}

std::pair<Nat, Nat> index_of(const SubstState& s, const Proof& p, const FunctionRegistry& reg) {
    return {order_of(s, eps::enumerate_eps_terms(p), reg), degree_of(s, p, reg)};
}

bool is_progressive(const SubstState& s, const SubstState& t) {
    if (s.subs.size() != t.subs.size()) fail("LayoutMismatch", "substitutions over different category sets");
    for (std::size_t c = 0; c < s.subs.size(); ++c)
        for (const auto& [key, v] : s.subs[c].table)
            if (t.subs[c].at(key) != v) return false;
    return true;
}

bool is_strictly_progressive(const SubstState& s, const SubstState& t) {
    return is_progressive(s, t) && !is_progressive(t, s);
}

SolveResult solve(const Proof& p, const FunctionRegistry& reg, const SolveOptions& opt) {
    auto layout = std::make_shared<const Layout>(eps::enumerate_categories(p));
    auto eps_order = eps::enumerate_eps_terms(p);
    Evaluator ev(reg);
    Budget work(opt.work);
    SolveResult out;
    SubstState s = initial_state(layout);
    const EFormula& last = p.steps.empty() ? nullptr : p.steps.back().formula;

    auto observe = [&](const SubstState& st) {
        for (const auto& t : eps_order) out.max_eps_value = std::max(out.max_eps_value, ev.term(t, st));
        if (opt.keep_states) out.states.push_back(st);
    };

    for (std::uint64_t n = 0;; ++n) {
        observe(s);
        TraceRecord rec;
        rec.gen = s.generation;
        rec.characteristic = characteristic(s);
        Nat o = 0;
        for (const auto& t : eps_order) {
            o <<= 1;
            if (ev.term(t, s) == 0) o += 1;
        }
        rec.o = o;
        auto idx = first_false(p, s, ev);
        if (!idx) {
            out.trace.records.push_back(rec);
            break;
        }
        rec.d = degree_with(s, p, ev, work);
        if (n >= opt.budget) {
            out.trace.records.push_back(rec);
            out.status = RunStatus::BudgetExceeded;
            break;
        }
        Repair r;
        SubstState next = do_step(p, s, ev, *idx, &r, work);
        rec.repair = r;
        out.trace.records.push_back(rec);
        s = std::move(next);
    }
    out.final_state = s;
    if (out.status == RunStatus::Final && last) {
        std::vector<ETerm> terms;
        eps::collect_eps_postorder(last, terms);
        std::set<std::string> seen;
        for (const auto& t : terms)
            if (eps::is_closed(t) && seen.insert(eps::alpha_key(t)).second)
                out.witnesses.push_back({t, ev.term(t, s)});
    }
    return out;
}

}  // namespace witness::subst
