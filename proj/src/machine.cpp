#include "witness/error.hpp"
#include "witness/kam.hpp"

namespace witness::kam {

std::size_t Stack::depth() const {
    std::size_t n = 0;
    for (const Cell* c = top.get(); c; c = c->next.get()) ++n;
    return n;
}

const LTerm& Stack::peek() const {
    if (!top) fail("ContractViolation", "peek on an empty stack");
    return top->item;
}

Stack Stack::pop() const {
    if (!top) fail("ContractViolation", "pop on an empty stack");
    return Stack{top->next, bottom};
}

Stack Stack::push(LTerm t) const {
    return Stack{std::make_shared<const Cell>(Cell{std::move(t), top}), bottom};
}

std::vector<LTerm> Stack::items() const {
    std::vector<LTerm> out;
    for (const Cell* c = top.get(); c; c = c->next.get()) out.push_back(c->item);
    return out;
}

Stack make_stack(std::vector<LTerm> items_top_first, std::string bottom) {
    Stack s{nullptr, std::move(bottom)};
    for (auto it = items_top_first.rbegin(); it != items_top_first.rend(); ++it) s = s.push(*it);
    return s;
}

const char* rule_name(Rule r) {
    switch (r) {
    case Rule::Push: return "push";
    case Rule::Pop: return "pop";
    case Rule::Store: return "store";
    case Rule::Restore: return "restore";
    case Rule::Zeta: return "zeta";
    case Rule::Kappa: return "kappa";
    }
    return "?";
}

std::vector<Rule> applicable_rules(const Process& p) {
    const auto& h = p.head;
    bool one = p.stack.top != nullptr;
    bool two = one && p.stack.top->next != nullptr;
    std::vector<Rule> out;
    if (h->kind == LK::App) out.push_back(Rule::Push);
    if (h->kind == LK::Lam && one) out.push_back(Rule::Pop);
    if (h->kind == LK::CC && one) out.push_back(Rule::Store);
    if (h->kind == LK::Cont && one) out.push_back(Rule::Restore);
    if (h->kind == LK::Zeta && two) out.push_back(Rule::Zeta);
    if (h->kind == LK::Kappa && two) out.push_back(Rule::Kappa);
    return out;
}

namespace {

enum class Read { Ok, NotNumeral, Budget };

Read readback_impl(const LTerm& t, std::uint64_t budget, InstructionEnv* env, Nat& out) {
    InstructionEnv local;
    InstructionEnv& e = env ? *env : local;
    LTerm F = inert("readback_f"), X = inert("readback_x");
    std::vector<Watcher> w = {[&](const Process& p) { return same_inert(p.head, F); },
                              [&](const Process& p) { return same_inert(p.head, X); }};
    std::uint64_t left = budget;
    // The term must first absorb f and wait for x; this rejects eta-variants
    // such as lam x. x that would otherwise count as one.
    auto first = run(Process{t, Stack{nullptr, "readback"}.push(F)}, left, w, e);
    left -= first.steps;
    if (first.outcome == Outcome::BudgetExceeded) return Read::Budget;
    if (first.outcome != Outcome::Stuck || first.last.head->kind != LK::Lam || !first.last.stack.empty())
        return Read::NotNumeral;
    Process cur{first.last.head, Stack{nullptr, "readback"}.push(X)};
    Nat count = 0;
    for (;;) {
        auto r = run(cur, left, w, e);
        left -= r.steps;
        if (r.outcome == Outcome::BudgetExceeded) return Read::Budget;
        if (r.outcome == Outcome::Stuck) return Read::NotNumeral;
        const Stack& s = r.last.stack;
        if (r.watcher == 1) {
            if (!s.empty()) return Read::NotNumeral;
            out = count;
            return Read::Ok;
        }
        if (s.empty() || s.top->next) return Read::NotNumeral;
        ++count;
        cur = Process{s.peek(), Stack{nullptr, "readback"}};
    }
}

Nat read_or_throw(const LTerm& t, std::uint64_t budget, InstructionEnv& env, bool& ok) {
    Nat n = 0;
    switch (readback_impl(t, budget, &env, n)) {
    case Read::Ok: ok = true; return n;
    case Read::NotNumeral: ok = false; return 0;
    case Read::Budget: fail("SubEvalBudget", "instruction sub-run exceeded " + std::to_string(budget) + " steps");
    }
    return 0;
}

StepResult stuck(std::string why) {
    StepResult r;
    r.stuck_reason = std::move(why);
    return r;
}

}  // namespace

std::optional<Nat> readback(const LTerm& t, std::uint64_t budget, InstructionEnv* env) {
    Nat n = 0;
    if (readback_impl(t, budget, env, n) == Read::Ok) return n;
    return std::nullopt;
}

StepResult step(const Process& p, InstructionEnv& env) {
    auto rules = applicable_rules(p);
    if (rules.size() > 1) fail("ContractViolation", "two machine rules apply to one process");
    if (rules.empty()) {
        switch (p.head->kind) {
        case LK::Var: return stuck("free variable " + p.head->name + " in head position");
        case LK::PairList: return stuck("result list in head position");
        case LK::Inert: return stuck("constant " + p.head->name + " in head position");
        default: return stuck(head_summary(p.head) + " in head position with too short a stack");
        }
    }
    StepResult r;
    r.rule = rules[0];
    const LTerm& h = p.head;
    const Stack& s = p.stack;
    switch (r.rule) {
    case Rule::Push: r.next = Process{h->a, s.push(h->b)}; break;
    case Rule::Pop: r.next = Process{substitute(h->a, h->name, s.peek()), s.pop()}; break;
    case Rule::Store: r.next = Process{s.peek(), s.pop().push(cont(s.pop()))}; break;
    case Rule::Restore: r.next = Process{s.peek(), h->saved}; break;
    case Rule::Zeta: {
        auto at = env.step_counter;
        const LTerm& xi = s.peek();
        Stack rest = s.pop();
        const LTerm& u = rest.peek();
        rest = rest.pop();
        std::vector<LTerm> args;
        const TermNode* spine = u.get();
        while (spine->kind == LK::App && args.size() < h->k) {
            args.insert(args.begin(), spine->b);
            spine = spine->a.get();
        }
        if (args.size() < h->k) return stuck("zeta argument is not applied to " + std::to_string(h->k) + " numeral(s)");
        InstrEvent ev{LK::Zeta, h->k, {}, 0, {}, at};
        for (const auto& a : args) {
            bool ok = false;
            Nat v = read_or_throw(a, env.sub_budget, env, ok);
            if (!ok) return stuck("zeta argument is not a numeral");
            ev.args.push_back(v);
        }
        bool ok = false;
        Nat v = read_or_throw(u, env.sub_budget, env, ok);
        if (!ok) return stuck("zeta argument does not evaluate to a numeral");
        ev.result = v;
        env.events.push_back(ev);
        r.next = Process{xi, rest.push(church(v))};
        break;
    }
    case Rule::Kappa: {
        auto at = env.step_counter;
        const LTerm& nu = s.peek();
        Stack rest = s.pop();
        LTerm xi = rest.peek();
        rest = rest.pop();
        bool ok = false;
        Nat n = read_or_throw(nu, env.sub_budget, env, ok);
        if (!ok) return stuck("kappa argument is not a numeral");
        if (!env.opponent) return stuck("kappa reached with no opponent");
        Nat pv = env.opponent(h->j, n, h->history);
        env.events.push_back(InstrEvent{LK::Kappa, h->j, {n}, pv, h->history, at});
        History next = h->history;
        next.emplace_back(n, pv);
        if (h->j + 1 < h->k) {
            rest = rest.push(app(storage_T(), kappa(h->j + 1, h->k, next)));
        } else {
            std::vector<LTerm> vs;
            for (const auto& [a, b] : next) {
                vs.push_back(church(a));
                vs.push_back(church(b));
            }
            rest = rest.push(pair_list(vs));
        }
        r.next = Process{xi, rest.push(church(pv))};
        break;
    }
    }
    return r;
}

RunResult run(const Process& p, std::uint64_t budget, const std::vector<Watcher>& watchers, InstructionEnv& env,
              bool keep_trace) {
    RunResult out;
    out.last = p;
    for (;;) {
        for (std::size_t i = 0; i < watchers.size(); ++i) {
            if (watchers[i](out.last)) {
                out.outcome = Outcome::WatcherHit;
                out.watcher = i;
                return out;
            }
        }
        if (applicable_rules(out.last).empty()) {
            out.outcome = Outcome::Stuck;
            out.reason = step(out.last, env).stuck_reason;
            return out;
        }
        if (out.steps >= budget) {
            out.outcome = Outcome::BudgetExceeded;
            out.reason = "machine budget of " + std::to_string(budget) + " steps exhausted";
            return out;
        }
        env.step_counter = out.steps + 1;
        auto r = step(out.last, env);
        if (!r.next) {
            out.outcome = Outcome::Stuck;
            out.reason = r.stuck_reason;
            return out;
        }
        if (keep_trace)
            out.trace.push_back({out.steps + 1, head_summary(out.last.head), out.last.stack.depth(), rule_name(r.rule)});
        out.last = std::move(*r.next);
        ++out.steps;
    }
}

}  // namespace witness::kam
