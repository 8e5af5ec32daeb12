#include <doctest.h>

#include <random>

#include "witness/error.hpp"
#include "witness/kam.hpp"

using namespace witness::kam;
using witness::Nat;

namespace {

bool same_stack(const Stack& a, const Stack& b) {
    auto x = a.items(), y = b.items();
    if (x.size() != y.size() || a.bottom != b.bottom) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!alpha_equal(x[i], y[i])) return false;
    return true;
}

Process one_step(const Process& p, InstructionEnv& env) {
    auto r = step(p, env);
    REQUIRE(r.next.has_value());
    return *r.next;
}

// Independent weak head reducer on terms: contracts the head redex of the
// application spine until the head is not an abstraction applied to something.
std::optional<LTerm> whnf(LTerm t, int limit) {
    for (int i = 0; i < limit; ++i) {
        std::vector<LTerm> args;
        LTerm h = t;
        while (h->kind == LK::App) {
            args.insert(args.begin(), h->b);
            h = h->a;
        }
        if (h->kind != LK::Lam || args.empty()) return t;
        LTerm r = substitute(h->a, h->name, args[0]);
        for (std::size_t k = 1; k < args.size(); ++k) r = app(r, args[k]);
        t = r;
    }
    return std::nullopt;
}

struct Gen {
    std::mt19937_64 rng;
    std::vector<LTerm> consts;
    int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

    LTerm pure(int depth, std::vector<std::string>& scope) {
        if (depth == 0 || pick(4) == 0) {
            if (!scope.empty() && pick(3)) return lvar(scope[static_cast<std::size_t>(pick(static_cast<int>(scope.size())))]);
            return consts[static_cast<std::size_t>(pick(static_cast<int>(consts.size())))];
        }
        if (pick(2)) {
            std::string x = "v" + std::to_string(pick(3));
            scope.push_back(x);
            auto b = pure(depth - 1, scope);
            scope.pop_back();
            return lam(x, b);
        }
        return app(pure(depth - 1, scope), pure(depth - 1, scope));
    }

    LTerm any(int depth) {
        std::vector<std::string> scope;
        switch (pick(8)) {
        case 0: return cc();
        case 1: return zeta(1 + static_cast<unsigned>(pick(2)));
        case 2: return kappa(0, 1 + static_cast<unsigned>(pick(2)));
        case 3: return cont(make_stack({church(static_cast<unsigned>(pick(3)))}));
        case 4: return pair_list({church(1)});
        case 5: return lvar("y");
        default: return pure(depth, scope);
        }
    }
};

}  // namespace

TEST_CASE("four base rules") {
    InstructionEnv env;
    auto t = inert("t"), u = inert("u"), rho = inert("rho");
    Stack pi = make_stack({rho}, "pi");

    auto p1 = one_step({app(t, u), pi}, env);
    CHECK(same_inert(p1.head, t));
    CHECK(same_stack(p1.stack, make_stack({u, rho}, "pi")));

    auto p2 = one_step({lam("x", app(lvar("x"), lvar("x"))), pi.push(u)}, env);
    CHECK(print(p2.head) == "(app (instr const u) (instr const u))");
    CHECK(same_stack(p2.stack, pi));

    auto p3 = one_step({cc(), pi.push(t)}, env);
    CHECK(same_inert(p3.head, t));
    REQUIRE(p3.stack.depth() == 2);
    CHECK(p3.stack.peek()->kind == LK::Cont);
    CHECK(p3.stack.peek()->saved.top == pi.top);
    CHECK(p3.stack.pop().top == pi.top);

    Stack other = make_stack({u}, "sigma");
    auto p4 = one_step({cont(pi), other.push(t)}, env);
    CHECK(same_inert(p4.head, t));
    CHECK(p4.stack.top == pi.top);
    CHECK(p4.stack.bottom == "pi");

    CHECK(applicable_rules({lam("x", lvar("x")), Stack{}}).empty());
    CHECK(applicable_rules({cc(), Stack{}}).empty());
}

TEST_CASE("instruction rules") {
    InstructionEnv env;
    auto xi = inert("xi");
    Stack pi = make_stack({}, "pi");
    auto p = one_step({zeta(), pi.push(app(identity(), church(2))).push(xi)}, env);
    CHECK(same_inert(p.head, xi));
    CHECK(alpha_equal(p.stack.peek(), church(2)));
    CHECK(p.stack.depth() == 1);
    REQUIRE(env.events.size() == 1);
    CHECK(env.events[0].args == std::vector<Nat>{2});

    auto z2 = one_step({zeta(2), pi.push(app(app(lams({"a", "b"}, lvar("b")), church(1)), church(5))).push(xi)}, env);
    CHECK(alpha_equal(z2.stack.peek(), church(5)));

    env.opponent = [](unsigned, const Nat& n, const History&) { return n + 7; };
    auto k = one_step({kappa(0, 1), pi.push(xi).push(church(3))}, env);
    CHECK(same_inert(k.head, xi));
    auto items = k.stack.items();
    REQUIRE(items.size() == 2);
    CHECK(alpha_equal(items[0], church(10)));
    CHECK(print(items[1]) == "(instr pairs (church 3) (church 10))");

    auto k2 = one_step({kappa(0, 2), pi.push(xi).push(church(1))}, env);
    auto it2 = k2.stack.items();
    REQUIRE(it2.size() == 2);
    CHECK(alpha_equal(it2[0], church(8)));
    REQUIRE(it2[1]->kind == LK::App);
    CHECK(alpha_equal(it2[1]->a, storage_T()));
    CHECK(it2[1]->b->kind == LK::Kappa);
    CHECK(it2[1]->b->j == 1);
    CHECK(it2[1]->b->history == History{{1, 8}});

    InstructionEnv none;
    CHECK_FALSE(step({kappa(0, 1), pi.push(xi).push(church(3))}, none).next.has_value());
    CHECK_FALSE(step({zeta(), pi.push(identity()).push(xi)}, none).next.has_value());
}

TEST_CASE("run outcomes") {
    InstructionEnv env;
    auto c = inert("c");
    Stack rho = make_stack({inert("r")}, "rho");
    auto hit = run({c, rho}, 100, {[&](const Process& p) { return same_inert(p.head, c); }}, env);
    CHECK(hit.outcome == Outcome::WatcherHit);
    CHECK(hit.steps == 0);

    Process idy{app(identity(), lvar("y")), rho};
    auto st = run(idy, 100, {}, env, true);
    CHECK(st.outcome == Outcome::Stuck);
    CHECK(st.steps == 2);
    CHECK(print(st.last.head) == "y");
    REQUIRE(st.trace.size() == 2);
    CHECK(st.trace[0].rule == "push");
    CHECK(st.trace[1].rule == "pop");
    CHECK(st.trace[1].stack_depth == 2);

    auto b = run(idy, 1, {}, env);
    CHECK(b.outcome == Outcome::BudgetExceeded);
}

TEST_CASE("numerals and readback") {
    CHECK(readback(church(0), 1000) == Nat(0));
    CHECK(readback(church(3), 1000) == Nat(3));
    CHECK_FALSE(readback(identity(), 1000).has_value());
    for (unsigned n = 0; n <= 100; ++n) CHECK(readback(church(n), 100000) == Nat(n));
    CHECK(readback(app(succ_term(), church(4)), 1000) == Nat(5));
    CHECK(readback(app(identity(), church(6)), 1000) == Nat(6));
    CHECK_FALSE(readback(church(50), 10).has_value());
    CHECK(print(witness_t()) == "(lam x (lam y (app y x)))");
    CHECK(print(storage_T()) ==
          "(lam f (lam n (app n (lam g (lam x (app g (app (lam n (lam f (lam x (app f (app n f x))))) x)))) f (church 0))))");
}

TEST_CASE("substitution") {
    auto t = substitute(lam("y", lvar("x")), "x", lvar("y"));
    CHECK(print(t) == "(lam y' y)");
    auto u = inert("u");
    CHECK(same_inert(substitute(lvar("x"), "x", u), u));
    auto xx = substitute(app(lvar("x"), lvar("x")), "x", lam("z", lvar("z")));
    CHECK(print(xx) == "(app (lam z z) (lam z z))");
    CHECK(print(substitute(lam("x", lvar("x")), "x", u)) == "(lam x x)");
}

TEST_CASE("syntax round trip") {
    const char* texts[] = {"(lam x (app x x))", "(app (lam (a b) a) cc (church 3))", "(instr zeta 2)",
                           "(instr kappa 1 2 (4 5))", "(instr pairs (church 1) (church 2))", "(builtin T)"};
    for (const char* s : texts) {
        auto t = parse_lterm(s);
        CHECK(alpha_equal(parse_lterm(print(t)), t));
    }
    CHECK_THROWS_AS(parse_lterm("(foo x)"), witness::Error);
    CHECK_THROWS_AS(parse_lterm("(instr kappa 0 1 (1 2))"), witness::Error);
}

TEST_CASE("determinism fuzz") {
    Gen g{std::mt19937_64(7), {inert("a"), inert("b")}};
    InstructionEnv env;
    env.opponent = [](unsigned, const Nat&, const History&) { return Nat(1); };
    env.sub_budget = 200;
    std::size_t two = 0, checked = 0;
    for (int i = 0; i < 10000; ++i) {
        Process p{g.any(3), Stack{}};
        int depth = g.pick(4);
        for (int d = 0; d < depth; ++d) p.stack = p.stack.push(g.any(2));
        for (int s = 0; s < 20; ++s) {
            ++checked;
            if (applicable_rules(p).size() > 1) ++two;
            StepResult r;
            try {
                r = step(p, env);
            } catch (const witness::Error&) {
                break;
            }
            if (!r.next) break;
            p = *r.next;
        }
    }
    CHECK(two == 0);
    CHECK(checked >= 10000);
}

TEST_CASE("head reduction agrees with the machine") {
    Gen g{std::mt19937_64(11), {inert("a"), inert("b"), inert("c")}};
    InstructionEnv env;
    std::size_t compared = 0;
    for (int i = 0; i < 400; ++i) {
        std::vector<std::string> scope;
        LTerm xi = g.pure(5, scope);
        auto nf = whnf(xi, 200);
        if (!nf) continue;
        std::vector<LTerm> args;
        LTerm eta = *nf;
        while (eta->kind == LK::App) {
            args.insert(args.begin(), eta->b);
            eta = eta->a;
        }
        Stack pi = make_stack({inert("p1"), inert("p2")}, "pi");
        Stack want = pi;
        for (auto it = args.rbegin(); it != args.rend(); ++it) want = want.push(*it);
        auto target = [&](const Process& p) { return alpha_equal(p.head, eta) && same_stack(p.stack, want); };
        auto r = run({xi, pi}, 100000, {target}, env);
        CHECK(r.outcome == Outcome::WatcherHit);
        ++compared;
    }
    CHECK(compared >= 100);
}

TEST_CASE("storage operator normalizes its argument") {
    InstructionEnv env;
    for (unsigned n = 0; n <= 12; ++n) {
        std::vector<LTerm> forms = {church(n), app(identity(), church(n))};
        if (n > 0) forms.push_back(app(succ_term(), church(n - 1)));
        for (const auto& nu : forms) {
            auto phi = inert("phi");
            auto tail = inert("tail");
            Stack pi = make_stack({tail}, "pi");
            auto r = run({app(storage_T(), phi), pi.push(nu)}, 100000,
                         {[&](const Process& p) { return same_inert(p.head, phi); }}, env);
            REQUIRE(r.outcome == Outcome::WatcherHit);
            REQUIRE(r.last.stack.depth() == 2);
            CHECK(readback(r.last.stack.peek(), 10000) == Nat(n));
            CHECK(same_inert(r.last.stack.pop().peek(), tail));
        }
    }
}
