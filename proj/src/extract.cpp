#include <atomic>
#include <map>

#include "witness/error.hpp"
#include "witness/extract.hpp"

namespace witness::extract {

using kam::InstructionEnv;
using kam::LK;
using kam::Outcome;
using kam::Process;

eps::FunctionRegistry standard_matrices() {
    using V = std::vector<Nat>;
    eps::FunctionRegistry r;
    r.add("eq", 2, [](const V& v) { return Nat(v[0] == v[1] ? 0 : 1); });
    r.add("fst", 2, [](const V& v) { return v[0]; });
    r.add("le", 2, [](const V& v) { return Nat(v[1] <= v[0] ? 0 : 1); });
    r.add("m2", 4, [](const V& v) { return Nat(v[0] == 0 && v[1] == v[2] ? 0 : 1); });
    return r;
}

PrenexStatement statement(const eps::FunctionRegistry& matrices, const std::string& name, unsigned k,
                          Polarity polarity) {
    if (k == 0) fail("InvalidArgument", "alternation depth must be at least 1");
    if (polarity == Polarity::Forall && k != 1) fail("InvalidArgument", "the forall-exists form has depth 1");
    const auto* e = matrices.find(name);
    if (!e) fail("UnregisteredFunction", "no matrix named '" + name + "'");
    if (e->arity != 2 * k)
        fail("ArityError", "matrix '" + name + "' has arity " + std::to_string(e->arity) + ", depth " +
                               std::to_string(k) + " needs " + std::to_string(2 * k));
    return PrenexStatement{k, polarity, name, e->fn};
}

sol2::SOFormula statement_formula(const PrenexStatement& st) {
    std::vector<eps::ETerm> args;
    for (unsigned i = 1; i <= st.k; ++i) args.push_back(eps::var("x" + std::to_string(i)));
    for (unsigned i = 1; i <= st.k; ++i) args.push_back(eps::var("y" + std::to_string(i)));
    sol2::SOFormula f = sol2::equal(eps::fn(st.matrix_name, args), eps::zero());
    if (st.polarity == Polarity::Forall) return sol2::forall_ind("x1", sol2::exists_ind("y1", f));
    for (unsigned i = st.k; i >= 1; --i)
        f = sol2::exists_ind("x" + std::to_string(i), sol2::forall_ind("y" + std::to_string(i), f));
    return f;
}

void require_type(const sol2::Judgment& theta, const PrenexStatement& st) {
    if (!theta.context.empty()) fail("TypeMismatch", "realizer depends on open hypothesis " + theta.context[0].first);
    auto want = sol2::relativize(statement_formula(st));
    if (!sol2::alpha_eq(theta.formula, want))
        fail("TypeMismatch", "realizer proves " + sol2::print(theta.formula) + ", expected " + sol2::print(want));
}

namespace {

std::string fresh_bottom() {
    static std::atomic<unsigned> counter{0};
    return "pi0." + std::to_string(++counter);
}

InstructionEnv make_env(const RunOptions& opt) {
    InstructionEnv env;
    env.sub_budget = opt.sub_budget;
    return env;
}

bool pure(const LTerm& t) {
    switch (t->kind) {
    case LK::Var: return true;
    case LK::Lam: return pure(t->a);
    case LK::App: return pure(t->a) && pure(t->b);
    default: return false;
    }
}

bool pure_closed(const LTerm& t) { return t->free.empty() && pure(t); }

// Readback that treats an exhausted sub-run as "not a numeral".
std::optional<Nat> quiet_readback(const LTerm& t, std::uint64_t budget) {
    try {
        return kam::readback(t, budget);
    } catch (const Error&) {
        return std::nullopt;
    }
}

void finish(ExtractionResult& r, const kam::RunResult& run, InstructionEnv& env) {
    r.steps = run.steps;
    r.transcript.steps = run.steps;
    r.events = env.events;
    if (run.outcome == Outcome::WatcherHit) {
        r.outcome = Status::Success;
    } else if (run.outcome == Outcome::BudgetExceeded) {
        r.outcome = Status::BudgetExceeded;
    } else {
        fail("MachineStuck", "extraction run stopped before a winning state: " + run.reason);
    }
}

void recheck(const PrenexStatement& st, const std::vector<Nat>& n, const std::vector<Nat>& p) {
    std::vector<Nat> args = n;
    args.insert(args.end(), p.begin(), p.end());
    if (st.matrix(args) != 0) fail("ContractViolation", "extracted values fail the matrix");
}

std::vector<std::vector<Nat>> samples(unsigned arity) {
    std::vector<std::vector<Nat>> out;
    for (unsigned a = 0; a < 4; ++a) {
        std::vector<Nat> v;
        for (unsigned i = 0; i < arity; ++i) v.push_back((a + i) % 4);
        out.push_back(v);
    }
    return out;
}

void spot_check(const LTerm& t, unsigned arity, const Gamma& gamma, std::uint64_t budget) {
    for (const auto& args : samples(arity)) {
        LTerm call = t;
        for (const auto& a : args) call = kam::app(call, kam::church(a));
        auto r = quiet_readback(call, budget);
        std::string where = "strategy term on (";
        for (std::size_t i = 0; i < args.size(); ++i) where += (i ? " " : "") + to_string(args[i]);
        where += ")";
        if (!r) fail("RepresentationViolation", where + " does not compute a numeral");
        if (gamma && *r != gamma(args))
            fail("RepresentationViolation", where + " gives " + to_string(*r) + ", expected " + to_string(gamma(args)));
    }
}

// Compares each new zeta firing against the host strategy.
struct ZetaAudit {
    const std::vector<Gamma>* gammas;
    std::size_t seen = 0;
    void operator()(const InstructionEnv& env) {
        for (; seen < env.events.size(); ++seen) {
            const auto& e = env.events[seen];
            if (e.kind != LK::Zeta || !gammas || e.j > gammas->size() || !(*gammas)[e.j - 1]) continue;
            Nat want = (*gammas)[e.j - 1](e.args);
            if (want != e.result)
                fail("RepresentationViolation", "zeta probe returned " + to_string(e.result) + ", strategy gives " +
                                                    to_string(want));
        }
    }
};

// Moves of a zeta-driven run; p-values of earlier prefixes come from earlier probes.
void zeta_moves(const std::vector<kam::InstrEvent>& events, GameTranscript& tr) {
    std::map<std::vector<Nat>, Nat> seen;
    for (const auto& e : events) {
        if (e.kind != LK::Zeta) continue;
        History from;
        for (std::size_t i = 1; i < e.args.size(); ++i) {
            std::vector<Nat> prefix(e.args.begin(), e.args.begin() + static_cast<long>(i));
            auto it = seen.find(prefix);
            if (it == seen.end()) break;
            from.emplace_back(e.args[i - 1], it->second);
        }
        unsigned j = static_cast<unsigned>(e.args.size() - 1);
        tr.moves.push_back({Player::Exists, j, e.args.back(), from});
        tr.moves.push_back({Player::Forall, j, e.result, from});
        seen[e.args] = e.result;
    }
}

}  // namespace

ExtractionResult extract_pi2(const sol2::Judgment& theta, const PrenexStatement& st, const Nat& n,
                             const RunOptions& opt, const LTerm& numeral) {
    if (st.polarity != Polarity::Forall || st.k != 1) fail("InvalidArgument", "expected a forall-exists statement");
    require_type(theta, st);
    ExtractionResult r;
    r.bottom = fresh_bottom();
    LTerm wt = kam::witness_t();
    LTerm nu = numeral ? numeral : kam::church(n);
    Process start{theta.term, kam::make_stack({nu, kam::app(kam::storage_T(), wt)}, r.bottom)};
    auto env = make_env(opt);
    r.transcript.moves.push_back({Player::Forall, 0, n, {}});
    Nat found = 0;
    kam::Watcher w = [&](const Process& p) {
        if (p.stack.empty() || (p.head != wt && !kam::alpha_equal(p.head, wt))) return false;
        auto m = quiet_readback(p.stack.peek(), opt.sub_budget);
        if (!m) return false;
        r.transcript.moves.push_back({Player::Exists, 0, *m, {}});
        if (st.matrix({n, *m}) != 0) return false;
        found = *m;
        return true;
    };
    auto run = kam::run(start, opt.budget, {w}, env);
    finish(r, run, env);
    if (r.outcome == Status::Success) {
        recheck(st, {n}, {found});
        r.witnesses = {found};
        r.transcript.final = {{n, found}};
    }
    return r;
}

ExtractionResult extract_sigma2_strategy(const sol2::Judgment& theta, const PrenexStatement& st, const LTerm& t,
                                         const Gamma& gamma, const RunOptions& opt) {
    if (st.polarity != Polarity::Exists || st.k != 1) fail("InvalidArgument", "expected an exists-forall statement");
    require_type(theta, st);
    spot_check(t, 1, gamma, opt.sub_budget);
    using namespace kam;
    LTerm F = app(storage_T(),
                  lams({"x", "y"}, app(app(app(zeta(1), lvar("y")), app(lvar("f"), lvar("x"))), lvar("x"))));
    LTerm program = lam("f", app(theta.term, F));
    ExtractionResult r;
    r.bottom = fresh_bottom();
    auto env = make_env(opt);
    std::vector<Gamma> gs = {gamma};
    ZetaAudit audit{&gs};
    std::map<Nat, Nat> probed;
    std::map<const TermNode*, std::pair<LTerm, std::optional<Nat>>> cache;
    Nat found = 0;
    kam::Watcher w = [&](const Process& p) {
        audit(env);
        for (const auto& e : env.events) probed[e.args[0]] = e.result;
        if (probed.empty() || !pure_closed(p.head)) return false;
        auto it = cache.find(p.head.get());
        if (it == cache.end())
            it = cache.emplace(p.head.get(), std::make_pair(p.head, quiet_readback(p.head, opt.sub_budget))).first;
        const auto& n = it->second.second;
        if (!n) return false;
        auto g = probed.find(*n);
        if (g == probed.end() || st.matrix({*n, g->second}) != 0) return false;
        found = *n;
        return true;
    };
    auto run = kam::run({program, make_stack({t}, r.bottom)}, opt.budget, {w}, env);
    finish(r, run, env);
    zeta_moves(env.events, r.transcript);
    if (r.outcome == Status::Success) {
        Nat p = probed.at(found);
        recheck(st, {found}, {p});
        r.witnesses = {found};
        r.answers = {p};
        r.transcript.final = {{found, p}};
    }
    return r;
}

ExtractionResult extract_prenex(const sol2::Judgment& theta, const PrenexStatement& st, const Opponent& opponent,
                                const RunOptions& opt) {
    if (st.polarity != Polarity::Exists) fail("InvalidArgument", "expected an exists-forall statement");
    require_type(theta, st);
    using namespace kam;
    const unsigned k = st.k;
    ExtractionResult r;
    r.bottom = fresh_bottom();
    auto env = make_env(opt);
    std::vector<Nat> ns, ps;

    auto read_all = [&](const LTerm& list, std::vector<Nat>& out) {
        out.clear();
        for (const auto& v : list->values) {
            auto x = quiet_readback(v, opt.sub_budget);
            if (!x) return false;
            out.push_back(*x);
        }
        return true;
    };
    auto satisfied = [&] {
        std::vector<Nat> args = ns;
        args.insert(args.end(), ps.begin(), ps.end());
        return st.matrix(args) == 0;
    };

    if (opponent.kind == Opponent::Kind::TermStrategy) {
        if (opponent.terms.size() != k)
            fail("InvalidArgument", "strategy has " + std::to_string(opponent.terms.size()) + " term(s), need " +
                                        std::to_string(k));
        for (unsigned i = 0; i < k; ++i)
            spot_check(opponent.terms[i], i + 1, i < opponent.gammas.size() ? opponent.gammas[i] : nullptr,
                       opt.sub_budget);
        auto x = [](unsigned i) { return "x" + std::to_string(i); };
        std::vector<LTerm> xs;
        for (unsigned i = 1; i <= k; ++i) xs.push_back(lvar(x(i)));
        LTerm H = pair_list(xs);
        for (unsigned j = k; j-- > 0;) {
            std::string y = "y" + std::to_string(j + 1);
            LTerm call = lvar("f" + std::to_string(j + 1));
            for (unsigned i = 1; i <= j + 1; ++i) call = app(call, lvar(x(i)));
            H = app(storage_T(), lams({x(j + 1), y}, app(app(app(zeta(j + 1), lvar(y)), call), H)));
        }
        std::vector<std::string> fs;
        for (unsigned i = 1; i <= k; ++i) fs.push_back("f" + std::to_string(i));
        LTerm program = lams(fs, app(theta.term, H));
        ZetaAudit audit{&opponent.gammas};
        auto answer = [&](unsigned i) -> std::optional<Nat> {
            std::vector<Nat> prefix(ns.begin(), ns.begin() + i + 1);
            for (auto it = env.events.rbegin(); it != env.events.rend(); ++it)
                if (it->kind == LK::Zeta && it->args == prefix) return it->result;
            LTerm call = opponent.terms[i];
            for (const auto& a : prefix) call = app(call, church(a));
            return quiet_readback(call, opt.sub_budget);
        };
        kam::Watcher w = [&](const Process& p) {
            audit(env);
            if (p.head->kind != LK::PairList || p.head->values.size() != k || !read_all(p.head, ns)) return false;
            ps.clear();
            for (unsigned i = 0; i < k; ++i) {
                auto a = answer(i);
                if (!a) return false;
                ps.push_back(*a);
            }
            return satisfied();
        };
        auto run = kam::run({program, make_stack(opponent.terms, r.bottom)}, opt.budget, {w}, env);
        finish(r, run, env);
        zeta_moves(env.events, r.transcript);
    } else {
        if (opponent.kind == Opponent::Kind::HostFunctions) {
            if (opponent.gammas.size() != k)
                fail("InvalidArgument", "opponent has " + std::to_string(opponent.gammas.size()) +
                                            " function(s), need " + std::to_string(k));
            const auto& gs = opponent.gammas;
            env.opponent = [&gs](unsigned j, const Nat& n, const History& h) {
                std::vector<Nat> args;
                for (const auto& pr : h) args.push_back(pr.first);
                args.push_back(n);
                return gs.at(j)(args);
            };
        } else {
            if (!opponent.ask) fail("InvalidArgument", "interactive opponent without input");
            env.opponent = opponent.ask;
        }
        kam::Watcher w = [&](const Process& p) {
            if (p.head->kind != LK::PairList || p.head->values.size() != 2 * k) return false;
            std::vector<Nat> flat;
            if (!read_all(p.head, flat)) return false;
            ns.clear();
            ps.clear();
            for (unsigned i = 0; i < k; ++i) {
                ns.push_back(flat[2 * i]);
                ps.push_back(flat[2 * i + 1]);
            }
            return satisfied();
        };
        auto run = kam::run({theta.term, make_stack({app(storage_T(), kappa(0, k))}, r.bottom)}, opt.budget, {w}, env);
        finish(r, run, env);
        for (const auto& e : env.events) {
            if (e.kind != LK::Kappa) continue;
            r.transcript.moves.push_back({Player::Exists, e.j, e.args[0], e.history});
            r.transcript.moves.push_back({Player::Forall, e.j, e.result, e.history});
        }
    }
    if (r.outcome == Status::Success) {
        recheck(st, ns, ps);
        r.witnesses = ns;
        r.answers = ps;
        for (unsigned i = 0; i < k; ++i) r.transcript.final.emplace_back(ns[i], ps[i]);
    }
    return r;
}

}  // namespace witness::extract
