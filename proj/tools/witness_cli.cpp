#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "witness/bounds.hpp"
#include "witness/error.hpp"
#include "witness/extract.hpp"
#include "witness/kam.hpp"
#include "witness/ordinals.hpp"
#include "witness/proof.hpp"
#include "witness/sol2.hpp"
#include "witness/subst.hpp"

using json = nlohmann::json;
using namespace witness;

namespace {

bool g_json = false;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IOError", "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const json& j, const std::string& text) {
    if (g_json)
        std::cout << j.dump() << "\n";
    else
        std::cout << text << "\n";
}

json nat_json(const Nat& n) {
    if (n <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(n);
    return to_string(n);
}

// name=value pairs bind declared function symbols to constant functions.
eps::FunctionRegistry registry_for(const eps::Proof& p, const std::vector<std::string>& bindings) {
    eps::FunctionRegistry reg;
    for (const auto& b : bindings) {
        auto eq = b.find('=');
        if (eq == std::string::npos) fail("UsageError", "expected name=value, got " + b);
        std::string f = b.substr(0, eq);
        Nat v = parse_nat(b.substr(eq + 1));
        auto it = p.functions.find(f);
        if (it == p.functions.end()) fail("UnregisteredFunction", "proof declares no function " + f);
        reg.add(f, it->second, [v](const std::vector<Nat>&) { return v; });
    }
    return reg;
}

int cmd_check(const std::string& file, const std::vector<std::string>& fns) {
    auto p = eps::parse_proof(slurp(file));
    auto errs = eps::check_proof(p, registry_for(p, fns));
    json j = {{"ok", errs.empty()}, {"steps", p.steps.size()}, {"errors", json::array()}};
    std::string text = errs.empty() ? "ok: " + std::to_string(p.steps.size()) + " steps" : "";
    for (const auto& e : errs) {
        j["errors"].push_back({{"step", e.index + 1}, {"reason", e.reason}});
        text += (text.empty() ? "" : "\n") + std::string("step ") + std::to_string(e.index + 1) + ": " + e.reason;
    }
    emit(j, text);
    return errs.empty() ? 0 : 1;
}

int cmd_solve(const std::string& file, std::uint64_t budget, const std::string& trace_path,
              const std::vector<std::string>& fns) {
    auto p = eps::parse_proof(slurp(file));
    auto reg = registry_for(p, fns);
    auto errs = eps::check_proof(p, reg);
    if (!errs.empty()) fail("ProofError", "step " + std::to_string(errs[0].index + 1) + ": " + errs[0].reason);
    subst::SolveOptions opt;
    opt.budget = budget;
    auto r = subst::solve(p, reg, opt);
    if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        if (!out) fail("IOError", "cannot write " + trace_path);
        for (const auto& rec : r.trace.records) {
            json row = {{"gen", rec.gen}, {"characteristic", rec.characteristic}, {"o", nat_json(rec.o)},
                        {"d", nat_json(rec.d)}};
            if (rec.repair) {
                json key = json::array();
                for (const auto& k : rec.repair->key) key.push_back(nat_json(k));
                row["repair"] = {{"step", rec.repair->step + 1},
                                 {"category", rec.repair->category},
                                 {"key", key},
                                 {"old", nat_json(rec.repair->old_value)},
                                 {"new", nat_json(rec.repair->new_value)}};
            }
            out << row.dump() << "\n";
        }
    }
    if (r.status == subst::RunStatus::BudgetExceeded)
        fail("BudgetExceeded", "no final state within " + std::to_string(budget) + " repairs");
    json j = {{"states", r.trace.records.size()}, {"witnesses", json::array()}};
    std::string text = "final state after " + std::to_string(r.trace.records.size()) + " state(s)";
    for (const auto& [e, v] : r.witnesses) {
        j["witnesses"].push_back({{"term", eps::print(e)}, {"value", nat_json(v)}});
        text += "\nwitness " + eps::print(e) + " -> " + to_string(v);
    }
    emit(j, text);
    return 0;
}

int cmd_bound(const std::string& name, const std::vector<std::string>& raw, std::uint64_t budget) {
    std::vector<Nat> a;
    for (const auto& s : raw) a.push_back(parse_nat(s));
    auto need = [&](std::size_t n, const char* usage) {
        if (a.size() != n) fail("UsageError", std::string("usage: bound ") + usage);
    };
    auto small = [](const Nat& n) {
        if (n > 64) fail("InvalidArgument", "level argument too large");
        return static_cast<int>(n);
    };
    Budget b(budget);
    Nat v;
    if (name == "phi") {
        need(2, "phi m a");
        v = bounds::phi(small(a[0]), a[1], b);
    } else if (name == "omega") {
        need(2, "omega m n");
        v = bounds::omega_fn(small(a[0]), a[1], b);
    } else if (name == "psi") {
        need(3, "psi m n e");
        v = bounds::psi(small(a[0]), a[1], a[2], b);
    } else if (name == "rho") {
        need(2, "rho n e");
        v = bounds::rho(small(a[0]), a[1], b);
    } else if (name == "lambda") {
        need(2, "lambda a p");
        v = bounds::lambda_fn(a[0], small(a[1]), b);
    } else if (name == "kappa" || name == "tau") {
        need(4, (name + " c p n a").c_str());
        auto c = bounds::CParam::constant(a[0]);
        v = name == "kappa" ? bounds::kappa_fn(c, small(a[1]), a[2], a[3], b)
                            : bounds::tau_fn(c, small(a[1]), a[2], a[3], b);
    } else if (name == "born") {
        need(3, "born m e g");
        v = bounds::born({static_cast<unsigned>(small(a[0])), a[1], small(a[2])}, b);
    } else {
        fail("UsageError", "unknown bound '" + name + "'");
    }
    emit({{"name", name}, {"value", nat_json(v)}, {"work", b.used()}}, to_string(v));
    return 0;
}

ord::OrdinalM parse_ordinal(const Sexp& s, int level) {
    if (level == 1) {
        if (!s.head_is("pair") || s.items.size() != 3 || !s.items[1].is_atom || !s.items[2].is_atom)
            syntax_error(s, "level 1 ordinals are written (pair a b)");
        return ord::OrdinalM::finite_pair(parse_nat(s.items[1].atom), parse_nat(s.items[2].atom));
    }
    if (!s.head_is("sum")) syntax_error(s, "ordinals above level 1 are written (sum e1 ... ek)");
    std::vector<ord::OrdinalM> exps;
    for (std::size_t i = 1; i < s.items.size(); ++i) exps.push_back(parse_ordinal(s.items[i], level - 1));
    return ord::OrdinalM::sum(level, exps);
}

std::string print_ordinal(const ord::OrdinalM& o) {
    if (o.level == 1) return "(pair " + to_string(o.a) + " " + to_string(o.b) + ")";
    std::string out = "(sum";
    for (const auto& e : o.exponents) out += " " + print_ordinal(e);
    return out + ")";
}

int cmd_ordinal(const std::string& op, int level, const std::vector<std::string>& args) {
    if (level < 1 || level > 16) fail("InvalidArgument", "level must be between 1 and 16");
    if (op == "encode") {
        if (args.size() != 1) fail("UsageError", "usage: ordinal encode --level m '<ordinal>'");
        auto c = ord::encode(parse_ordinal(parse_one_sexp(args[0]), level));
        emit({{"level", level}, {"code", nat_json(c.code)}}, to_string(c.code));
    } else if (op == "decode") {
        if (args.size() != 1) fail("UsageError", "usage: ordinal decode --level m <code>");
        auto o = ord::decode({level, parse_nat(args[0])});
        auto text = print_ordinal(o);
        emit({{"level", level}, {"ordinal", text}}, text);
    } else if (op == "cmp") {
        if (args.size() != 2) fail("UsageError", "usage: ordinal cmp --level m <code> <code>");
        ord::CodedOrdinal x{level, parse_nat(args[0])}, y{level, parse_nat(args[1])};
        std::string r = ord::less(x, y) ? "LT" : ord::less(y, x) ? "GT" : "EQ";
        emit({{"result", r}}, r);
    } else {
        fail("UsageError", "unknown ordinal operation '" + op + "'");
    }
    return 0;
}

int cmd_kam(const std::string& file, const std::vector<std::string>& stack, std::uint64_t budget, bool trace) {
    auto t = kam::parse_lterm(slurp(file));
    std::vector<kam::LTerm> items;
    for (const auto& s : stack) items.push_back(kam::parse_lterm(s));
    kam::InstructionEnv env;
    auto r = kam::run({t, kam::make_stack(items, "pi0")}, budget, {}, env, trace);
    const char* outcome = r.outcome == kam::Outcome::Stuck ? "stuck" : r.outcome == kam::Outcome::BudgetExceeded
                                                                           ? "budget_exceeded"
                                                                           : "watcher";
    json j = {{"outcome", outcome}, {"steps", r.steps}, {"final", kam::print(r.last)}, {"reason", r.reason}};
    std::string text;
    if (trace) {
        j["trace"] = json::array();
        for (const auto& row : r.trace) {
            j["trace"].push_back({{"step", row.step}, {"head", row.head}, {"depth", row.stack_depth}, {"rule", row.rule}});
            text += std::to_string(row.step) + " " + row.rule + " " + row.head + " depth " +
                    std::to_string(row.stack_depth) + "\n";
        }
    }
    text += std::string(outcome) + " after " + std::to_string(r.steps) + " step(s)\n" + kam::print(r.last);
    if (!r.reason.empty()) text += "\n" + r.reason;
    emit(j, text);
    return r.outcome == kam::Outcome::BudgetExceeded ? 1 : 0;
}

sol2::Judgment load_theta(const std::string& file) {
    auto matrices = extract::standard_matrices();
    return sol2::check_derivation(sol2::parse_derivation(slurp(file)), sol2::builtin_registry(), &matrices);
}

int cmd_type(const std::string& file) {
    auto j = load_theta(file);
    json out = {{"term", kam::print(j.term)}, {"formula", sol2::print(j.formula)}, {"context", json::array()}};
    std::string text;
    for (const auto& [h, f] : j.context) {
        out["context"].push_back({{"name", h}, {"formula", sol2::print(f)}});
        text += h + " : " + sol2::print(f) + "\n";
    }
    text += "|- " + kam::print(j.term) + " : " + sol2::print(j.formula);
    emit(out, text);
    return 0;
}

struct ExtractArgs {
    std::string theta, matrix, script, strategy, transcript;
    bool interactive = false;
    std::vector<std::string> constants;
    std::string n;
    unsigned k = 0;
    std::uint64_t budget = 1000000;
};

int report(const extract::ExtractionResult& r, const ExtractArgs& a, const std::string& text_value) {
    if (!a.transcript.empty()) {
        std::ofstream out(a.transcript);
        if (!out) fail("IOError", "cannot write " + a.transcript);
        out << extract::transcript_json(r.transcript) << "\n";
    }
    if (r.outcome == extract::Status::BudgetExceeded)
        fail("BudgetExceeded", "no winning state within " + std::to_string(a.budget) + " machine steps");
    json j = json::parse(extract::transcript_json(r.transcript));
    j["bottom"] = r.bottom;
    emit(j, text_value);
    return 0;
}

int cmd_extract(const std::string& mode, const ExtractArgs& a) {
    auto matrices = extract::standard_matrices();
    auto theta = load_theta(a.theta);
    extract::RunOptions opt;
    opt.budget = a.budget;
    if (mode == "pi2") {
        if (a.n.empty()) fail("UsageError", "extract pi2 needs --n");
        auto st = extract::statement(matrices, a.matrix, 1, extract::Polarity::Forall);
        auto r = extract::extract_pi2(theta, st, parse_nat(a.n), opt);
        return report(r, a, r.witnesses.empty() ? "" : to_string(r.witnesses[0]));
    }
    if (mode == "sigma2") {
        auto st = extract::statement(matrices, a.matrix, 1, extract::Polarity::Exists);
        auto t = a.strategy.empty() ? kam::identity() : kam::parse_lterm(a.strategy);
        auto r = extract::extract_sigma2_strategy(theta, st, t, nullptr, opt);
        return report(r, a, r.witnesses.empty() ? "" : to_string(r.witnesses[0]));
    }
    if (mode != "prenex") fail("UsageError", "unknown extraction '" + mode + "'");
    const auto* m = matrices.find(a.matrix);
    if (!m) fail("UnregisteredFunction", "no matrix named '" + a.matrix + "'");
    unsigned k = a.k ? a.k : m->arity / 2;
    auto st = extract::statement(matrices, a.matrix, k, extract::Polarity::Exists);
    int sources = (!a.script.empty()) + a.interactive + (!a.constants.empty());
    if (sources != 1) fail("UsageError", "give exactly one of --opponent-script, --interactive, --constant");
    extract::Opponent opp;
    std::ifstream script;
    std::ostringstream quiet;
    if (!a.script.empty()) {
        script.open(a.script);
        if (!script) fail("IOError", "cannot read " + a.script);
        opp = extract::interactive(script, quiet);
    } else if (a.interactive) {
        opp = extract::interactive(std::cin, g_json ? std::cerr : std::cout);
    } else {
        std::vector<extract::Gamma> gs;
        for (const auto& c : a.constants) {
            Nat v = parse_nat(c);
            gs.push_back([v](const std::vector<Nat>&) { return v; });
        }
        opp = extract::host_functions(gs);
    }
    auto r = extract::extract_prenex(theta, st, opp, opt);
    std::string text;
    for (std::size_t i = 0; i < r.witnesses.size(); ++i)
        text += (i ? " " : "") + std::string("(") + to_string(r.witnesses[i]) + " " + to_string(r.answers[i]) + ")";
    return report(r, a, text);
}

int fail_with(const std::string& kind, const std::string& message) {
    if (g_json)
        std::cout << json{{"error", kind}, {"message", message}}.dump() << "\n";
    else
        std::cerr << "error: " << kind << ": " << message << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Witness extraction workbench"};
    app.require_subcommand(1);
    app.add_flag("--json", g_json, "Print results as JSON");

    std::string file, trace_path, name, op;
    std::vector<std::string> args, stack, fns;
    std::uint64_t budget = kDefaultBudget;
    int level = 1;
    bool trace = false;

    auto* check = app.add_subcommand("check", "Check an epsilon proof");
    check->add_option("proof", file)->required();
    check->add_option("--fn", fns, "Bind a declared function to a constant: name=value");

    auto* solve = app.add_subcommand("solve", "Run the substitution method on a proof");
    solve->add_option("proof", file)->required();
    solve->add_option("--budget", budget, "Maximum number of repairs");
    solve->add_option("--trace", trace_path, "Write one JSON line per state");
    solve->add_option("--fn", fns, "Bind a declared function to a constant: name=value");

    auto* bound = app.add_subcommand("bound", "Evaluate a bound function");
    bound->add_option("name", name)->required();
    bound->add_option("args", args);
    bound->add_option("--budget", budget, "Work budget");

    auto* ordinal = app.add_subcommand("ordinal", "Encode, decode or compare ordinal codes");
    ordinal->add_option("op", op)->required()->check(CLI::IsMember({"encode", "decode", "cmp"}));
    ordinal->add_option("args", args);
    ordinal->add_option("--level", level, "Ordinal level");

    auto* kamcmd = app.add_subcommand("kam", "Run the abstract machine");
    kamcmd->add_option("op", op)->required()->check(CLI::IsMember({"run"}));
    kamcmd->add_option("term", file)->required();
    kamcmd->add_option("--stack", stack, "Stack item, top first");
    kamcmd->add_option("--budget", budget, "Maximum machine steps");
    kamcmd->add_flag("--trace", trace, "Record every step");

    auto* type = app.add_subcommand("type", "Check a typing derivation");
    type->add_option("derivation", file)->required();

    ExtractArgs ea;
    auto add_extract_opts = [&](CLI::App* c, bool interactive_only) {
        c->add_option("--theta", ea.theta, "Derivation of the relativized statement")->required();
        c->add_option("--matrix", ea.matrix, "Registered matrix name")->required();
        c->add_option("--budget", ea.budget, "Maximum machine steps");
        c->add_option("--transcript", ea.transcript, "Write the game transcript as JSON");
        c->add_option("--k", ea.k, "Alternation depth");
        if (interactive_only) return;
        c->add_option("--n", ea.n, "Input for the forall-exists form");
        c->add_option("--opponent-script", ea.script, "Opponent answers, one natural per line");
        c->add_flag("--interactive", ea.interactive, "Ask for the opponent's answers on stdin");
        c->add_option("--constant", ea.constants, "Constant opponent answers, one per round");
        c->add_option("--strategy", ea.strategy, "Strategy term for sigma2");
    };
    auto* ext = app.add_subcommand("extract", "Extract witnesses from a realizer");
    ext->add_option("mode", op)->required()->check(CLI::IsMember({"pi2", "sigma2", "prenex"}));
    add_extract_opts(ext, false);

    auto* play = app.add_subcommand("play", "Play the universal side against a realizer");
    add_extract_opts(play, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*check) return cmd_check(file, fns);
        if (*solve) return cmd_solve(file, budget, trace_path, fns);
        if (*bound) return cmd_bound(name, args, budget);
        if (*ordinal) return cmd_ordinal(op, level, args);
        if (*kamcmd) return cmd_kam(file, stack, budget, trace);
        if (*type) return cmd_type(file);
        if (*ext) return cmd_extract(op, ea);
        if (*play) {
            ea.interactive = true;
            return cmd_extract("prenex", ea);
        }
    } catch (const Error& e) {
        if (e.kind() == "UsageError") {
            std::cerr << e.what() << "\n";
            return 2;
        }
        return fail_with(e.kind(), e.what());
    } catch (const std::exception& e) {
        return fail_with("InternalError", e.what());
    }
    return 2;
}
