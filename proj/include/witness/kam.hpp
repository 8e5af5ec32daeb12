#pragma once
// Lambda-c terms and the call-by-name abstract machine with instruction constants.
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "witness/nat.hpp"
#include "witness/sexp.hpp"

namespace witness::kam {

struct TermNode;
using LTerm = std::shared_ptr<const TermNode>;

struct Cell;
struct Stack {
    std::shared_ptr<const Cell> top;
    std::string bottom = "pi0";
    bool empty() const { return top == nullptr; }
    std::size_t depth() const;
    const LTerm& peek() const;
    Stack pop() const;
    Stack push(LTerm t) const;
    std::vector<LTerm> items() const;
};
struct Cell {
    LTerm item;
    std::shared_ptr<const Cell> next;
};

Stack make_stack(std::vector<LTerm> items_top_first, std::string bottom = "pi0");

enum class LK { Var, Lam, App, CC, Cont, Zeta, Kappa, PairList, Inert };

using History = std::vector<std::pair<Nat, Nat>>;

struct TermNode {
    LK kind;
    std::string name;  // Var, Lam binder, Inert
    LTerm a, b;        // Lam body in a; App fn in a, arg in b
    Stack saved;       // Cont
    unsigned k = 1;    // Zeta arity; Kappa game length
    unsigned j = 0;    // Kappa position
    History history;   // Kappa
    std::vector<LTerm> values;  // PairList
    std::vector<std::string> free;  // sorted free variables
};

LTerm lvar(const std::string& x);
LTerm lam(const std::string& x, LTerm body);
LTerm lams(const std::vector<std::string>& xs, LTerm body);
LTerm app(LTerm f, LTerm a);
LTerm app(LTerm f, std::vector<LTerm> args);  // left-nested
LTerm cc();
LTerm cont(Stack s);
LTerm zeta(unsigned k = 1);
LTerm kappa(unsigned j, unsigned k, History h = {});
LTerm pair_list(std::vector<LTerm> values);
// Each call yields a distinct constant; equality of inert constants is identity.
LTerm inert(const std::string& name);

LTerm church(const Nat& n);
LTerm succ_term();
LTerm storage_T();
LTerm witness_t();
LTerm identity();

bool same_inert(const LTerm& a, const LTerm& b);
bool alpha_equal(const LTerm& a, const LTerm& b);
bool is_free(const std::string& x, const LTerm& t);
LTerm substitute(const LTerm& t, const std::string& x, const LTerm& u);

std::string print(const LTerm& t);
LTerm parse_lterm(const std::string& text);
LTerm parse_lterm(const Sexp& s);

struct Process {
    LTerm head;
    Stack stack;
};
std::string print(const Process& p);

// Callback for kappa: position j, Eloise's number n and the history so far.
using OpponentFn = std::function<Nat(unsigned j, const Nat& n, const History& h)>;

struct InstrEvent {
    LK kind;                // Zeta or Kappa
    unsigned j = 0;         // Kappa position, Zeta arity
    std::vector<Nat> args;  // Zeta: numeral arguments; Kappa: {n}
    Nat result = 0;
    History history;        // Kappa only, before this move
    std::uint64_t step = 0;
};

struct InstructionEnv {
    OpponentFn opponent;
    std::uint64_t sub_budget = 100000;  // per zeta / kappa / readback sub-run
    std::vector<InstrEvent> events;
    std::uint64_t step_counter = 0;
};

enum class Rule { Push, Pop, Store, Restore, Zeta, Kappa };
const char* rule_name(Rule r);

// Rules whose left-hand side matches the process; the machine is
// deterministic iff this never has two elements.
std::vector<Rule> applicable_rules(const Process& p);

struct StepResult {
    std::optional<Process> next;  // empty when stuck
    Rule rule = Rule::Push;
    std::string stuck_reason;
};
StepResult step(const Process& p, InstructionEnv& env);

struct TraceRow {
    std::uint64_t step;
    std::string head;
    std::size_t stack_depth;
    std::string rule;
};

using Watcher = std::function<bool(const Process&)>;

enum class Outcome { WatcherHit, Stuck, BudgetExceeded };

struct RunResult {
    Outcome outcome = Outcome::Stuck;
    Process last;
    std::uint64_t steps = 0;
    std::size_t watcher = 0;  // index of the matching watcher
    std::string reason;
    std::vector<TraceRow> trace;
};

RunResult run(const Process& p, std::uint64_t budget, const std::vector<Watcher>& watchers, InstructionEnv& env,
              bool keep_trace = false);

// Applies t to two fresh inert constants and counts applications of the first.
std::optional<Nat> readback(const LTerm& t, std::uint64_t budget, InstructionEnv* env = nullptr);

std::string head_summary(const LTerm& t);

}  // namespace witness::kam
