#pragma once
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "witness/budget.hpp"
#include "witness/ordinals.hpp"
#include "witness/proof.hpp"

namespace witness::subst {

using eps::Category;
using eps::EFormula;
using eps::ETerm;
using eps::FunctionRegistry;
using eps::Proof;

struct Substituent {
    unsigned arity = 0;
    std::map<std::vector<Nat>, Nat> table;  // nonzero entries only
    Nat at(const std::vector<Nat>& key) const;
    bool null() const { return table.empty(); }
};

struct Layout {
    std::vector<Category> categories;
    std::map<std::string, std::size_t> index;
    explicit Layout(std::vector<Category> cats);
    std::optional<std::size_t> find(const Category& c) const;
};

struct SubstState {
    std::shared_ptr<const Layout> layout;
    std::vector<Substituent> subs;
    std::uint64_t generation = 0;
};

SubstState initial_state(std::shared_ptr<const Layout> layout);

using Env = std::vector<std::pair<std::string, Nat>>;

// Evaluates closed (or env-closed) terms and formulas under a substitution.
// Splits of epsilon-nodes are cached per node, so one evaluator should be
// reused across a run.
class Evaluator {
public:
    explicit Evaluator(const FunctionRegistry& reg) : reg_(reg) {}
    Nat term(const ETerm& t, const SubstState& s, Env& env) const;
    bool formula(const EFormula& f, const SubstState& s, Env& env) const;
    Nat term(const ETerm& t, const SubstState& s) const;
    bool formula(const EFormula& f, const SubstState& s) const;
    // Category position and key of an epsilon-node under an environment.
    std::pair<std::optional<std::size_t>, std::vector<Nat>> locate(const ETerm& e, const SubstState& s,
                                                                   Env& env) const;

private:
    const eps::EpsSplit& split(const ETerm& e) const;
    const FunctionRegistry& reg_;
    mutable std::unordered_map<const eps::TermNode*, std::pair<ETerm, eps::EpsSplit>> cache_;
};

Nat resolve_term(const ETerm& t, const SubstState& s, const FunctionRegistry& reg);
bool eval_formula(const EFormula& f, const SubstState& s, const FunctionRegistry& reg);

std::optional<std::size_t> first_false_critical(const Proof& p, const SubstState& s, const FunctionRegistry& reg);

struct Repair {
    std::size_t step = 0;      // proof step index
    std::size_t category = 0;  // layout position
    std::vector<Nat> key;
    Nat old_value = 0, new_value = 0;
};

// One iteration: repair the first false III.1 step and null every later category.
SubstState step(const Proof& p, const SubstState& s, const FunctionRegistry& reg, Repair* info = nullptr,
                Budget* work = nullptr);

bool verify_property_p(const SubstState& s, const FunctionRegistry& reg, std::uint64_t scan_limit = 100000);

std::size_t characteristic(const SubstState& s);
Nat order_of(const SubstState& s, const std::vector<ETerm>& eps_order, const FunctionRegistry& reg);
Nat degree_of(const SubstState& s, const Proof& p, const FunctionRegistry& reg, Budget* work = nullptr);
std::pair<Nat, Nat> index_of(const SubstState& s, const Proof& p, const FunctionRegistry& reg);

bool is_progressive(const SubstState& s, const SubstState& t);
bool is_strictly_progressive(const SubstState& s, const SubstState& t);

struct TraceRecord {
    std::uint64_t gen = 0;
    std::optional<Repair> repair;  // empty for the final state
    std::size_t characteristic = 0;
    Nat o = 0, d = 0;
};

struct RunTrace {
    std::vector<TraceRecord> records;
};

struct Series {
    std::size_t start = 0, end = 0;  // state range [start, end)
    ord::SeriesOrdinal index;
};
std::vector<Series> series_indices(const RunTrace& trace, int m);

struct CorollaryViolation {
    int level;
    std::size_t first, second;  // series positions
};
std::vector<CorollaryViolation> check_series_corollary(const RunTrace& trace, int max_level);

enum class RunStatus { Final, BudgetExceeded };

struct SolveResult {
    RunStatus status = RunStatus::Final;
    SubstState final_state;
    std::vector<std::pair<ETerm, Nat>> witnesses;  // closed epsilon-terms of the last formula
    RunTrace trace;
    std::vector<SubstState> states;  // every S_n, when requested
    Nat max_eps_value = 0;           // over every state of the run
};

struct SolveOptions {
    std::uint64_t budget = kDefaultBudget;  // repair steps
    std::uint64_t work = 10000000;          // witness scans and degree families
    bool keep_states = false;
};

SolveResult solve(const Proof& p, const FunctionRegistry& reg, const SolveOptions& opt = {});

struct Opponent {
    std::string symbol;
    unsigned arity = 0;
    eps::HostFn fn;
};

struct NciResult {
    std::vector<Nat> b;
    SolveResult run;
};

// Binds each function variable to its opponent, solves, and reads off the
// chain of epsilon-terms; the last proof formula is re-checked afterwards.
NciResult nci_extract(const Proof& p, const std::vector<Opponent>& opponents, const std::vector<ETerm>& chain,
                      const FunctionRegistry& reg, const SolveOptions& opt = {});

}  // namespace witness::subst
