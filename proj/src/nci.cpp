#include "witness/error.hpp"
#include "witness/subst.hpp"

namespace witness::subst {

NciResult nci_extract(const Proof& p, const std::vector<Opponent>& opponents, const std::vector<ETerm>& chain,
                      const FunctionRegistry& reg, const SolveOptions& opt) {
    FunctionRegistry bound = reg;
    for (const auto& o : opponents) {
        auto it = p.functions.find(o.symbol);
        if (it == p.functions.end())
            fail("ArityError", "opponent for '" + o.symbol + "' but the proof has no such function variable");
        if (it->second != o.arity)
            fail("ArityError", "opponent for '" + o.symbol + "' has arity " + std::to_string(o.arity) +
                                   ", the proof uses arity " + std::to_string(it->second));
        bound.add(o.symbol, o.arity, o.fn);
    }
    NciResult out;
    out.run = solve(p, bound, opt);
    if (out.run.status == RunStatus::BudgetExceeded)
        fail("BudgetExceeded", "substitution run did not finish within " + std::to_string(opt.budget) + " steps");
    Evaluator ev(bound);
    for (const auto& t : chain) out.b.push_back(ev.term(t, out.run.final_state));
    if (!p.steps.empty() && !ev.formula(p.steps.back().formula, out.run.final_state))
        fail("MatrixFalse", "the concluding formula is false under the final substitution");
    return out;
}

}  // namespace witness::subst
