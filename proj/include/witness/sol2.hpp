#pragma once
// Second-order classical arithmetic: formulas, the typing-rule checker for
// lambda-c terms, axiom realizers and Int-relativization.
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "witness/eterm.hpp"
#include "witness/kam.hpp"
#include "witness/proof.hpp"
#include "witness/sexp.hpp"

namespace witness::sol2 {

using eps::ETerm;

struct SONode;
using SOFormula = std::shared_ptr<const SONode>;

enum class SK { PredApp, Imp, ForallInd, ForallPred };

struct SONode {
    SK kind;
    std::string name;         // predicate variable, or bound variable
    std::vector<ETerm> args;  // PredApp
    unsigned arity = 0;       // ForallPred
    SOFormula l, r;           // Imp uses l, r; quantifiers keep the body in l
};

SOFormula pred_app(const std::string& X, std::vector<ETerm> args = {});
SOFormula imp(SOFormula a, SOFormula b);
SOFormula forall_ind(const std::string& x, SOFormula body);
SOFormula forall_pred(const std::string& X, unsigned arity, SOFormula body);

// Defined connectives, expanded on construction.
SOFormula bot();
SOFormula neg(SOFormula a);
SOFormula conj(SOFormula a, SOFormula b);
SOFormula disj(SOFormula a, SOFormula b);
SOFormula exists_ind(const std::string& x, SOFormula body);
SOFormula exists_pred(const std::string& X, unsigned arity, SOFormula body);
SOFormula equal(ETerm a, ETerm b);
SOFormula int_of(ETerm t);

struct FreeVars {
    std::set<std::string> ind;
    std::set<std::string> pred;
};
FreeVars free_vars(const SOFormula& f);
bool is_closed(const SOFormula& f);

// Capture-avoiding substitution of a term for an individual variable.
SOFormula substitute(const SOFormula& f, const std::string& x, const ETerm& t);
// A[phi(x1..xn) / X x1..xn]: every X(t1..tn) becomes phi[t1..tn / x1..xn].
SOFormula substitute_pred(const SOFormula& f, const std::string& X, const std::vector<std::string>& params,
                          const SOFormula& phi);

std::string alpha_key(const SOFormula& f);
bool alpha_eq(const SOFormula& a, const SOFormula& b);

std::string print(const SOFormula& f);
SOFormula parse_so(const std::string& text);
SOFormula parse_so(const Sexp& s);
// First-order term; decimal literals are accepted as numerals.
ETerm parse_fo(const Sexp& s);

// If f is the expansion of a = b, returns (a, b).
std::optional<std::pair<ETerm, ETerm>> match_equal(const SOFormula& f);

SOFormula relativize(const SOFormula& f);

struct AxiomRealizer {
    std::string id;
    SOFormula formula;
    kam::LTerm term;
    std::string note;
};

class RealizerRegistry {
public:
    RealizerRegistry() = default;
    std::string register_axiom_realizer(const std::string& id, SOFormula formula, kam::LTerm term,
                                        std::string note = "user");
    const AxiomRealizer* find(const std::string& id) const;
    const std::vector<AxiomRealizer>& all() const { return list_; }

private:
    std::vector<AxiomRealizer> list_;
    std::map<std::string, std::size_t> index_;
};

std::vector<AxiomRealizer> builtin_realizers();
RealizerRegistry builtin_registry();
bool continuation_free(const kam::LTerm& t);

// Church-numeral arithmetic used by the Int realizers.
kam::LTerm add_term();
kam::LTerm mul_term();

struct Judgment {
    std::vector<std::pair<std::string, SOFormula>> context;  // hypotheses the term depends on
    kam::LTerm term;
    SOFormula formula;
};

struct Derivation {
    std::vector<Sexp> lines;
};

Derivation parse_derivation(const std::string& text);

// Checks every line and returns the judgment of the last rule or axiom line.
// Domain functions named in true-equation leaves are evaluated through reg.
Judgment check_derivation(const Derivation& d, const RealizerRegistry& realizers,
                          const eps::FunctionRegistry* reg = nullptr);

// Ground-truth value of a closed first-order term.
std::optional<Nat> evaluate_closed(const ETerm& t, const eps::FunctionRegistry* reg);

}  // namespace witness::sol2
