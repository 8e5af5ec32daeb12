#pragma once
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "witness/eterm.hpp"

namespace witness::eps {

// Canonical skeleton of an epsilon-term: each side of an equation in the body
// that does not mention the bound variable, and does mention an epsilon-term
// or a free variable, becomes a placeholder _w1, _w2, ... in traversal order.
struct Category {
    ETerm skeleton;
    unsigned arity = 0;
    std::string key;  // alpha-invariant identity
};
bool operator==(const Category& a, const Category& b);

struct EpsSplit {
    Category category;
    std::vector<ETerm> args;  // the replaced sides, matching _w1.._wk
};

EpsSplit split_eps(const ETerm& t);
Category category_of(const ETerm& t);
unsigned rank(const Category& c);
std::string placeholder(unsigned i);  // 1-based

using HostFn = std::function<Nat(const std::vector<Nat>&)>;

struct FunctionRegistry {
    struct Entry {
        unsigned arity;
        HostFn fn;
    };
    std::map<std::string, Entry> entries;
    void add(const std::string& name, unsigned arity, HostFn f);
    const Entry* find(const std::string& name) const;
};

enum class JustKind { AxiomI, AxiomII, Critical, UserAxiom, MP };

struct Justification {
    JustKind kind = JustKind::MP;
    int scheme = 0;                  // I.n, II.nn, III.n
    std::string x, y;                // bound variables for III
    std::vector<EFormula> formulas;  // I: A B [C]; III: A
    std::vector<ETerm> terms;        // II / III / user instantiation
    std::string user_id;
    std::size_t imp = 0, ant = 0;    // MP premises, 0-based
};

struct ProofStep {
    EFormula formula;
    Justification just;
    int line = 0;
};

struct UserAxiom {
    std::string id;
    std::vector<std::string> vars;
    EFormula formula;
};

struct Proof {
    std::map<std::string, unsigned> functions;
    std::map<std::string, UserAxiom> axioms;
    std::vector<ProofStep> steps;
};

Proof parse_proof(const std::string& text);
std::string print_proof(const Proof& p);

// The formula a justification licenses, or nullopt for MP (depends on premises).
EFormula schema_instance(const Justification& j, const Proof& p);

// For a III.1 step: the epsilon-term E = eps x A it repairs.
ETerm critical_term(const Justification& j);

struct StepError {
    std::size_t index;  // 0-based
    std::string reason;
};
std::vector<StepError> check_proof(const Proof& p, const FunctionRegistry& reg);

std::vector<Category> enumerate_categories(const Proof& p);
std::vector<ETerm> enumerate_eps_terms(const Proof& p);

struct ProofConstants {
    unsigned m = 0;
    std::size_t e = 0;
    std::size_t g = 0;
};
ProofConstants proof_constants(const Proof& p);

}  // namespace witness::eps
