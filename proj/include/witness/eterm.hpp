#pragma once
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "witness/nat.hpp"
#include "witness/sexp.hpp"

namespace witness::eps {

struct TermNode;
struct FormulaNode;
using ETerm = std::shared_ptr<const TermNode>;
using EFormula = std::shared_ptr<const FormulaNode>;

enum class TK { Zero, Var, Succ, Pred, Add, Mul, Eps, FnApp };
enum class FK { Eq, Not, Imp };

struct TermNode {
    TK kind;
    std::string name;  // variable, bound variable of Eps, or function symbol
    std::vector<ETerm> args;
    EFormula body;  // Eps only
};

struct FormulaNode {
    FK kind;
    ETerm l, r;      // Eq
    EFormula a, b;   // Not uses a; Imp uses a, b
};

ETerm zero();
ETerm var(const std::string& name);
ETerm succ(ETerm t);
ETerm pred(ETerm t);
ETerm add(ETerm a, ETerm b);
ETerm mul(ETerm a, ETerm b);
ETerm eps(const std::string& x, EFormula body);
ETerm fn(const std::string& f, std::vector<ETerm> args);
ETerm numeral(std::uint64_t n);
EFormula eq(ETerm l, ETerm r);
EFormula neg(EFormula a);
EFormula imp(EFormula a, EFormula b);

std::string print(const ETerm& t);
std::string print(const EFormula& f);

// Arity bookkeeping shared by a parse session: a symbol keeps the arity of
// its first use or declaration.
struct ParseContext {
    std::map<std::string, unsigned> arity;
    void note_arity(const std::string& f, unsigned k, const Sexp& at);
};

ETerm parse_term(const std::string& text);
EFormula parse_formula(const std::string& text);
ETerm parse_term(const Sexp& s, ParseContext& ctx);
EFormula parse_formula(const Sexp& s, ParseContext& ctx);
bool is_identifier(const std::string& atom);

std::set<std::string> free_vars(const ETerm& t);
std::set<std::string> free_vars(const EFormula& f);
bool is_closed(const ETerm& t);
bool is_closed(const EFormula& f);
bool occurs_free(const std::string& x, const ETerm& t);
bool occurs_free(const std::string& x, const EFormula& f);
bool contains_eps(const ETerm& t);

// Capture-avoiding substitution of u for the free occurrences of x.
ETerm substitute(const ETerm& t, const std::string& x, const ETerm& u);
EFormula substitute(const EFormula& f, const std::string& x, const ETerm& u);
// Simultaneous substitution.
EFormula substitute(const EFormula& f, const std::map<std::string, ETerm>& s);

// Print with bound variables renamed canonically; equal keys iff alpha-equivalent.
std::string alpha_key(const ETerm& t);
std::string alpha_key(const EFormula& f);
bool alpha_eq(const EFormula& a, const EFormula& b);
bool alpha_eq(const ETerm& a, const ETerm& b);

// Height counting successor, predecessor, addition, multiplication and
// function-application nodes; 0, variables and epsilon-terms count 0.
unsigned degree(const ETerm& t);
unsigned max_degree(const EFormula& f);

// Every epsilon-subterm, children before parents, in left-to-right order.
void collect_eps_postorder(const EFormula& f, std::vector<ETerm>& out);
void collect_eps_postorder(const ETerm& t, std::vector<ETerm>& out);

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

}  // namespace witness::eps
