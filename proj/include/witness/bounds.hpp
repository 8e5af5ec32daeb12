#pragma once
#include <functional>
#include <string>
#include <vector>

#include "witness/budget.hpp"
#include "witness/nat.hpp"

namespace witness::bounds {

struct BoundParams {
    unsigned m = 0;  // maximal term degree
    Nat e = 0;       // distinct closed epsilon-terms
    int g = 0;       // categories
};

// The c argument of kappa/tau: a fixed number, or a function of the current n.
struct CParam {
    std::function<Nat(const Nat& n, Budget&)> fn;
    static CParam constant(Nat c) {
        return {[c](const Nat&, Budget&) { return c; }};
    }
    Nat at(const Nat& n, Budget& b) const { return fn(n, b); }
};

// Exact tower functions; all throw Error("BudgetExceeded") when the budget runs out.
Nat phi(unsigned m, const Nat& a, Budget& b);
Nat omega_fn(unsigned m, const Nat& n, Budget& b);
Nat psi(unsigned m, const Nat& n, const Nat& e, Budget& b);
Nat rho(int n, const Nat& e, Budget& b);
Nat lambda_fn(const Nat& a, int p, Budget& b);
Nat kappa_fn(const CParam& c, int p, const Nat& n, const Nat& a, Budget& b);
Nat tau_fn(const CParam& c, int p, const Nat& n, const Nat& a, Budget& b);
Nat born(const BoundParams& params, Budget& b);

// c as the callback n -> psi(m, n, e).
CParam psi_callback(unsigned m, const Nat& e);

struct Oracle {
    std::string name;
    unsigned arity = 0;
    std::function<Nat(const std::vector<Nat>&)> fn;
    bool monotone = false;  // only the diagonal tuple (a,...,a) needs evaluating
};
using OracleSet = std::vector<Oracle>;

// successor, predecessor, addition, multiplication
OracleSet base_oracles();

Nat phi_prime(const OracleSet& o, const Nat& a, unsigned iterations, Budget& b);
Nat omega_prime(const OracleSet& o, unsigned m, const Nat& n, Budget& b);
Nat psi_prime(const OracleSet& o, unsigned m, const Nat& n, const Nat& e, Budget& b);
Nat born_prime(const OracleSet& o, const BoundParams& params, Budget& b);

// Runs f under a fresh budget, turning exhaustion into an empty result.
Budgeted budgeted(std::uint64_t limit, const std::function<Nat(Budget&)>& f);

}  // namespace witness::bounds
