#pragma once
#include <compare>
#include <functional>
#include <vector>

#include "witness/budget.hpp"
#include "witness/nat.hpp"

namespace witness::ord {

// Structured ordinal of type m. Level 1: omega*a + b. Level m+1: a strictly
// decreasing list of level-m exponents, read as omega^e1 + ... + omega^ek.
struct OrdinalM {
    int level = 1;
    Nat a = 0, b = 0;
    std::vector<OrdinalM> exponents;

    static OrdinalM finite_pair(const Nat& a, const Nat& b) { return {1, a, b, {}}; }
    static OrdinalM sum(int level, std::vector<OrdinalM> exps) { return {level, 0, 0, std::move(exps)}; }
};
bool operator==(const OrdinalM& x, const OrdinalM& y);

struct CodedOrdinal {
    int level = 1;
    Nat code = 0;
};

CodedOrdinal encode(const OrdinalM& o);
OrdinalM decode(const CodedOrdinal& c);

// The order <_m on codes of the same level.
bool less(const CodedOrdinal& x, const CodedOrdinal& y);
bool less_codes(const Nat& x, const Nat& y, int level);

// x + 1 = 2^nu (2 theta + 1)
Nat nu(const Nat& x);
Nat theta(const Nat& x);

// Binary exponents of x, largest numeric value first.
std::vector<Nat> bit_exponents(const Nat& x);
// Binary exponents of x sorted decreasingly under <_level.
std::vector<Nat> exponents_by_order(const Nat& x, int level);
// The <_p-largest exponent of a level-(p+1) code.
Nat eta(const Nat& a, int p);

// Index of a run segment: level 1 holds (o, d), meaning omega*o + d; level
// m+1 holds the constituent level-m indices in run order.
struct SeriesOrdinal {
    int level = 1;
    Nat o = 0, d = 0;
    std::vector<SeriesOrdinal> terms;
};
std::strong_ordering compare_series(const SeriesOrdinal& x, const SeriesOrdinal& y);
std::string print_series(const SeriesOrdinal& s);

// f(0,a) = g(0); f(m,a) = h(a, m, f(phi(m), a)), checking phi(m) <_n m at
// every unfolding.
using Unary = std::function<Nat(const Nat&)>;
using Step = std::function<Nat(const Nat& a, const Nat& m, const Nat& rec)>;
Nat pr_finite_order_eval(const Unary& g, const Step& h, const Unary& phi, int n, const Nat& m,
                         const Nat& a, Budget& budget);

}  // namespace witness::ord
