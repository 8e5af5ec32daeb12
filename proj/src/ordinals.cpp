#include "witness/ordinals.hpp"

#include <algorithm>

#include "witness/error.hpp"

namespace witness::ord {

namespace mp = boost::multiprecision;

namespace {

void check_level(int level) {
    if (level < 1) fail("InvalidCode", "ordinal level must be >= 1");
}

std::size_t small_exponent(const Nat& e) {
    if (e > Nat(1) << 24) fail("Overflow", "exponent " + e.str() + " too large to materialize");
    return static_cast<std::size_t>(e);
}

}  // namespace

bool operator==(const OrdinalM& x, const OrdinalM& y) {
    if (x.level != y.level) return false;
    if (x.level == 1) return x.a == y.a && x.b == y.b;
    return x.exponents == y.exponents;
}

Nat nu(const Nat& x) {
    Nat y = x + 1;
    return Nat(mp::lsb(y));
}

Nat theta(const Nat& x) {
    Nat y = x + 1;
    y >>= mp::lsb(y);
    return (y - 1) / 2;
}

std::vector<Nat> bit_exponents(const Nat& x) {
    std::vector<Nat> out;
    if (x == 0) return out;
    for (std::size_t i = mp::msb(x) + 1; i-- > 0;)
        if (mp::bit_test(x, i)) out.emplace_back(i);
    return out;
}

bool less_codes(const Nat& x, const Nat& y, int level) {
    check_level(level);
    if (level == 1) {
        Nat nx = nu(x), ny = nu(y);
        if (nx != ny) return nx < ny;
        return theta(x) < theta(y);
    }
    auto ex = exponents_by_order(x, level - 1);
    auto ey = exponents_by_order(y, level - 1);
    std::size_t n = std::min(ex.size(), ey.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (ex[k] == ey[k]) continue;
        return less_codes(ex[k], ey[k], level - 1);
    }
    return ex.size() < ey.size();
}

std::vector<Nat> exponents_by_order(const Nat& x, int level) {
    auto e = bit_exponents(x);
    std::stable_sort(e.begin(), e.end(),
                     [level](const Nat& u, const Nat& v) { return less_codes(v, u, level); });
    return e;
}

bool less(const CodedOrdinal& x, const CodedOrdinal& y) {
    if (x.level != y.level)
        fail("LevelMismatch", "cannot compare level " + std::to_string(x.level) + " with level " +
                                  std::to_string(y.level));
    return less_codes(x.code, y.code, x.level);
}

Nat eta(const Nat& a, int p) {
    if (a == 0) fail("InvalidCode", "eta is undefined on the empty sum 0");
    auto e = exponents_by_order(a, p);
    return e.front();
}

CodedOrdinal encode(const OrdinalM& o) {
    check_level(o.level);
    if (o.level == 1) {
        std::size_t shift = small_exponent(o.a);
        Nat v = (Nat(2) * o.b + 1) << shift;
        return {1, v - 1};
    }
    Nat code = 0;
    Nat prev;
    bool first = true;
    for (const auto& e : o.exponents) {
        if (e.level != o.level - 1)
            fail("InvalidCode", "exponent level does not match the enclosing level");
        Nat c = encode(e).code;
        if (!first && !less_codes(c, prev, o.level - 1))
            fail("InvalidCode", "exponents are not strictly decreasing");
        code += Nat(1) << small_exponent(c);
        prev = c;
        first = false;
    }
    return {o.level, code};
}

OrdinalM decode(const CodedOrdinal& c) {
    check_level(c.level);
    if (c.level == 1) return OrdinalM::finite_pair(nu(c.code), theta(c.code));
    std::vector<OrdinalM> exps;
    for (const auto& e : exponents_by_order(c.code, c.level - 1))
        exps.push_back(decode({c.level - 1, e}));
    return OrdinalM::sum(c.level, std::move(exps));
}

namespace {

// Drops every term followed later by a strictly larger one: omega^a + omega^b
// equals omega^b when a < b.
std::vector<SeriesOrdinal> normal_form(const std::vector<SeriesOrdinal>& terms) {
    std::vector<SeriesOrdinal> out;
    for (const auto& t : terms) {
        while (!out.empty() && compare_series(out.back(), t) == std::strong_ordering::less)
            out.pop_back();
        out.push_back(t);
    }
    return out;
}

}  // namespace

std::strong_ordering compare_series(const SeriesOrdinal& x, const SeriesOrdinal& y) {
    if (x.level != y.level)
        fail("LevelMismatch", "series indices of different levels");
    if (x.level == 1) {
        if (x.o != y.o) return x.o < y.o ? std::strong_ordering::less : std::strong_ordering::greater;
        if (x.d != y.d) return x.d < y.d ? std::strong_ordering::less : std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    auto nx = normal_form(x.terms);
    auto ny = normal_form(y.terms);
    std::size_t n = std::min(nx.size(), ny.size());
    for (std::size_t k = 0; k < n; ++k) {
        auto c = compare_series(nx[k], ny[k]);
        if (c != std::strong_ordering::equal) return c;
    }
    if (nx.size() == ny.size()) return std::strong_ordering::equal;
    return nx.size() < ny.size() ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::string print_series(const SeriesOrdinal& s) {
    if (s.level == 1) return "w*" + s.o.str() + "+" + s.d.str();
    std::string out = "[";
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        if (i) out += ", ";
        out += print_series(s.terms[i]);
    }
    return out + "]";
}

Nat pr_finite_order_eval(const Unary& g, const Step& h, const Unary& phi, int n, const Nat& m,
                         const Nat& a, Budget& budget) {
    std::vector<Nat> chain;
    Nat cur = m;
    while (cur != 0) {
        budget.charge();
        Nat next = phi(cur);
        if (!less_codes(next, cur, n))
            fail("DescentViolation", "phi(" + cur.str() + ") = " + next.str() + " is not below it");
        chain.push_back(cur);
        cur = next;
    }
    Nat r = g(Nat(0));
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        budget.charge();
        r = h(a, *it, r);
    }
    return r;
}

}  // namespace witness::ord
