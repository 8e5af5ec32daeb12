#include "corpus.hpp"

#include <cstdlib>
#include <random>

using namespace witness::eps;

namespace corpus {

std::string tiny_proof() {
    return R"((step (= (succ 0) (succ 0)) (II 01 (succ 0)))
(step (imp (= (succ 0) (succ 0)) (= (eps x (= x (succ 0))) (succ 0))) (III 1 x (= x (succ 0)) (succ 0)))
(step (= (eps x (= x (succ 0))) (succ 0)) (mp 2 1))
)";
}

namespace {

std::string line(const EFormula& f, const std::string& just) { return "(step " + print(f) + " " + just + ")\n"; }

std::string critical(const std::string& x, const EFormula& A, const ETerm& a) {
    auto f = imp(substitute(A, x, a), substitute(A, x, eps(x, A)));
    return line(f, "(III 1 " + x + " " + print(A) + " " + print(a) + ")");
}

}  // namespace

std::string nested_proof() {
    // e_y(y=0''), the open e_z(z'=x) and the outer term of the category example
    ETerm ey = eps("y", eq(var("y"), numeral(2)));
    EFormula inner = eq(succ(var("z")), ey);
    EFormula outer = eq(add(numeral(1), ey), eps("z", eq(succ(var("z")), var("x"))));
    std::string out;
    out += critical("x", outer, numeral(2));
    out += critical("z", inner, numeral(1));
    out += critical("y", eq(var("y"), numeral(2)), numeral(2));
    out += critical("x", outer, numeral(4));
    return out;
}

std::string nci_successor_proof() {
    return R"((function f1 0)
(step (= (succ (fn f1)) (succ (fn f1))) (II 01 (succ (fn f1))))
(step (imp (= (succ (fn f1)) (succ (fn f1))) (= (eps y (= y (succ (fn f1)))) (succ (fn f1)))) (III 1 y (= y (succ (fn f1))) (succ (fn f1))))
(step (= (eps y (= y (succ (fn f1)))) (succ (fn f1))) (mp 2 1))
)";
}

std::string nci_identity_proof() {
    return R"((function f1 0)
(step (= (fn f1) (fn f1)) (II 01 (fn f1)))
(step (imp (= (fn f1) (fn f1)) (= (eps y (= y (fn f1))) (fn f1))) (III 1 y (= y (fn f1)) (fn f1)))
(step (= (eps y (= y (fn f1))) (fn f1)) (mp 2 1))
)";
}

std::uint64_t seed() {
    if (const char* s = std::getenv("WITNESS_SEED")) return std::strtoull(s, nullptr, 10);
    return 20240611;
}

namespace {

// Body templates A(x, w) with a single parameter side w.
EFormula body(int shape, const std::string& x, const ETerm& w, std::uint64_t k) {
    switch (shape) {
    case 0: return eq(var(x), w);
    case 1: return eq(add(var(x), numeral(k)), w);
    case 2: return neg(eq(var(x), w));
    case 3: return eq(succ(var(x)), w);
    default: return imp(eq(w, numeral(k)), eq(var(x), numeral(k + 1)));
    }
}

// A term a with A(a) true whenever A has any witness.
ETerm guided(int shape, const ETerm& w, std::uint64_t k) {
    switch (shape) {
    case 0: return w;
    case 1: {
        ETerm a = w;
        for (std::uint64_t i = 0; i < k; ++i) a = pred(a);
        return a;
    }
    case 2: return succ(w);
    case 3: return pred(w);
    default: return numeral(k + 1);
    }
}

ETerm side_of(const ETerm& e, int shape, std::uint64_t k) {
    switch (shape) {
    case 0: return e;
    case 1: return succ(e);
    default: return add(e, numeral(k));
    }
}

}  // namespace

std::vector<std::string> generated_proofs(std::size_t count, std::uint64_t s) {
    std::mt19937_64 rng(s);
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
    std::vector<std::string> out;
    static const char* names[] = {"x", "y", "z"};
    while (out.size() < count) {
        int depth = 1 + pick(3);
        std::vector<std::string> lines;
        ETerm prev;
        for (int level = 0; level < depth; ++level) {
            std::string x = names[level];
            std::uint64_t k = static_cast<std::uint64_t>(pick(4));
            ETerm w = level == 0 ? numeral(static_cast<std::uint64_t>(1 + pick(6)))
                                 : side_of(prev, pick(3), static_cast<std::uint64_t>(pick(3)));
            int shape = pick(5);
            EFormula A = body(shape, x, w, k);
            lines.push_back(critical(x, A, guided(shape, w, k)));
            if (pick(2)) lines.push_back(critical(x, A, numeral(static_cast<std::uint64_t>(pick(11)))));
            prev = eps(x, A);
        }
        for (std::size_t i = lines.size(); i > 1; --i) std::swap(lines[i - 1], lines[rng() % i]);
        std::string text;
        for (const auto& l : lines) text += l;
        out.push_back(text);
    }
    return out;
}

namespace {

struct Gen {
    std::mt19937_64 rng;
    int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

    ETerm term(int depth, std::vector<std::string>& scope) {
        if (depth == 0 || pick(4) == 0) {
            if (!scope.empty() && pick(2)) return var(scope[static_cast<std::size_t>(pick(static_cast<int>(scope.size())))]);
            return pick(3) ? zero() : var("u");
        }
        switch (pick(7)) {
        case 0: return succ(term(depth - 1, scope));
        case 1: return pred(term(depth - 1, scope));
        case 2: return add(term(depth - 1, scope), term(depth - 1, scope));
        case 3: return mul(term(depth - 1, scope), term(depth - 1, scope));
        case 4: {
            std::vector<ETerm> args;
            int k = pick(3);
            for (int i = 0; i < k; ++i) args.push_back(term(depth - 1, scope));
            return fn("g" + std::to_string(k), args);
        }
        default: {
            std::string x = "v" + std::to_string(scope.size());
            scope.push_back(x);
            auto b = formula(depth - 1, scope);
            scope.pop_back();
            return eps(x, b);
        }
        }
    }

    EFormula formula(int depth, std::vector<std::string>& scope) {
        if (depth == 0) return eq(term(0, scope), term(0, scope));
        switch (pick(3)) {
        case 0: return eq(term(depth - 1, scope), term(depth - 1, scope));
        case 1: return neg(formula(depth - 1, scope));
        default: return imp(formula(depth - 1, scope), formula(depth - 1, scope));
        }
    }
};

}  // namespace

std::vector<ETerm> generated_terms(std::size_t count, std::uint64_t s) {
    Gen g{std::mt19937_64(s)};
    std::vector<ETerm> out;
    std::vector<std::string> scope;
    for (std::size_t i = 0; i < count; ++i) out.push_back(g.term(4, scope));
    return out;
}

std::vector<EFormula> generated_formulas(std::size_t count, std::uint64_t s) {
    Gen g{std::mt19937_64(s + 1)};
    std::vector<EFormula> out;
    std::vector<std::string> scope;
    for (std::size_t i = 0; i < count; ++i) out.push_back(g.formula(4, scope));
    return out;
}

}  // namespace corpus
