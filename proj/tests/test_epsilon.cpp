#include <doctest.h>

#include "corpus.hpp"
#include "witness/error.hpp"
#include "witness/proof.hpp"

using witness::Error;
using witness::Nat;
using namespace witness::eps;

namespace {

bool throws_kind(const std::function<void()>& f, const std::string& kind) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

// Replaces the first occurrence of Zero (left to right) with 0'.
ETerm bump(const ETerm& t, bool& done);
EFormula bump(const EFormula& f, bool& done) {
    if (done) return f;
    switch (f->kind) {
    case FK::Eq: {
        auto l = bump(f->l, done);
        auto r = bump(f->r, done);
        return eq(l, r);
    }
    case FK::Not: return neg(bump(f->a, done));
    case FK::Imp: {
        auto a = bump(f->a, done);
        auto b = bump(f->b, done);
        return imp(a, b);
    }
    }
    return f;
}
ETerm bump(const ETerm& t, bool& done) {
    if (done) return t;
    switch (t->kind) {
    case TK::Zero: done = true; return succ(zero());
    case TK::Var: return t;
    case TK::Succ: return succ(bump(t->args[0], done));
    case TK::Pred: return pred(bump(t->args[0], done));
    case TK::Add: {
        auto a = bump(t->args[0], done);
        return add(a, bump(t->args[1], done));
    }
    case TK::Mul: {
        auto a = bump(t->args[0], done);
        return mul(a, bump(t->args[1], done));
    }
    case TK::Eps: return eps(t->name, bump(t->body, done));
    case TK::FnApp: {
        std::vector<ETerm> args;
        for (const auto& a : t->args) args.push_back(bump(a, done));
        return fn(t->name, args);
    }
    }
    return t;
}

}  // namespace

TEST_CASE("parse examples") {
    auto t = parse_term("(succ 0)");
    CHECK(t->kind == TK::Succ);
    CHECK(t->args[0]->kind == TK::Zero);

    auto e = parse_term("(eps x (= x (succ 0)))");
    REQUIRE(e->kind == TK::Eps);
    CHECK(e->name == "x");
    CHECK(e->body->kind == FK::Eq);
    CHECK(print(e->body->l) == "x");

    auto ex = parse_formula("(exists y (= y (succ 0)))");
    CHECK(print(ex) == print(eq(eps("y", eq(var("y"), numeral(1))), numeral(1))));

    auto all = parse_formula("(forall y (= y y))");
    CHECK(print(all) == "(= (eps y (not (= y y))) (eps y (not (= y y))))");
}

TEST_CASE("parse errors") {
    CHECK(throws_kind([] { parse_term("(foo 0)"); }, "SyntaxError"));
    CHECK(throws_kind([] { parse_term("(succ 0"); }, "SyntaxError"));
    CHECK(throws_kind([] { parse_term("(succ 0 0)"); }, "SyntaxError"));
    CHECK(throws_kind([] { parse_formula("(= (fn f 0) (fn f 0 0))"); }, "ArityError"));
    try {
        parse_formula("(=\n  0 (bogus))");
        FAIL("expected SyntaxError");
    } catch (const Error& err) {
        CHECK(std::string(err.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("round trip on generated terms and formulas") {
    auto terms = corpus::generated_terms(60, corpus::seed());
    auto forms = corpus::generated_formulas(60, corpus::seed());
    for (const auto& t : terms) {
        auto s = print(t);
        CHECK(print(parse_term(s)) == s);
    }
    for (const auto& f : forms) {
        auto s = print(f);
        CHECK(print(parse_formula(s)) == s);
    }
}

TEST_CASE("categories") {
    auto outer = parse_term("(eps x (= (add (succ 0) (eps y (= y (succ (succ 0))))) (eps z (= (succ z) x))))");
    auto c = category_of(outer);
    CHECK(print(c.skeleton) == "(eps x (= _w1 (eps z (= (succ z) x))))");
    CHECK(c.arity == 1);
    CHECK(rank(c) == 2);

    auto own = parse_term("(eps x (= (add (eps y (= y (succ (succ 0)))) x) (succ (succ x))))");
    auto c2 = category_of(own);
    CHECK(alpha_eq(c2.skeleton, own));
    CHECK(c2.arity == 0);
    CHECK(rank(c2) == 2);

    auto simple = parse_term("(eps x (= x (succ 0)))");
    CHECK(category_of(simple).arity == 0);
    CHECK(rank(category_of(simple)) == 1);

    CHECK(throws_kind([] { category_of(parse_term("(succ 0)")); }, "NotAnEpsTerm"));

    // terms differing only in replaced sides share a category
    auto other = parse_term("(eps x (= (mul (succ 0) (eps y (= y 0))) (eps z (= (succ z) x))))");
    CHECK(category_of(other) == c);
    CHECK_FALSE(category_of(simple) == c);

    // idempotent on skeletons
    auto again = category_of(c.skeleton);
    CHECK(again == c);
    CHECK(alpha_eq(again.skeleton, c.skeleton));

    // alpha-variants share a category
    auto renamed = parse_term("(eps u (= (add (succ 0) (eps v (= v (succ (succ 0))))) (eps w (= (succ w) u))))");
    CHECK(category_of(renamed) == c);
}

TEST_CASE("degree and constants") {
    CHECK(degree(zero()) == 0);
    CHECK(degree(numeral(2)) == 2);
    CHECK(degree(add(numeral(1), eps("x", eq(var("x"), numeral(5))))) == 2);
    auto p = parse_proof(corpus::tiny_proof());
    auto k = proof_constants(p);
    CHECK(k.e == 1);
    CHECK(k.g == 1);
    CHECK(k.m == 1);
}

TEST_CASE("enumeration order") {
    auto single = parse_proof("(step (imp (= (succ 0) (succ 0)) (= (eps x (= x (succ 0))) (succ 0))) (III 1 x (= x (succ 0)) (succ 0)))");
    auto cats = enumerate_categories(single);
    REQUIRE(cats.size() == 1);
    CHECK(print(cats[0].skeleton) == "(eps x (= x (succ 0)))");

    auto own = parse_proof(
        "(step (= (eps x (= (add (eps y (= y (succ (succ 0)))) x) (succ (succ x)))) "
        "(eps x (= (add (eps y (= y (succ (succ 0)))) x) (succ (succ x))))) (II 01 (eps x (= (add (eps y (= y (succ (succ 0)))) x) (succ (succ x))))))");
    auto terms = enumerate_eps_terms(own);
    REQUIRE(terms.size() == 2);
    CHECK(print(terms[0]) == "(eps y (= y (succ (succ 0))))");

    // (*) on the nested example: the inner open term's category comes first
    auto nested = parse_proof(corpus::nested_proof());
    auto order = enumerate_categories(nested);
    auto pos = [&](const std::string& s) {
        for (std::size_t i = 0; i < order.size(); ++i)
            if (print(order[i].skeleton) == s) return static_cast<int>(i);
        return -1;
    };
    int inner = pos("(eps z (= (succ z) _w1))");
    int outer = pos("(eps x (= _w1 (eps z (= (succ z) x))))");
    REQUIRE(inner >= 0);
    REQUIRE(outer >= 0);
    CHECK(inner < outer);
}

TEST_CASE("constraint (*) on generated proofs") {
    for (const auto& text : corpus::generated_proofs(25, corpus::seed())) {
        auto p = parse_proof(text);
        auto cats = enumerate_categories(p);
        std::vector<ETerm> all;
        for (const auto& s : p.steps) collect_eps_postorder(s.formula, all);
        for (const auto& E : all) {
            std::vector<ETerm> inner;
            collect_eps_postorder(E->body, inner);
            for (const auto& b : inner) {
                if (!occurs_free(E->name, b)) continue;
                std::size_t ib = cats.size(), iE = cats.size();
                for (std::size_t i = 0; i < cats.size(); ++i) {
                    if (cats[i] == category_of(b)) ib = i;
                    if (cats[i] == category_of(E)) iE = i;
                }
                CHECK(ib < iE);
            }
        }
        CHECK(proof_constants(p).g <= proof_constants(p).e);
    }
}

TEST_CASE("check_proof") {
    FunctionRegistry reg;
    auto ok = parse_proof("(step (= (succ 0) (succ 0)) (II 01 (succ 0)))");
    CHECK(check_proof(ok, reg).empty());

    auto crit = parse_proof(
        "(step (imp (= (succ 0) (succ 0)) (= (eps x (= x (succ 0))) (succ 0))) (III 1 x (= x (succ 0)) (succ 0)))");
    CHECK(check_proof(crit, reg).empty());

    auto later = parse_proof(R"((step (= (eps x (= x (succ 0))) (succ 0)) (mp 2 3))
(step (imp (= (succ 0) (succ 0)) (= (eps x (= x (succ 0))) (succ 0))) (III 1 x (= x (succ 0)) (succ 0)))
(step (= (succ 0) (succ 0)) (II 01 (succ 0)))
)");
    auto errs = check_proof(later, reg);
    REQUIRE_FALSE(errs.empty());
    CHECK(errs[0].index == 0);

    auto open = parse_proof("(step (= x x) (II 01 x))");
    CHECK_FALSE(check_proof(open, reg).empty());

    auto unknown = parse_proof("(step (= 0 0) (user nosuch 0))");
    auto uerr = check_proof(unknown, reg);
    REQUIRE(uerr.size() == 1);
    CHECK(uerr[0].reason.find("UnknownUserAxiom") != std::string::npos);

    auto user = parse_proof(R"((axiom refl (a) (= a a))
(step (= (succ 0) (succ 0)) (user refl (succ 0))))");
    CHECK(check_proof(user, reg).empty());

    auto tiny = parse_proof(corpus::tiny_proof());
    CHECK(check_proof(tiny, reg).empty());
    CHECK(check_proof(parse_proof(corpus::nested_proof()), reg).empty());

    FunctionRegistry withf;
    withf.add("f1", 0, [](const std::vector<Nat>&) { return Nat(0); });
    CHECK(check_proof(parse_proof(corpus::nci_successor_proof()), withf).empty());
}

TEST_CASE("axiom group schemata") {
    FunctionRegistry reg;
    const char* good[] = {
        "(step (imp (= 0 0) (imp (= (succ 0) 0) (= 0 0))) (I 1 (= 0 0) (= (succ 0) 0)))",
        "(step (imp (imp (not (= 0 0)) (not (= (succ 0) 0))) (imp (= (succ 0) 0) (= 0 0))) (I 3 (= 0 0) (= (succ 0) 0)))",
        "(step (imp (= (succ 0) (succ 0)) (= 0 0)) (II 02 0 0))",
        "(step (imp (not (= (succ 0) 0)) (= (pred (succ (succ 0))) (succ 0))) (II 03 (succ 0)))",
        "(step (imp (= 0 (succ 0)) (= (mul 0 0) (mul 0 (succ 0)))) (II 13 0 (succ 0) 0))",
        "(step (imp (= (succ 0) (succ 0)) (not (= (eps x (= x (succ 0))) (succ (succ 0))))) (III 2 x (= x (succ 0)) (succ 0)))",
        "(step (imp (not (= (eps x (= x (succ 0))) (succ 0))) (= (eps x (= x (succ 0))) 0)) (III 3 x (= x (succ 0))))",
        "(step (imp (= (eps z (= z 0)) (eps z (= z (succ 0)))) (= (eps x (= x (eps z (= z 0)))) (eps x (= x (eps z (= z (succ 0))))))) "
        "(III 4 x y (= x y) (eps z (= z 0)) (eps z (= z (succ 0)))))",
    };
    for (const char* g : good) CHECK_MESSAGE(check_proof(parse_proof(g), reg).empty(), g);
    // numerals stay in the skeleton, so these two terms sit in different categories
    auto split = parse_proof("(step (imp (= 0 (succ 0)) (= (eps x (= x 0)) (eps x (= x (succ 0))))) (III 4 x y (= x y) 0 (succ 0)))");
    CHECK_FALSE(check_proof(split, reg).empty());
}

TEST_CASE("mutation testing") {
    FunctionRegistry reg;
    std::vector<std::string> texts = corpus::generated_proofs(20, corpus::seed());
    texts.push_back(corpus::tiny_proof());
    texts.push_back(corpus::nested_proof());
    std::size_t mutants = 0;
    for (const auto& text : texts) {
        auto p = parse_proof(text);
        REQUIRE(check_proof(p, reg).empty());
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            auto q = p;
            bool done = false;
            q.steps[i].formula = bump(q.steps[i].formula, done);
            if (!done) continue;
            ++mutants;
            auto errs = check_proof(q, reg);
            CHECK_FALSE(errs.empty());
            // the printed mutant is rejected as well
            CHECK_FALSE(check_proof(parse_proof(print_proof(q)), reg).empty());
        }
    }
    CHECK(mutants >= 20);
}
