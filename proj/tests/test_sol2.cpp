#include <doctest.h>

#include <fstream>
#include <sstream>

#include "witness/error.hpp"
#include "witness/sol2.hpp"

using namespace witness::sol2;
namespace kam = witness::kam;
namespace eps = witness::eps;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(WITNESS_TEST_DATA) + "/" + name);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Judgment check_text(const std::string& text) {
    return check_derivation(parse_derivation(text), builtin_registry());
}

Judgment check_file(const std::string& name) { return check_text(slurp(name)); }

// Replaces the n-th line (1-based, counting only non-comment lines) of a script.
std::string mutate(const std::string& text, int n, const std::string& replacement) {
    std::istringstream in(text);
    std::string line, out;
    int k = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != ';' && ++k == n) line = replacement;
        out += line + "\n";
    }
    return out;
}

}  // namespace

TEST_CASE("formula syntax") {
    auto f = parse_so("(forall x (imp (P x) (Q (succ x) 0)))");
    CHECK(alpha_eq(parse_so(print(f)), f));
    CHECK(print(bot()) == "bot");
    CHECK(print(parse_so("(= x 0)")) == "(= x 0)");
    CHECK(print(parse_so("(Int (succ 0))")).rfind("(Int ", 0) == 0);
    CHECK(alpha_eq(parse_so("(forallP X 0 X)"), bot()));
    CHECK(alpha_eq(parse_so("(forall x (P x))"), parse_so("(forall z (P z))")));
    CHECK_FALSE(alpha_eq(parse_so("(forall x (P x y))"), parse_so("(forall y (P y y))")));
    CHECK(alpha_eq(parse_so("(= 2 x)"), equal(eps::numeral(2), eps::var("x"))));
    CHECK_THROWS_AS(parse_so("(imp A)"), witness::Error);
    CHECK_THROWS_AS(parse_so("(forallP X k A)"), witness::Error);
    CHECK_THROWS_AS(parse_so("(P (eps x (= x 0)))"), witness::Error);
}

TEST_CASE("defined connectives expand to the core") {
    auto A = pred_app("A"), B = pred_app("B");
    CHECK(alpha_key(conj(A, B)) == alpha_key(parse_so("(forallP Y 0 (imp (imp A (imp B Y)) Y))")));
    CHECK(alpha_key(disj(A, B)) == alpha_key(parse_so("(forallP Y 0 (imp (imp A Y) (imp (imp B Y) Y)))")));
    CHECK(alpha_eq(parse_so("(exists x (P x))"), parse_so("(imp (forall x (imp (P x) bot)) bot)")));
    CHECK(alpha_eq(parse_so("(= a b)"), parse_so("(forallP Z 1 (imp (Z a) (Z b)))")));
    CHECK(alpha_eq(int_of(eps::var("y")),
                   parse_so("(forallP X 1 (imp (forall z (imp (X z) (X (succ z)))) (imp (X 0) (X y))))")));
    // the connective's own predicate variable must not capture the operands
    auto c = conj(pred_app("X"), B);
    CHECK(free_vars(c).pred == std::set<std::string>{"B", "X"});
}

TEST_CASE("substitution avoids capture") {
    auto f = parse_so("(forall y (P x y))");
    auto g = substitute(f, "x", eps::var("y"));
    CHECK(free_vars(g).ind == std::set<std::string>{"y"});
    CHECK(alpha_eq(g, parse_so("(forall z (P y z))")));

    auto body = parse_so("(forall y (X y))");
    auto h = substitute_pred(body, "X", {"u"}, parse_so("(Q u y)"));
    CHECK(alpha_eq(h, parse_so("(forall z (Q z y))")));

    auto k = substitute_pred(parse_so("(forallP Y 0 (imp (X a) Y))"), "X", {"u"}, parse_so("(imp (P u) Y)"));
    CHECK(free_vars(k).pred.count("Y") == 1);
    CHECK(alpha_eq(k, parse_so("(forallP W 0 (imp (imp (P a) Y) W))")));

    CHECK(alpha_eq(substitute_pred(parse_so("(forallP X 1 (X a))"), "X", {"u"}, parse_so("Q")),
                   parse_so("(forallP X 1 (X a))")));
    CHECK_THROWS_AS(substitute_pred(parse_so("(X a b)"), "X", {"u"}, parse_so("Q")), witness::Error);
}

TEST_CASE("relativization") {
    CHECK(alpha_eq(relativize(parse_so("(X t)")), parse_so("(X t)")));
    CHECK(alpha_eq(relativize(parse_so("(forall x (P x))")), parse_so("(forall x (imp (Int x) (P x)))")));
    auto pi2 = relativize(parse_so("(forall x (exists y (= (fn f x y) 0)))"));
    auto want = parse_so("(forall x (imp (Int x) (imp (forall y (imp (Int y) (imp (= (fn f x y) 0) bot))) bot)))");
    CHECK(alpha_eq(pi2, want));
    CHECK(alpha_eq(relativize(parse_so("(forallP X 1 (imp (X 0) (forall x (X x))))")),
                   parse_so("(forallP X 1 (imp (X 0) (forall x (imp (Int x) (X x)))))")));

    // without first-order quantifiers relativization is the identity, hence idempotent
    for (const char* s : {"(imp A B)", "(and A (or B bot))", "(= a b)", "(forallP X 2 (imp (X a b) (X b a)))"}) {
        auto f = parse_so(s);
        CHECK(alpha_eq(relativize(f), f));
        CHECK(alpha_eq(relativize(relativize(f)), relativize(f)));
    }
    // commutes with the connectives built on second-order quantifiers
    auto A = parse_so("(forall x (P x))"), B = parse_so("(forall y (imp (Q y) R))");
    CHECK(alpha_eq(relativize(conj(A, B)), conj(relativize(A), relativize(B))));
    CHECK(alpha_eq(relativize(disj(A, B)), disj(relativize(A), relativize(B))));
    CHECK(alpha_eq(relativize(neg(A)), neg(relativize(A))));
    CHECK(alpha_eq(relativize(exists_pred("P", 1, A)), exists_pred("P", 1, relativize(A))));
}

TEST_CASE("realizer registry") {
    auto all = builtin_realizers();
    CHECK(all.size() >= 10);
    for (const auto& r : all) {
        CHECK(is_closed(r.formula));
        CHECK(continuation_free(r.term));
        CHECK(r.term->free.empty());
    }
    auto reg = builtin_registry();
    const auto* s0 = reg.find("succ_nonzero");
    REQUIRE(s0);
    CHECK(alpha_eq(s0->formula, parse_so("(not (= (succ 0) 0))")));
    CHECK(kam::print(s0->term) == "(lam x (app x (lam x x)))");
    CHECK(kam::alpha_equal(reg.find("succ_injective")->term, kam::identity()));

    reg.register_axiom_realizer("plus0", parse_so("(forall x (= (add x 0) x))"), kam::identity());
    CHECK(reg.find("plus0"));
    CHECK_THROWS_AS(reg.register_axiom_realizer("plus0", bot(), kam::identity()), witness::Error);
    CHECK_FALSE(continuation_free(kam::cont(kam::make_stack({}))));

    auto leaf = check_derivation(parse_derivation("(axiom plus0)"), reg);
    CHECK(kam::alpha_equal(leaf.term, kam::identity()));
    try {
        check_text("(axiom plus0)");
        FAIL("unregistered leaf accepted");
    } catch (const witness::Error& e) {
        CHECK(e.kind() == "DerivationError");
    }
}

TEST_CASE("int realizers compute") {
    auto reg = builtin_registry();
    for (const char* id : {"int_succ", "int_add", "int_mul"}) REQUIRE(reg.find(id));
    auto s = reg.find("int_succ")->term;
    auto a = reg.find("int_add")->term;
    auto m = reg.find("int_mul")->term;
    for (unsigned x = 0; x < 6; ++x) {
        CHECK(kam::readback(kam::app(s, kam::church(x)), 100000) == witness::Nat(x + 1));
        for (unsigned y = 0; y < 6; ++y) {
            CHECK(kam::readback(kam::app(kam::app(a, kam::church(x)), kam::church(y)), 100000) == witness::Nat(x + y));
            CHECK(kam::readback(kam::app(kam::app(m, kam::church(x)), kam::church(y)), 100000) == witness::Nat(x * y));
        }
    }
}

TEST_CASE("checker accepts the corpus") {
    struct Case {
        const char* file;
        const char* formula;
        const char* term;
    };
    const Case cases[] = {
        {"identity.drv", "(imp A A)", "(lam a a)"},
        {"peirce.drv", "(imp (imp (imp A B) A) A)", "(lam h (app cc h))"},
        {"poly_id.drv", "(forallP X 0 (imp X X))", "(lam a a)"},
        {"and_intro.drv", "(imp A (imp B (and A B)))", "(lam (a b f) (app f a b))"},
        {"and_elim.drv", "(imp (and A B) A)", "(lam p (app p (lam (a b) a)))"},
        {"or_intro.drv", "(imp A (or A B))", "(lam (a l r) (app l a))"},
        {"or_elim.drv", "(imp (or A B) (imp (imp A C) (imp (imp B C) C)))", "(lam (d f g) (app d f g))"},
        {"bot_elim.drv", "(imp bot A)", "(lam b b)"},
        {"id_proof.drv", "(forall x (imp (Int x) (imp (forall y (imp (Int y) (not (= (fn eq x y) 0)))) bot)))",
         "(lam (n h) (app h n (lam z z)))"},
        {"sigma_zero.drv", "(not (forall x (imp (Int x) (not (forall y (imp (Int y) (= (fn fst x y) 0)))))))",
         "(lam k (app k (church 0) (lam (y z) z)))"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.file);
        auto j = check_file(c.file);
        CHECK(j.context.empty());
        CHECK(alpha_eq(j.formula, parse_so(c.formula)));
        CHECK(kam::alpha_equal(j.term, kam::parse_lterm(c.term)));
        // checking twice rebuilds the same term
        CHECK(kam::alpha_equal(check_file(c.file).term, j.term));
    }
    auto two = check_file("two_rounds.drv");
    CHECK(alpha_eq(two.formula,
                   relativize(parse_so("(exists x1 (forall y1 (exists x2 (forall y2 (= (fn m2 x1 x2 y1 y2) 0)))))"))));
    CHECK(kam::alpha_equal(two.term,
                           kam::parse_lterm("(lam k (app k (church 0) (lam (y1 k2) (app k2 y1 (lam (y2 z) z)))))")));
    CHECK(alpha_eq(check_file("id_proof.drv").formula,
                   relativize(parse_so("(forall x (exists y (= (fn eq x y) 0)))"))));
}

TEST_CASE("open judgments keep their context") {
    auto j = check_text("(hyp a A)\n(hyp b B)\n(rule 1 a)\n(rule 3 1 b)\n");
    REQUIRE(j.context.size() == 1);
    CHECK(j.context[0].first == "a");
    CHECK(alpha_eq(j.formula, parse_so("(imp B A)")));
}

TEST_CASE("true equations are leaves") {
    auto j = check_text("(equation (= (add (succ 0) (succ 0)) 2))");
    CHECK(kam::alpha_equal(j.term, kam::identity()));
    CHECK_THROWS_AS(check_text("(equation (= 1 2))"), witness::Error);
    CHECK_THROWS_AS(check_text("(equation (= x x))"), witness::Error);
    CHECK_THROWS_AS(check_text("(equation (imp A A))"), witness::Error);
    eps::FunctionRegistry reg;
    reg.add("dbl", 1, [](const std::vector<witness::Nat>& v) { return v[0] * 2; });
    auto d = check_derivation(parse_derivation("(equation (= (fn dbl 3) 6))"), builtin_registry(), &reg);
    CHECK(kam::alpha_equal(d.term, kam::identity()));
}

TEST_CASE("single-step mutations are rejected") {
    struct M {
        const char* file;
        int line;
        const char* replacement;
    };
    const M mutations[] = {
        {"and_intro.drv", 6, "(rule 2 2 1)"},     // premise swap
        {"or_elim.drv", 7, "(rule 2 3 2)"},       // premise swap
        {"id_proof.drv", 10, "(rule 2 6 4)"},     // premise swap
        {"poly_id.drv", 3, "(rule 6 1 X)"},       // X free in the open hypothesis
        {"id_proof.drv", 13, "(rule 5 8 x)"},     // x free in hypothesis n
        {"two_rounds.drv", 18, "(rule 5 11 y1)"}, // y1 free in hypothesis y1
        {"or_intro.drv", 9, "(rule 6 3 X)"},      // X free in hypothesis l
        {"id_proof.drv", 5, "(rule 7 1 (succ x))"},
        {"id_proof.drv", 9, "(rule 7 5 0)"},
        {"and_elim.drv", 5, "(rule 8 1 (x) A)"},
        {"peirce.drv", 3, "(rule 2 1 1)"},
        {"bot_elim.drv", 3, "(rule 7 1 A)"},
        {"and_intro.drv", 12, "(rule 3 8 q)"},
        {"sigma_zero.drv", 6, "(rule 7 1 (succ 0))"},
        {"peirce.drv", 4, "(rule 4 2)"},
    };
    int rejected = 0;
    for (const auto& m : mutations) {
        CAPTURE(m.file);
        CAPTURE(m.replacement);
        auto text = mutate(slurp(m.file), m.line, m.replacement);
        REQUIRE(text != slurp(m.file));
        try {
            check_text(text);
        } catch (const witness::Error& e) {
            CHECK(e.kind() == "DerivationError");
            ++rejected;
            continue;
        }
        FAIL("mutation accepted");
    }
    CHECK(rejected >= 10);
}

TEST_CASE("eigenvariable side condition") {
    auto text = "(hyp a (P x))\n(rule 1 a)\n(rule 5 1 x)\n";
    try {
        check_text(text);
        FAIL("accepted");
    } catch (const witness::Error& e) {
        CHECK(std::string(e.what()).find("eigenvariable") != std::string::npos);
    }
    auto ok = check_text("(hyp a (P x))\n(rule 1 a)\n(rule 3 1 a)\n(rule 5 2 x)\n");
    CHECK(alpha_eq(ok.formula, parse_so("(forall x (imp (P x) (P x)))")));
    CHECK_THROWS_AS(check_text("(hyp a (P x))\n(hyp a (P y))\n(rule 1 a)\n"), witness::Error);
    CHECK_THROWS_AS(check_text("(rule 9 1)"), witness::Error);
    CHECK_THROWS_AS(check_text("(hyp a A)\n(rule 1 a)\n(rule 2 1 5)\n"), witness::Error);
}
