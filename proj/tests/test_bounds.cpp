#include <doctest.h>

#include "witness/bounds.hpp"
#include "witness/error.hpp"
#include "witness/ordinals.hpp"

using namespace witness;
using namespace witness::bounds;

namespace {
Nat run(const std::function<Nat(Budget&)>& f, std::uint64_t limit = 1000000) {
    auto r = budgeted(limit, f);
    REQUIRE(r.ok());
    return *r.value;
}
}  // namespace

TEST_CASE("tower identities") {
    for (int a = 0; a < 100; ++a) CHECK(run([&](Budget& b) { return phi(0, a, b); }) == a);
    CHECK(run([](Budget& b) { return phi(1, 3, b); }) == 10);
    CHECK(run([](Budget& b) { return omega_fn(1, 1, b); }) == 2);
    CHECK(run([](Budget& b) { return psi(1, 0, 1, b); }) == 4);
    CHECK(run([](Budget& b) { return rho(1, 1, b); }) == 3);
    CHECK(run([](Budget& b) { return rho(2, 1, b); }) == 7);
    CHECK(run([](Budget& b) { return lambda_fn(8 + 1, 2, b); }) == 2);
    CHECK(run([](Budget& b) { return tau_fn(CParam::constant(0), 1, 1, 1, b); }) == 2);
}

TEST_CASE("kappa cases") {
    auto k = [](Nat c, int p, Nat n, Nat a) {
        return run([&](Budget& b) { return kappa_fn(CParam::constant(c), p, n, a, b); });
    };
    CHECK(k(9, 1, 4, 0) == 0);
    CHECK(k(9, 2, 4, 0) == 0);
    // 5 = 2^1 (2*1+1) - 1: predecessor clause gives 2^1 (2*1-1) - 1
    CHECK(k(9, 1, 0, 5) == 1);
    // 3 = 2^2 (2*0+1) - 1: limit clause gives 2^1 (2c+1) - 1
    CHECK(k(0, 1, 0, 3) == 1);
    CHECK(k(2, 1, 0, 3) == 9);
    // successor at level 2 drops the omega^0 term
    CHECK(k(0, 2, 0, 8 + 1) == 8);
    // single power 2^1 at level 2: tau one level down of kappa(1) = 0
    CHECK(k(0, 2, 0, 2) == 0);
}

TEST_CASE("psi callback makes c depend on n") {
    auto c = psi_callback(1, 1);
    Budget b(100000);
    CHECK(c.at(0, b) == 4);
    CHECK(c.at(1, b) == 8);
    CHECK(run([&](Budget& bb) { return kappa_fn(c, 1, 0, 3, bb); }) == 4 * 4 + 1);
}

TEST_CASE("kappa descent and eta of tau") {
    int samples = 0, tau_checked = 0;
    for (int p = 1; p <= 2; ++p)
        for (int a = 0; a <= 32; ++a)
            for (int c : {0, 1, 3})
                for (int n : {0, 1, 5}) {
                    ++samples;
                    CParam cp = CParam::constant(c);
                    Nat kv = run([&](Budget& b) { return kappa_fn(cp, p, n, a, b); });
                    if (a != 0) CHECK(ord::less_codes(kv, a, p));
                    if (a == 0) continue;
                    auto t = budgeted(200000, [&](Budget& b) { return tau_fn(cp, p, n, a, b); });
                    if (!t.ok()) continue;
                    ++tau_checked;
                    CHECK(ord::eta(*t.value, p) == a);
                }
    CHECK(samples >= 200);
    CHECK(tau_checked >= 100);
}

TEST_CASE("monotonicity on small ranges") {
    for (int x = 0; x < 6; ++x) {
        CHECK(run([&](Budget& b) { return phi(2, x, b); }) < run([&](Budget& b) { return phi(2, x + 1, b); }));
        CHECK(run([&](Budget& b) { return omega_fn(1, x, b); }) <
              run([&](Budget& b) { return omega_fn(1, x + 1, b); }));
        CHECK(run([&](Budget& b) { return psi(1, x % 3, 2, b); }) <
              run([&](Budget& b) { return psi(1, x % 3 + 1, 2, b); }));
    }
    for (int n = 1; n < 3; ++n)
        CHECK(run([&](Budget& b) { return rho(n, 1, b); }) < run([&](Budget& b) { return rho(n + 1, 1, b); }));
}

TEST_CASE("born") {
    for (int e = 1; e < 4; ++e)
        for (int g = 1; g < 3; ++g) CHECK(run([&](Budget& b) { return born({0, e, g}, b); }) == 0);
    auto r = budgeted(1000, [](Budget& b) { return born({1, 1, 1}, b); });
    if (r.ok()) CHECK(*r.value >= 1);
    else CHECK(r.work > 1000);
}

TEST_CASE("budget exhaustion is reported, not thrown") {
    auto r = budgeted(50, [](Budget& b) { return omega_fn(3, 40, b); });
    CHECK_FALSE(r.ok());
    CHECK_THROWS_AS(rho(0, 1, *std::make_unique<Budget>(10)), Error);
}

TEST_CASE("primed tower") {
    OracleSet succ{{"succ", 1, [](const std::vector<Nat>& x) { return x[0] + 1; }, false}};
    CHECK(run([&](Budget& b) { return phi_prime(succ, 3, 1, b); }) == 4);
    OracleSet zero{{"z", 2, [](const std::vector<Nat>&) { return Nat(0); }, false}};
    for (int a = 0; a < 5; ++a) CHECK(run([&](Budget& b) { return phi_prime(zero, a, 1, b); }) == 0);
    OracleSet nci{succ[0], {"f1", 0, [](const std::vector<Nat>&) { return Nat(4); }, false}};
    CHECK(run([&](Budget& b) { return omega_prime(nci, 2, 0, b); }) == 5);
    CHECK(run([&](Budget& b) { return psi_prime(nci, 2, 0, 1, b); }) == 64);
}

TEST_CASE("base-language primed tower sits between a+n and phi") {
    auto base = base_oracles();
    for (int a = 0; a < 6; ++a)
        for (unsigned n = 1; n < 4; ++n) {
            Nat p = run([&](Budget& b) { return phi_prime(base, a, n, b); });
            CHECK(p >= a + n);
            CHECK(p <= run([&](Budget& b) { return phi(n, a, b); }));
        }
}
