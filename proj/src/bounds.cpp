#include "witness/bounds.hpp"

#include "witness/error.hpp"
#include "witness/ordinals.hpp"

namespace witness::bounds {

namespace mp = boost::multiprecision;

namespace {

Nat pow2(const Nat& e, Budget& b) {
    if (e / 64 + 1 > Nat(b.remaining())) b.charge(b.remaining() + 1);
    std::uint64_t small = static_cast<std::uint64_t>(e);
    b.charge(1 + small / 64);
    return Nat(1) << small;
}

Nat mul(const Nat& x, const Nat& y, Budget& b) {
    std::uint64_t lx = limbs(x), ly = limbs(y);
    if (lx > b.remaining() / ly) b.charge(b.remaining() + 1);
    b.charge(lx * ly);
    Nat r = x * y;
    b.charge_nat(r);
    return r;
}

}  // namespace

Budgeted budgeted(std::uint64_t limit, const std::function<Nat(Budget&)>& f) {
    Budget b(limit);
    try {
        Nat v = f(b);
        return {v, b.used()};
    } catch (const Error& e) {
        if (e.kind() != "BudgetExceeded") throw;
        return {std::nullopt, b.used()};
    }
}

Nat phi(unsigned m, const Nat& a, Budget& b) {
    Nat r = a;
    for (unsigned i = 0; i < m; ++i) r = mul(r, r, b) + 1;
    return r;
}

Nat omega_fn(unsigned m, const Nat& n, Budget& b) {
    Nat r = phi(m, 0, b);
    for (Nat i = 0; i < n; ++i) {
        b.charge();
        r = phi(m, r, b);
    }
    return r;
}

Nat psi(unsigned m, const Nat& n, const Nat& e, Budget& b) {
    Nat w = omega_fn(m, n, b);
    return pow2(mul(w + 1, e, b), b);
}

Nat rho(int n, const Nat& e, Budget& b) {
    if (n < 1) fail("InvalidArgument", "rho is defined for n >= 1");
    Nat r = pow2(e + 1, b) - 1;
    for (int i = 1; i < n; ++i) r = pow2(r, b) - 1;
    return r;
}

Nat lambda_fn(const Nat& a, int p, Budget& b) {
    if (p < 1) fail("InvalidCode", "lambda needs level >= 1");
    b.charge();
    if (p == 1) return 1;
    if (a == 0) return 0;
    b.charge(limbs(a));
    Nat sum = 0;
    for (const auto& e : ord::bit_exponents(a)) sum += lambda_fn(e, p - 1, b);
    return sum;
}

CParam psi_callback(unsigned m, const Nat& e) {
    return {[m, e](const Nat& n, Budget& b) { return psi(m, n, e, b); }};
}

namespace {

Nat kappa_raw(const CParam& c, int p, Nat n, Nat a, Budget& b) {
    Nat prefix = 0;
    for (;;) {
        b.charge();
        if (a == 0) return prefix;
        if (p == 1) {
            Nat v = ord::nu(a), t = ord::theta(a);
            if (t != 0) return prefix + (((2 * t - 1) << static_cast<std::size_t>(v)) - 1);
            Nat cv = c.at(n, b);
            b.charge_nat(cv);
            return prefix + (((2 * cv + 1) << static_cast<std::size_t>(v - 1)) - 1);
        }
        if (mp::bit_test(a, 0)) return prefix + (a - 1);
        if ((a & (a - 1)) == 0) {
            Nat a1 = Nat(mp::msb(a));
            return prefix + tau_fn(c, p - 1, n, kappa_fn(c, p - 1, n, a1, b), b);
        }
        Nat a1 = ord::eta(a, p - 1);
        Nat head = pow2(a1, b);
        prefix += head;
        n += lambda_fn(a1, p - 1, b);
        a -= head;
    }
}

}  // namespace

Nat kappa_fn(const CParam& c, int p, const Nat& n, const Nat& a, Budget& b) {
    if (p < 1) fail("InvalidCode", "kappa needs level >= 1");
    Nat r = kappa_raw(c, p, n, a, b);
    if (a != 0 && !ord::less_codes(r, a, p))
        fail("ContractViolation", "kappa(" + std::to_string(p) + ", " + a.str() + ") = " + r.str() +
                                      " is not below its argument");
    return r;
}

Nat tau_fn(const CParam& c, int p, const Nat& n, const Nat& a, Budget& b) {
    Nat result = 0;
    Nat cur_n = n, cur_a = a;
    while (cur_a != 0) {
        result += pow2(cur_a, b);
        b.charge(limbs(result));
        cur_n += lambda_fn(cur_a, p, b);
        cur_a = kappa_fn(c, p, cur_n, cur_a, b);
    }
    return result;
}

Nat born(const BoundParams& params, Budget& b) {
    // omega(0, n) = 0 for every n, so the count of substitutions is irrelevant.
    if (params.m == 0) return 0;
    Nat start = rho(params.g, params.e, b);
    Nat t = tau_fn(psi_callback(params.m, params.e), params.g, 1, start, b);
    Nat count = lambda_fn(t, params.g + 1, b);
    return omega_fn(params.m, count, b);
}

OracleSet base_oracles() {
    return {
        {"succ", 1, [](const std::vector<Nat>& x) { return x[0] + 1; }, true},
        {"pred", 1, [](const std::vector<Nat>& x) { return x[0] == 0 ? Nat(0) : Nat(x[0] - 1); }, true},
        {"add", 2, [](const std::vector<Nat>& x) { return x[0] + x[1]; }, true},
        {"mul", 2, [](const std::vector<Nat>& x) { return x[0] * x[1]; }, true},
    };
}

namespace {

Nat phi_prime_base(const OracleSet& oracles, const Nat& a, Budget& b) {
    Nat best = 0;
    for (const auto& o : oracles) {
        if (o.monotone || o.arity == 0) {
            b.charge();
            Nat v = o.fn(std::vector<Nat>(o.arity, a));
            if (v > best) best = v;
            continue;
        }
        std::vector<Nat> args(o.arity, 0);
        for (;;) {
            b.charge();
            Nat v = o.fn(args);
            if (v > best) best = v;
            std::size_t i = 0;
            while (i < args.size() && args[i] == a) args[i++] = 0;
            if (i == args.size()) break;
            args[i] += 1;
        }
    }
    return best;
}

}  // namespace

Nat phi_prime(const OracleSet& o, const Nat& a, unsigned iterations, Budget& b) {
    Nat r = a;
    for (unsigned i = 0; i < iterations; ++i) r = phi_prime_base(o, r, b);
    return r;
}

Nat omega_prime(const OracleSet& o, unsigned m, const Nat& n, Budget& b) {
    Nat r = phi_prime(o, 0, m, b);
    for (Nat i = 0; i < n; ++i) {
        b.charge();
        r = phi_prime(o, r, m, b);
    }
    return r;
}

Nat psi_prime(const OracleSet& o, unsigned m, const Nat& n, const Nat& e, Budget& b) {
    Nat w = omega_prime(o, m, n, b);
    return pow2(mul(w + 1, e, b), b);
}

Nat born_prime(const OracleSet& o, const BoundParams& params, Budget& b) {
    if (params.m == 0) return 0;
    CParam c{[o, params](const Nat& n, Budget& bb) { return psi_prime(o, params.m, n, params.e, bb); }};
    Nat start = rho(params.g, params.e, b);
    Nat t = tau_fn(c, params.g, 1, start, b);
    Nat count = lambda_fn(t, params.g + 1, b);
    return omega_prime(o, params.m, count, b);
}

}  // namespace witness::bounds
