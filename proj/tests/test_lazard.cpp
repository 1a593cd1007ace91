#include <doctest.h>

#include <set>

#include "budlaw/lazard.hpp"
#include "oracles.hpp"

using namespace budlaw;
using budlaw::testing::random_element;
using budlaw::testing::random_series;
using budlaw::testing::Rng;

namespace {

TruncPoly T(const Ring& r, unsigned n) { return TruncPoly::variable(r, 1, n, 0); }

TruncPoly m2(const Ring& r, unsigned n, unsigned a, unsigned b, long c)
{
    const unsigned e[] = {a, b};
    return TruncPoly::monomial(r, 2, n, Monomial::from_exponents(e), r.from_int(c));
}

BudLaw random_law(const Ring& r, unsigned n, Rng& rng)
{
    std::vector<Element> tau;
    for (unsigned i = 1; i < n; ++i) tau.push_back(random_element(r, rng));
    return specialize(universal_law(n), tau, r);
}

// A law built without the universal law: extend and add random multiples of C_m.
BudLaw random_law_by_extension(const Ring& r, unsigned n, Rng& rng)
{
    BudLaw X = BudLaw::additive(r, 1);
    for (unsigned m = 2; m <= n; ++m) {
        X = BudLaw::validate(extend_one_degree(X).F() + c_poly(m, r) * random_element(r, rng));
    }
    return X;
}

Element random_unit(const Ring& r, Rng& rng)
{
    for (;;) {
        Element u = random_element(r, rng);
        if (is_unit(u)) return u;
    }
}

TruncPoly random_coordinate(const Ring& r, unsigned n, Rng& rng)
{
    return random_series(r, 1, n, rng, 2) + T(r, n) * random_unit(r, rng);
}

std::vector<Ring> small_rings()
{
    return {Ring::finite_field(2, 1), Ring::finite_field(3, 1), Ring::mod_n(4)};
}

} // namespace

TEST_CASE("lambda, B_m and C_m")
{
    CHECK(lambda_of(4) == 2);
    CHECK(lambda_of(6) == 1);
    CHECK(lambda_of(9) == 3);
    CHECK(lambda_of(2) == 2);
    CHECK(lambda_of(12) == 1);
    CHECK(lambda_of(25) == 5);

    const Ring z = Ring::integers();
    CHECK(c_poly(2, z) == m2(z, 2, 1, 1, 1));
    CHECK(b_poly(2, z) == m2(z, 2, 1, 1, 2));

    const Ring f2 = Ring::finite_field(2, 1);
    CHECK(b_poly(4, f2).is_zero());
    // (4, 6, 4) / 2 = (2, 3, 2), reduced mod 2
    CHECK(c_poly(4, f2) == m2(f2, 4, 2, 2, 1));
}

TEST_CASE("is_spc")
{
    const std::vector<Ring> rings = {Ring::integers(), Ring::finite_field(2, 1),
                                     Ring::finite_field(3, 1), Ring::mod_n(4)};
    for (const Ring& r : rings) {
        for (unsigned m = 2; m <= 12; ++m) CHECK(is_spc(c_poly(m, r), m));
    }
    const Ring z = Ring::integers();
    CHECK_FALSE(is_spc(m2(z, 3, 1, 2, 1), 3));
    CHECK_FALSE(is_spc(m2(z, 3, 1, 1, 1), 3));  // not of degree 3
    // T1^2 T2^2 is symmetric but not a cocycle over Z
    CHECK_FALSE(is_spc(m2(z, 4, 2, 2, 1), 4));

    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const unsigned m = 2 + trial % 9;
        CHECK(is_spc(c_poly(m, z) * random_element(z, rng), m));
    }
}

TEST_CASE("spc_multiplier")
{
    const Ring z = Ring::integers();
    CHECK(spc_multiplier(TruncPoly(z, 2, 4), 4).is_zero());
    CHECK(spc_multiplier(c_poly(4, z) * z.from_int(5L), 4) == z.from_int(5L));

    Rng rng(17);
    const std::vector<Ring> rings = {z, Ring::finite_field(2, 1), Ring::finite_field(3, 1),
                                     Ring::mod_n(4), Ring::param_poly(z, {"a", "b"}),
                                     Ring::finite_field(3, 2)};
    for (const Ring& r : rings) {
        for (unsigned m = 2; m <= 12; ++m) {
            for (int trial = 0; trial < 5; ++trial) {
                const Element a = random_element(r, rng);
                CHECK(spc_multiplier(c_poly(m, r, 12) * a, m) == a);
            }
        }
    }
    try {
        (void)spc_multiplier(m2(z, 3, 1, 2, 1), 3);
        FAIL("expected NotMultipleOfC");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotMultipleOfC);
    }
}

TEST_CASE("extend_one_degree examples")
{
    const Ring z = Ring::integers();
    for (unsigned n = 1; n < 7; ++n) {
        CHECK(extend_one_degree(BudLaw::additive(z, n)) == BudLaw::additive(z, n + 1));
    }
    const Ring zt = Ring::param_poly(z, {"t1"});
    const TruncPoly x = TruncPoly::variable(zt, 2, 2, 0), y = TruncPoly::variable(zt, 2, 2, 1);
    const BudLaw X = BudLaw::validate(x + y + x * y * zt.param(0));
    const BudLaw E = extend_one_degree(X);
    CHECK(E.n() == 3);
    CHECK(E.F() == X.F().lifted(3));

    Rng rng(5);
    for (const Ring& r : small_rings()) {
        for (unsigned n = 1; n <= 7; ++n) {
            const BudLaw Y = random_law(r, n, rng);
            CHECK(truncate_law(extend_one_degree(Y), n) == Y);
        }
    }
}

TEST_CASE("corrected defect equals delta minus the coboundary")
{
    Rng rng(8);
    for (const Ring& r : {Ring::integers(), Ring::finite_field(3, 1), Ring::mod_n(9)}) {
        for (unsigned n = 2; n <= 6; ++n) {
            const BudLaw X = random_law(r, n, rng);
            const unsigned N = n + 1;
            const TruncPoly delta = assoc_defect(X.F());
            TruncPoly gamma(r, 2, N);
            for (unsigned a = 1; 2 * a <= N; ++a) {
                const Element c = random_element(r, rng);
                gamma += m2(r, N, a, N - a, 1) * c;
                if (2 * a != N) gamma += m2(r, N, N - a, a, 1) * c;
            }
            const TruncPoly G = X.F().lifted(N) + gamma;
            const TruncPoly x = TruncPoly::variable(r, 3, N, 0),
                            y = TruncPoly::variable(r, 3, N, 1),
                            z = TruncPoly::variable(r, 3, N, 2);
            const TruncPoly d = substitute(G, {substitute(G, {x, y}), z}) -
                                substitute(G, {x, substitute(G, {y, z})});
            CHECK(d.homogeneous_part(N) == delta - coboundary(gamma));
        }
    }
}

TEST_CASE("universal law examples")
{
    const UniversalLaw& U2 = universal_law(2);
    CHECK(U2.law.F().to_string() == "T1 + T2 + t1*T1*T2");
    CHECK(universal_law(3).law.F().to_string() ==
          "T1 + T2 + t1*T1*T2 + t2*T1^2*T2 + t2*T1*T2^2");
    CHECK(universal_law(1).law.F().to_string() == "T1 + T2");
}

TEST_CASE("universal law: shift identity and truncation coherence")
{
    for (unsigned n = 2; n <= 8; ++n) {
        const UniversalLaw& U = universal_law(n);
        auto names = U.law.ring().params();
        names.push_back("s");
        const Ring big = Ring::param_poly(Ring::integers(), names);
        std::vector<Element> vals;
        for (std::size_t i = 0; i + 1 < n; ++i) vals.push_back(big.param(i));
        vals.back() += big.param(n - 1);
        const TruncPoly base = map_coefficients(U.law.F(), RingHom::canonical(U.law.ring(), big));
        const TruncPoly shifted =
            map_coefficients(U.law.F(), RingHom::specialization(U.law.ring(), vals, big));
        CHECK((shifted - base) == c_poly(n, big, n) * big.param(n - 1));

        for (unsigned m = 1; m <= n; ++m) {
            const UniversalLaw& Um = universal_law(m);
            // canonical_map fails if a parameter t_i with i >= m survives.
            const TruncPoly low = map_coefficients(truncate_law(U.law, m).F(),
                                                   RingHom::canonical(U.law.ring(), Um.law.ring()));
            CHECK(low == Um.law.F());
        }
    }
}

TEST_CASE("classify examples and round trips")
{
    const Ring z = Ring::integers();
    const auto add = classify(BudLaw::additive(z, 4));
    REQUIRE(add.size() == 3);
    for (const auto& t : add) CHECK(t.is_zero());
    const auto mult = classify(BudLaw::multiplicative(z, 2));
    REQUIRE(mult.size() == 1);
    CHECK(mult[0] == z.from_int(1L));

    Rng rng(31);
    const Ring f3 = Ring::finite_field(3, 1);
    for (unsigned n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 4; ++trial) {
            const BudLaw X = random_law_by_extension(f3, n, rng);
            CHECK(specialize(universal_law(n), classify(X), f3) == X);
        }
    }
    for (const Ring& r : {Ring::mod_n(4), Ring::finite_field(2, 2), Ring::integers()}) {
        const BudLaw X = random_law_by_extension(r, 6, rng);
        CHECK(specialize(universal_law(6), classify(X), r) == X);
    }
}

TEST_CASE("corepresentability against brute force")
{
    const std::vector<std::pair<Ring, unsigned>> grid = {
        {Ring::finite_field(2, 1), 2}, {Ring::finite_field(2, 1), 3},
        {Ring::finite_field(3, 1), 2}};
    for (const auto& [r, n] : grid) {
        const auto laws = budlaw::testing::all_bud_laws(r, n);
        std::uint64_t expect = 1;
        for (unsigned i = 1; i < n; ++i) expect *= r.field_size();
        CHECK(laws.size() == expect);
        std::set<std::vector<std::uint64_t>> tuples;
        for (const auto& F : laws) {
            const BudLaw X = BudLaw::validate(F);
            const auto tau = classify(X);
            std::vector<std::uint64_t> key;
            for (const auto& t : tau) key.push_back(t.field_index());
            tuples.insert(key);
            CHECK(specialize(universal_law(n), tau, r) == X);
        }
        CHECK(tuples.size() == expect);
    }
}

TEST_CASE("perturbation and truncation of the defect")
{
    Rng rng(77);
    for (const Ring& r : small_rings()) {
        for (int trial = 0; trial < 20; ++trial) {
            const unsigned n = 3 + trial % 6;
            const unsigned m = 2 + trial % (n - 1);
            const BudLaw X = random_law(r, n, rng);
            const BudLaw Y = random_law(r, n, rng);
            const TruncPoly f = random_series(r, 1, n, rng);
            const Element a = random_element(r, rng);
            const TruncPoly g =
                f + TruncPoly::monomial(r, 1, n, Monomial::power(0, m), a);
            CHECK(defect(g, X, Y).homogeneous_part(m) ==
                  defect(f, X, Y).homogeneous_part(m) + b_poly(m, r, n) * a);

            // A homomorphism through degree m-1 has an SPC defect in degree m.
            const TruncPoly u = random_coordinate(r, n, rng);
            const BudLaw Z = conjugate(X, u);
            const TruncPoly h =
                u + random_series(r, 1, n, rng, m);
            const TruncPoly dm = defect(h, X, Z).homogeneous_part(m);
            CHECK(defect(h, X, Z).min_degree() >= m);
            CHECK(is_spc(dm.truncated(m), m));
            CHECK_NOTHROW(spc_multiplier(dm, m));
        }
    }
}

TEST_CASE("[k] difference and commutator identities")
{
    Rng rng(123);
    for (const Ring& r : small_rings()) {
        for (int trial = 0; trial < 20; ++trial) {
            const unsigned m = 2 + trial % 7;
            const unsigned long k = 1 + trial % 6;
            const BudLaw G = random_law(r, m, rng);
            const Element a = random_element(r, rng);
            const BudLaw F = BudLaw::validate(G.F() + c_poly(m, r) * a);
            mpz_class km;
            mpz_ui_pow_ui(km.get_mpz_t(), k, m);
            const mpz_class coef = (km - k) / lambda_of(m);
            const TruncPoly tm = TruncPoly::monomial(r, 1, m, Monomial::power(0, m), r.one());
            CHECK(m_series(F, k).f() == m_series(G, k).f() + tm * scale(a, coef));

            // f a homomorphism through m-1 with defect a' C_m in degree m
            const BudLaw X = random_law(r, m, rng);
            const TruncPoly u = random_coordinate(r, m, rng);
            const BudLaw Y = conjugate(X, u);
            const TruncPoly f = u + tm * random_element(r, rng);
            const Element ap = spc_multiplier(defect(f, X, Y), m);
            const TruncPoly lhs = substitute(f, {m_series(X, k).f()});
            const TruncPoly rhs = substitute(m_series(Y, k).f(), {f});
            CHECK(lhs == rhs + tm * scale(ap, coef));
        }
    }
}

TEST_CASE("universal height >= h law")
{
    {
        const auto r = universal_height_ge(2, 1, 2);
        REQUIRE(r.steps.size() == 1);
        CHECK(r.steps[0].coefficient == "t1");
        CHECK(r.steps[0].scalar.is_one());
        CHECK(r.steps[0].ok);
    }
    {
        const auto r = universal_height_ge(2, 2, 4);
        REQUIRE(r.steps.size() == 2);
        CHECK(r.steps[0].ok);
        CHECK(r.steps[1].param == 3);
        CHECK(r.steps[1].scalar.is_one());  // 2^3 - 1 = 7 = 1 mod 2
        CHECK(r.steps[1].ok);
        CHECK(r.lower_vanish);
        CHECK(r.law.ring().params() == std::vector<std::string>{"t2", "t3"});
        const auto h = height(r.law, 2);
        const bool low = std::holds_alternative<Height>(h) && std::get<Height>(h).h < 2;
        CHECK_FALSE(low);
    }
    {
        const auto r = universal_height_ge(3, 1, 3);
        REQUIRE(r.steps.size() == 1);
        CHECK(r.steps[0].scalar == Ring::finite_field(3, 1).from_int(-1L));
        CHECK(r.steps[0].ok);
    }
    CHECK_THROWS_AS(universal_height_ge(2, 2, 3), Error);
}
