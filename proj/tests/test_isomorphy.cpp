#include <doctest.h>

#include "budlaw/honda.hpp"
#include "budlaw/isomorphy.hpp"
#include "budlaw/lazard.hpp"
#include "oracles.hpp"

using namespace budlaw;
using budlaw::testing::random_element;
using budlaw::testing::Rng;

namespace {

TruncPoly T(const Ring& r, unsigned n) { return TruncPoly::variable(r, 1, n, 0); }

TruncPoly random_coordinate(const Ring& r, unsigned n, Rng& rng)
{
    TruncPoly f(r, 1, n);
    Element u = r.zero();
    while (u.is_zero()) u = random_element(r, rng);
    f += TruncPoly::monomial(r, 1, n, Monomial::power(0, 1), u);
    for (unsigned d = 2; d <= n; ++d) {
        f += TruncPoly::monomial(r, 1, n, Monomial::power(0, d), random_element(r, rng));
    }
    return f;
}

void check_found(const IsoResult& r, const BudLaw& X, const BudLaw& Y)
{
    REQUIRE(std::holds_alternative<IsoFound>(r));
    const IsoFound& f = std::get<IsoFound>(r);
    CHECK(!f.f.f().coefficient(1u).is_zero());
    CHECK(f.f.source() == X);
    CHECK(f.f.target() == Y);
    CHECK(conjugate(X, f.f.f()) == Y);
}

// The Honda law with every degree-d coefficient scaled by v^(-(d-1)/(p^h-1)):
// over F_p this is lambda*H(T1/lambda, T2/lambda) for lambda^(p^h-1) = v.
BudLaw twisted_honda(std::uint64_t p, unsigned h, unsigned n, long v)
{
    const HondaLaw H = honda_law(p, h, n);
    const Ring& r = H.law.ring();
    std::uint64_t e = 1;
    for (unsigned i = 0; i < h; ++i) e *= p;
    e -= 1;
    const Element vinv = *inverse(r.from_int(v));
    std::vector<Term> terms;
    for (const Term& t : H.law.F().terms()) {
        const unsigned d = t.mono.degree();
        REQUIRE((d - 1) % e == 0);
        terms.push_back({t.mono, t.coeff * pow(vinv, static_cast<unsigned long>((d - 1) / e))});
    }
    return BudLaw::validate(TruncPoly::from_terms(r, 2, n, std::move(terms)));
}

} // namespace

TEST_CASE("find_iso: a law is isomorphic to itself by T")
{
    const HondaLaw H = honda_law(2, 1, 4);
    const IsoResult r = find_iso(H.law, H.law, H.law.ring());
    check_found(r, H.law, H.law);
    CHECK(std::get<IsoFound>(r).f.f() == T(H.law.ring(), 4));
}

TEST_CASE("find_iso: multiplicative and Honda height 1")
{
    for (std::uint64_t p : {2u, 3u}) {
        const Ring Fp = Ring::finite_field(p, 1);
        for (unsigned n = 1; n <= p * p; ++n) {
            CAPTURE(p);
            CAPTURE(n);
            const BudLaw M = BudLaw::multiplicative(Fp, n);
            const BudLaw H = honda_law(p, 1, n).law;
            check_found(find_iso(M, H, Fp), M, H);
        }
    }
}

TEST_CASE("find_iso: additive and multiplicative are not isomorphic")
{
    const Ring F2 = Ring::finite_field(2, 1);
    const IsoResult r = find_iso(BudLaw::additive(F2, 2), BudLaw::multiplicative(F2, 2), F2);
    CHECK(std::holds_alternative<IsoNotFoundOverBase>(r));
    // not even over a bigger field
    const Ring F8 = Ring::finite_field(2, 3);
    CHECK(std::holds_alternative<IsoNotFoundOverBase>(
        find_iso(BudLaw::additive(F2, 4), BudLaw::multiplicative(F2, 4), F8)));
}

TEST_CASE("find_iso: symmetric in outcome")
{
    Rng rng(7);
    const Ring F3 = Ring::finite_field(3, 1);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Element> tau;
        for (unsigned i = 1; i < 4; ++i) tau.push_back(random_element(F3, rng));
        std::vector<Element> sigma;
        for (unsigned i = 1; i < 4; ++i) sigma.push_back(random_element(F3, rng));
        const BudLaw X = specialize(universal_law(4), tau, F3);
        const BudLaw Y = specialize(universal_law(4), sigma, F3);
        const IsoResult a = find_iso(X, Y, F3), b = find_iso(Y, X, F3);
        CHECK(a.index() == b.index());
        if (auto* f = std::get_if<IsoFound>(&a)) {
            CHECK(hom_check(compositional_inverse(f->f.f()), Y, X));
        }
    }
}

TEST_CASE("find_iso: first witness in coefficient order")
{
    // isomorphisms X -> X are the automorphisms; the first is T
    const HondaLaw H = honda_law(2, 2, 8);
    const Ring F4 = Ring::finite_field(2, 2);
    const BudLaw X = honda_over(H, F4);
    const IsoResult r = find_iso(X, X, F4);
    CHECK(std::get<IsoFound>(r).f.f() == T(F4, 8));
}

TEST_CASE("find_iso: rejects mismatched orders and non-fields")
{
    const Ring F2 = Ring::finite_field(2, 1);
    CHECK_THROWS_AS(find_iso(BudLaw::additive(F2, 2), BudLaw::additive(F2, 3), F2), Error);
    CHECK_THROWS_AS(find_iso(BudLaw::additive(Ring::integers(), 2), BudLaw::additive(Ring::integers(), 2),
                             Ring::integers()),
                    Error);
}

TEST_CASE("trivialize: the Honda law and its conjugates")
{
    const HondaLaw H = honda_law(2, 1, 4);
    {
        const IsoResult r = trivialize_height_h(H.law, 1);
        REQUIRE(std::holds_alternative<IsoFound>(r));
        CHECK(std::get<IsoFound>(r).degree == 1);
        CHECK(std::get<IsoFound>(r).f.f() == T(H.law.ring(), 4));
    }
    const Ring F4 = Ring::finite_field(2, 2);
    const Element x = F4.field_generator();
    const TruncPoly g = T(F4, 4) + TruncPoly::monomial(F4, 1, 4, Monomial::power(0, 2), x);
    const BudLaw X = conjugate(honda_over(H, F4), g);
    const IsoResult r = trivialize_height_h(X, 1);
    REQUIRE(std::holds_alternative<IsoFound>(r));
    CHECK(std::get<IsoFound>(r).degree == 1);
    check_found(r, X, honda_over(H, F4));
}

TEST_CASE("trivialize: a twist that needs a quadratic extension")
{
    // [3] = 2T^3 here, and 2 is not a square in F_3
    const BudLaw X = twisted_honda(3, 1, 9, 2);
    CHECK(std::holds_alternative<IsoFailed>(trivialize_height_h(X, 1, 1)));
    const IsoResult r = trivialize_height_h(X, 1);
    REQUIRE(std::holds_alternative<IsoFound>(r));
    const IsoFound& f = std::get<IsoFound>(r);
    CHECK(f.degree == 2);
    CHECK(f.field.field_size() == 9);
    const Element a = f.f.f().coefficient(1u);
    CHECK(pow(a, 2ul) == *inverse(f.field.from_int(2)));
}

TEST_CASE("trivialize: random conjugates stay within p^h")
{
    Rng rng(2024);
    const std::tuple<std::uint64_t, unsigned, unsigned, unsigned> cases[] = {
        {2, 1, 4, 2}, {2, 2, 8, 2}, {3, 1, 9, 2}};
    for (auto [p, h, n, k] : cases) {
        const Ring F = Ring::finite_field(p, k);
        const BudLaw H = honda_over(honda_law(p, h, n), F);
        for (int trial = 0; trial < 5; ++trial) {
            const BudLaw X = conjugate(H, random_coordinate(F, n, rng));
            const IsoResult r = trivialize_height_h(X, h);
            REQUIRE(std::holds_alternative<IsoFound>(r));
            CHECK(std::get<IsoFound>(r).degree <= p);
        }
    }
}

TEST_CASE("trivialize: height mismatch")
{
    const Ring F2 = Ring::finite_field(2, 1);
    CHECK_THROWS_AS(trivialize_height_h(honda_law(2, 1, 4).law, 2), Error);
    try {
        trivialize_height_h(BudLaw::additive(F2, 4), 1);
        FAIL("expected HeightMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HeightMismatch);
    }
}

TEST_CASE("log: additive and multiplicative laws")
{
    const Ring Q = Ring::rationals();
    CHECK(log_to_additive(BudLaw::additive(Q, 5)).f() == T(Q, 5));
    const TruncPoly f = log_to_additive(BudLaw::multiplicative(Q, 4)).f();
    CHECK(f.coefficient(1u) == Q.from_rational(mpq_class(1)));
    CHECK(f.coefficient(2u) == Q.from_rational(mpq_class(-1, 2)));
    CHECK(f.coefficient(3u) == Q.from_rational(mpq_class(1, 3)));
    CHECK(f.coefficient(4u) == Q.from_rational(mpq_class(-1, 4)));
}

TEST_CASE("log: recovers the Honda logarithm")
{
    for (auto [p, h, n] : {std::tuple{2u, 1u, 8u}, std::tuple{3u, 1u, 9u}, std::tuple{2u, 2u, 8u}}) {
        const HondaLaw H = honda_law(p, h, n);
        CHECK(log_to_additive(H.rational).f() == H.log);
    }
}

TEST_CASE("log: over a parameter ring and uniqueness")
{
    const Ring R = Ring::param_poly(Ring::rationals(), {"t1", "t2", "t3"});
    const BudLaw U = specialize(universal_law(4), {R.param(0), R.param(1), R.param(2)}, R);
    const Endo f = log_to_additive(U);
    CHECK(f.f().coefficient(1u).is_one());
    const BudLaw A = BudLaw::additive(R, 4);
    for (unsigned d = 2; d <= 4; ++d) {
        const TruncPoly g = f.f() + TruncPoly::monomial(R, 1, 4, Monomial::power(0, d), R.one());
        CHECK_FALSE(hom_check(g, U, A));
    }
}

TEST_CASE("log: needs a Q-algebra")
{
    try {
        log_to_additive(BudLaw::multiplicative(Ring::integers(), 3));
        FAIL("expected NotQAlgebra");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotQAlgebra);
    }
}
