#include "budlaw/budlaw.hpp"

#include <fmt/format.h>

namespace budlaw {

namespace {

TruncPoly var(const Ring& r, unsigned vars, unsigned bound, unsigned i)
{
    return TruncPoly::variable(r, vars, bound, i);
}

std::vector<unsigned> witness_of(const TruncPoly& diff)
{
    return diff.terms().front().mono.exponents(diff.vars());
}

std::string mono_text(const std::vector<unsigned>& e)
{
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += fmt::format("T{}", i + 1);
        if (e[i] > 1) s += fmt::format("^{}", e[i]);
    }
    return s.empty() ? "1" : s;
}

Error axiom_error(ErrorKind kind, const char* what, std::vector<unsigned> w)
{
    const std::string text = mono_text(w);
    return Error(kind, fmt::format("{} fails at {}", what, text), std::move(w));
}

TruncPoly one_var(const TruncPoly& f, unsigned slot, unsigned vars)
{
    const unsigned s[] = {slot};
    return relabel_vars(f, vars, s);
}

} // namespace

std::optional<Error> axiom_violation(const TruncPoly& F)
{
    if (F.vars() != 2) return Error(ErrorKind::ShapeMismatch, "a law has two variables");
    const Ring& r = F.ring();
    const unsigned n = F.bound();
    if (n < 1) return Error(ErrorKind::ShapeMismatch, "truncation order must be at least 1");

    // (I): F(T,0) = T and F(0,T) = T; read off the terms free of one variable.
    {
        std::vector<Term> bad;
        for (const auto& t : F.terms()) {
            const unsigned a = t.mono.exponent(0), b = t.mono.exponent(1);
            if (a != 0 && b != 0) continue;
            if ((a + b == 1) && t.coeff.is_one()) continue;
            bad.push_back(t);
        }
        const unsigned e10[] = {1, 0}, e01[] = {0, 1};
        if (!F.coefficient(e10).is_one()) bad.push_back({Monomial::from_exponents(e10), r.one()});
        if (!F.coefficient(e01).is_one()) bad.push_back({Monomial::from_exponents(e01), r.one()});
        if (!bad.empty()) {
            auto it = std::min_element(bad.begin(), bad.end(), [](const Term& x, const Term& y) {
                return x.mono < y.mono;
            });
            return axiom_error(ErrorKind::IdentityFail, "identity", it->mono.exponents(2));
        }
    }

    // (A): F(F(x,y),z) = F(x,F(y,z)).
    {
        const TruncPoly x = var(r, 3, n, 0), y = var(r, 3, n, 1), z = var(r, 3, n, 2);
        const TruncPoly fxy = substitute(F, {x, y});
        const TruncPoly fyz = substitute(F, {y, z});
        const TruncPoly diff = substitute(F, {fxy, z}) - substitute(F, {x, fyz});
        if (!diff.is_zero()) {
            return axiom_error(ErrorKind::AssocFail, "associativity", witness_of(diff));
        }
    }

    // (C)
    {
        const unsigned swap[] = {1, 0};
        const TruncPoly diff = F - relabel_vars(F, 2, swap);
        if (!diff.is_zero()) {
            return axiom_error(ErrorKind::CommFail, "commutativity", witness_of(diff));
        }
    }
    return std::nullopt;
}

BudLaw BudLaw::validate(const TruncPoly& F)
{
    if (auto err = axiom_violation(F)) throw *err;
    return BudLaw(F);
}

BudLaw BudLaw::additive(const Ring& r, unsigned n)
{
    return BudLaw(var(r, 2, n, 0) + var(r, 2, n, 1));
}

BudLaw BudLaw::multiplicative(const Ring& r, unsigned n)
{
    const TruncPoly x = var(r, 2, n, 0), y = var(r, 2, n, 1);
    return BudLaw(x + y + x * y);
}

TruncPoly BudLaw::apply(const TruncPoly& a, const TruncPoly& b) const
{
    return substitute(*F_, {a, b});
}

// ---------------------------------------------------------------- homomorphisms

TruncPoly defect(const TruncPoly& f, const BudLaw& X, const BudLaw& Y)
{
    if (f.vars() != 1 || f.bound() != X.n() || X.n() != Y.n()) {
        throw Error(ErrorKind::ShapeMismatch, "series and laws must share the order");
    }
    if (!(X.ring() == Y.ring()) || !(f.ring() == X.ring())) {
        throw Error(ErrorKind::DescriptorMismatch, "series and laws must share the ring");
    }
    const TruncPoly lhs = substitute(f, {X.F()});
    const TruncPoly rhs = Y.apply(one_var(f, 0, 2), one_var(f, 1, 2));
    return lhs - rhs;
}

bool hom_check(const TruncPoly& f, const BudLaw& X, const BudLaw& Y)
{
    return f.has_zero_constant_term() && defect(f, X, Y).is_zero();
}

Endo::Endo(TruncPoly f, BudLaw source, BudLaw target)
    : f_(std::move(f)), source_(std::move(source)), target_(std::move(target))
{
    if (!f_.has_zero_constant_term()) {
        throw Error(ErrorKind::NonzeroConstantTerm, "a homomorphism has no constant term");
    }
    const TruncPoly d = defect(f_, source_, target_);
    if (!d.is_zero()) {
        auto w = witness_of(d);
        const std::string text = mono_text(w);
        throw Error(ErrorKind::NotAHomomorphism, "homomorphism identity fails at " + text,
                    std::move(w));
    }
}

Endo inverse_series(const BudLaw& X)
{
    const Ring& r = X.ring();
    const unsigned n = X.n();
    const TruncPoly t = var(r, 1, n, 0);
    TruncPoly i = -t;
    // Adding c*T^d to i moves F(i,T) by c*T^d in degree d (dF/dT1 = 1 + ...).
    for (unsigned d = 2; d <= n; ++d) {
        const Element c = X.apply(i, t).coefficient(d);
        if (!c.is_zero()) i -= TruncPoly::monomial(r, 1, n, Monomial::power(0, d), c);
    }
    return Endo(std::move(i), X);
}

Endo m_series(const BudLaw& X, unsigned long m)
{
    const Ring& r = X.ring();
    const TruncPoly t = var(r, 1, X.n(), 0);
    TruncPoly acc(r, 1, X.n());
    for (int bit = 63; bit >= 0; --bit) {
        if (!acc.is_zero()) acc = X.apply(acc, acc);
        if ((m >> bit) & 1) acc = acc.is_zero() ? t : X.apply(acc, t);
    }
    return Endo(std::move(acc), X);
}

Endo end_add(const Endo& f, const Endo& g)
{
    if (!(f.source() == g.source()) || !(f.target() == g.target())) {
        throw Error(ErrorKind::LawMismatch, "sum of homomorphisms between different laws");
    }
    return Endo(f.target().apply(f.f(), g.f()), f.source(), f.target());
}

Endo end_compose(const Endo& f, const Endo& g)
{
    if (!(g.target() == f.source())) {
        throw Error(ErrorKind::LawMismatch, "composition of non-composable homomorphisms");
    }
    return Endo(substitute(f.f(), {g.f()}), g.source(), f.target());
}

Endo end_neg(const Endo& f)
{
    const Endo i = inverse_series(f.target());
    return Endo(substitute(i.f(), {f.f()}), f.source(), f.target());
}

// ---------------------------------------------------------------- height

std::optional<unsigned> log_p(std::uint64_t d, std::uint64_t p)
{
    unsigned e = 0;
    while (d % p == 0) {
        d /= p;
        ++e;
    }
    if (d != 1) return std::nullopt;
    return e;
}

HeightClass height(const BudLaw& X, std::uint64_t p)
{
    if (!is_prime(p)) throw Error(ErrorKind::NotPrime, fmt::format("{} is not prime", p));
    const TruncPoly ps = m_series(X, p).f();
    if (ps.is_zero()) {
        if (X.n() < p) {
            throw Error(ErrorKind::TruncationTooShallow,
                        fmt::format("[{}] vanishes but the order {} is below {}", p, X.n(), p));
        }
        return PSeriesZero{};
    }
    const unsigned d = ps.min_degree();
    const Element c = ps.coefficient(d);
    const auto h = log_p(d, p);
    if (!h || !is_unit(c)) return HeightUndefined{d, c};
    if (X.ring().is_finite_field()) {
        const unsigned ph = d;
        for (const auto& t : ps.terms()) {
            if (t.mono.degree() % ph != 0) {
                throw Error(ErrorKind::ShapeViolation,
                            fmt::format("[{}] has a term in degree {} not divisible by {}", p,
                                        t.mono.degree(), ph));
            }
        }
    }
    return Height{*h, c};
}

// ---------------------------------------------------------------- coordinate changes

BudLaw conjugate(const BudLaw& X, const TruncPoly& f)
{
    if (f.vars() != 1 || f.bound() != X.n() || !(f.ring() == X.ring())) {
        throw Error(ErrorKind::ShapeMismatch, "coordinate change must match the law");
    }
    const TruncPoly g = compositional_inverse(f);
    const TruncPoly inner = X.apply(one_var(g, 0, 2), one_var(g, 1, 2));
    return BudLaw::validate(substitute(f, {inner}));
}

TruncPoly truncate_series(const TruncPoly& f, unsigned m)
{
    return f.truncated(m);
}

BudLaw truncate_law(const BudLaw& X, unsigned m)
{
    if (m < 1 || m > X.n()) {
        throw Error(ErrorKind::ShapeMismatch,
                    fmt::format("cannot truncate an order-{} law to order {}", X.n(), m));
    }
    return BudLaw(X.F().truncated(m));
}

BudLaw base_change(const BudLaw& X, const RingHom& phi)
{
    return BudLaw::validate(map_coefficients(X.F(), phi));
}

} // namespace budlaw
