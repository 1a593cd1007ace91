#pragma once

// n-bud laws F(T1,T2) over a ring, their homomorphisms, [m]-series and height.

#include <memory>
#include <optional>
#include <variant>

#include "budlaw/truncpoly.hpp"

namespace budlaw {

// A validated n-bud law. Only validate() (and operations that preserve the
// axioms) can produce one, so holding a BudLaw means the axioms hold.
class BudLaw {
public:
    // Checks identity, then associativity, then commutativity. Throws
    // IdentityFail / AssocFail / CommFail carrying the first bad monomial.
    static BudLaw validate(const TruncPoly& F);

    static BudLaw additive(const Ring& r, unsigned n);
    static BudLaw multiplicative(const Ring& r, unsigned n);

    const Ring& ring() const { return F_->ring(); }
    unsigned n() const { return F_->bound(); }
    const TruncPoly& F() const { return *F_; }

    // F(a, b) for series a, b sharing a shape (1 var usually).
    TruncPoly apply(const TruncPoly& a, const TruncPoly& b) const;

    friend bool operator==(const BudLaw& x, const BudLaw& y) { return x.F() == y.F(); }

private:
    explicit BudLaw(TruncPoly F) : F_(std::make_shared<const TruncPoly>(std::move(F))) {}
    friend BudLaw truncate_law(const BudLaw&, unsigned);
    std::shared_ptr<const TruncPoly> F_;
};

// The axiom check without throwing: nullopt when F is a bud law.
std::optional<Error> axiom_violation(const TruncPoly& F);

// A homomorphism source -> target, re-verified on construction.
class Endo {
public:
    // Throws NotAHomomorphism (witness = first bad monomial) or ShapeMismatch.
    Endo(TruncPoly f, BudLaw source, BudLaw target);
    Endo(TruncPoly f, const BudLaw& law) : Endo(std::move(f), law, law) {}

    const TruncPoly& f() const { return f_; }
    const BudLaw& source() const { return source_; }
    const BudLaw& target() const { return target_; }

    friend bool operator==(const Endo& a, const Endo& b) { return a.f_ == b.f_; }

private:
    TruncPoly f_;
    BudLaw source_;
    BudLaw target_;
};

// f(F(T1,T2)) - G(f(T1), f(T2)).
TruncPoly defect(const TruncPoly& f, const BudLaw& X, const BudLaw& Y);
bool hom_check(const TruncPoly& f, const BudLaw& X, const BudLaw& Y);

Endo inverse_series(const BudLaw& X);
// [m]_F; m = 0 gives the zero endomorphism.
Endo m_series(const BudLaw& X, unsigned long m);
// f +_G g for homomorphisms X -> Y with target law G.
Endo end_add(const Endo& f, const Endo& g);
// f o g where g: X -> Y and f: Y -> Z.
Endo end_compose(const Endo& f, const Endo& g);
Endo end_neg(const Endo& f);

struct Height {
    unsigned h;
    Element leading;
};
struct PSeriesZero {};
struct HeightUndefined {
    unsigned lowest_degree;
    Element lowest_coeff;
};
using HeightClass = std::variant<Height, PSeriesZero, HeightUndefined>;

// Throws TruncationTooShallow when [p] vanishes but n < p. Over finite fields
// also asserts that [p] is supported in degrees divisible by p^h
// (ShapeViolation otherwise).
HeightClass height(const BudLaw& X, std::uint64_t p);

// G(T1,T2) = f(F(f^-1(T1), f^-1(T2))); f becomes an isomorphism X -> G.
BudLaw conjugate(const BudLaw& X, const TruncPoly& f);

BudLaw truncate_law(const BudLaw& X, unsigned m);
TruncPoly truncate_series(const TruncPoly& f, unsigned m);
BudLaw base_change(const BudLaw& X, const RingHom& phi);

// p^e == d for some e >= 0, returning e.
std::optional<unsigned> log_p(std::uint64_t d, std::uint64_t p);

} // namespace budlaw
