#pragma once

// Honda bud laws over F_p with [p] = T^(p^h), their endomorphisms and
// automorphisms over F_q, the A_i / I_i filtrations and the finite quotient
// rings E_n.

#include <map>
#include <vector>

#include "budlaw/budlaw.hpp"

namespace budlaw {

struct HondaLaw {
    std::uint64_t p;
    unsigned h;
    unsigned n;
    BudLaw law;       // over F_p
    TruncPoly log;    // sum T^(p^(hi)) / p^i over Q
    BudLaw rational;  // the law over Q with that logarithm
};

// Throws NotPIntegral if the construction leaves Z_(p) and ShapeViolation if
// [p] is not exactly T^(p^h) (0 when n < p^h).
HondaLaw honda_law(std::uint64_t p, unsigned h, unsigned n);

// The l with p^l <= n < p^(l+1).
unsigned floor_log(std::uint64_t p, unsigned n);

// H over F_q (q a power of p).
BudLaw honda_over(const HondaLaw& H, const Ring& field);

// a T^(p^j) + (forced higher terms), an endomorphism of H over the field.
// Throws Obstructed(m) when the defect survives at a power-of-p degree m.
Endo lift_endomorphism(const HondaLaw& H, const Ring& field, unsigned j, const Element& a);

struct EndoSet {
    std::uint64_t p;
    unsigned h;
    unsigned n;
    Ring field;
    BudLaw over;                 // H over the field
    unsigned l;
    std::vector<TruncPoly> elements;  // sorted by coefficient vector
};

// Compare coefficient vectors (a_1, ..., a_n) in canonical field order.
bool canonical_less(const TruncPoly& f, const TruncPoly& g);

// All endomorphisms of H over the field, found by the degree-by-degree
// search: forced corrections off powers of p, every field element tried at
// powers of p, branches pruned when the defect survives. jobs > 1 splits the
// search across threads; the result is identical.
EndoSet enumerate_endos(const HondaLaw& H, const Ring& field, unsigned jobs = 1);

struct FiltrationLevel {
    unsigned i;
    std::uint64_t order;       // |A_i|
    std::uint64_t quotient;    // |A_i| / |A_(i+1)|  (i < n)
    std::uint64_t predicted;
    std::string kind;          // "mu", "fix", "ga", "trivial", "gm"
    bool match;
};

struct FiltrationReport {
    std::vector<FiltrationLevel> levels;  // i = 0..n
    std::uint64_t mu_count;    // |mu_(p^h-1)(F_q)|
    std::uint64_t fix_count;   // |Fix(Fr_(p^h))(F_q)|
    bool normal;               // every A_i is normal in Aut
    bool bijection;            // f -> T +_H f maps I_i onto A_i, i >= 1
    bool all_match;
};

struct AutGroup {
    EndoSet endos;                    // the whole End, for reference
    std::vector<TruncPoly> elements;  // units, sorted
    FiltrationReport report;
};

AutGroup aut_group(const HondaLaw& H, const Ring& field, unsigned jobs = 1);

// The counts behind the predictions, by enumeration of the field.
std::uint64_t count_mu(const Ring& field, std::uint64_t p, unsigned h);
std::uint64_t count_fix(const Ring& field, std::uint64_t p, unsigned h);

// A finite commutative-or-not ring given by tables over indexed elements.
struct FiniteRing {
    std::vector<TruncPoly> elements;
    std::vector<std::vector<std::size_t>> add;
    std::vector<std::vector<std::size_t>> mul;
    std::size_t zero = 0;
    std::size_t one = 0;
    std::map<std::vector<std::uint64_t>, std::size_t> lookup;  // coefficient key -> index

    std::size_t size() const { return elements.size(); }
    std::size_t index_of(const TruncPoly& f) const;
    std::vector<std::size_t> units() const;
    std::size_t neg(std::size_t x) const;
};

// Builds the tables (+_H and composition at H's order) for a set of
// endomorphisms closed under both. Throws InvalidInput if not closed.
FiniteRing make_finite_ring(const BudLaw& H, std::vector<TruncPoly> elements);

struct QuotientRing {
    unsigned n;
    unsigned N;
    unsigned l;
    FiniteRing ring;
    std::vector<std::size_t> units;
    std::uint64_t expected;  // |Fix|^(l+1)
    bool size_ok;
};

// The image of End(H^(N)) in End(H^(n)) over the field with its ring
// structure. Throws OrderTooSmall when N < p^(l+h) or N < n.
QuotientRing quotient_ring(const HondaLaw& H_N, unsigned n, const Ring& field,
                           unsigned jobs = 1);

struct UnitQuotientReport {
    unsigned i;
    unsigned j;
    bool square_in_j;        // I_i * I_i inside I_j
    bool part1;              // R^x / (1 + I_i) = (R / I_i)^x
    bool part2;              // I_i / I_j = (1 + I_i) / (1 + I_j)
    std::vector<std::string> failures;
};

// Checks both parts of the unit-quotient lemma on the ideals
// I_k = {f : f has no terms of degree <= k}.
UnitQuotientReport unit_quotient_check(const FiniteRing& R, unsigned i, unsigned j);

} // namespace budlaw
