#pragma once

// Symmetric 2-cocycles, one-degree extension of bud laws, the universal n-bud
// law and classification by specialization.

#include <vector>

#include "budlaw/budlaw.hpp"

namespace budlaw {

// l when m is a power of the prime l, else 1.
std::uint64_t lambda_of(unsigned m);

// B_m = (T1+T2)^m - T1^m - T2^m and C_m = B_m / lambda(m), computed over Z and
// mapped into r, as 2-variable series at the given bound (default m).
TruncPoly b_poly(unsigned m, const Ring& r, unsigned bound = 0);
TruncPoly c_poly(unsigned m, const Ring& r, unsigned bound = 0);

// P is homogeneous of degree m, symmetric, and killed by the coboundary.
bool is_spc(const TruncPoly& P, unsigned m);

// The a with P = a*C_m. Throws NotMultipleOfC when no such a exists.
Element spc_multiplier(const TruncPoly& P, unsigned m);

// d2G(x,y,z) = G(y,z) - G(x+y,z) + G(x,y+z) - G(x,y), in 3 variables at G's bound.
TruncPoly coboundary(const TruncPoly& Gamma);

// Homogeneous degree-(n+1) associativity defect of F lifted by zero to n+1.
TruncPoly assoc_defect(const TruncPoly& F);

// An (n+1)-bud law truncating to X. Throws NoExtension if the cocycle system
// has no solution (impossible for a valid X).
BudLaw extend_one_degree(const BudLaw& X);

struct UniversalLaw {
    unsigned n;
    BudLaw law;  // over Z[t1..t_{n-1}]
};

// Memoized; safe to call concurrently.
const UniversalLaw& universal_law(unsigned n);

// Z[t1..tr] with r = n - 1.
Ring universal_ring(unsigned n);

// universal_law(n) at t_i -> values[i], values in the target ring.
BudLaw specialize(const UniversalLaw& U, const std::vector<Element>& values,
                  const Ring& target);

// (tau_1..tau_{n-1}) with specialize(universal_law(n), tau) == X.
std::vector<Element> classify(const BudLaw& X);

struct ShapeStep {
    unsigned j;           // coefficient of T^(p^j) in [p]
    unsigned param;       // 1-based index of t_(p^j - 1)
    Element scalar;       // its coefficient, expected p^(p^j-1) - 1 mod p
    bool ok;
    std::string coefficient;  // a_j as text
};

struct HeightGeLaw {
    BudLaw law;                    // over F_p[remaining t's]
    std::vector<ShapeStep> steps;  // j = 1..h; steps j < h were eliminated
    bool lower_vanish = false;     // a_1..a_{h-1} are identically zero
};

// The universal law of order n reduced mod p with a_1..a_{h-1} solved away.
// Throws ShapeViolation if some a_j (j < h) is not linear in t_(p^j-1) with a
// unit scalar.
HeightGeLaw universal_height_ge(std::uint64_t p, unsigned h, unsigned n);

} // namespace budlaw
