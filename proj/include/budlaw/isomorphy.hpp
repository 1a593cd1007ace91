#pragma once

// Isomorphisms between bud laws over finite fields, trivialization to the
// Honda law over finite extensions, and logarithms over Q-algebras.

#include <variant>

#include "budlaw/budlaw.hpp"

namespace budlaw {

struct IsoFound {
    Endo f;        // X -> Y over `field`
    Ring field;
    unsigned degree = 1;  // [field : base field]
};
struct IsoNotFoundOverBase {};
struct IsoFailed {
    std::string reason;   // "BoundExceeded"
};
using IsoResult = std::variant<IsoFound, IsoNotFoundOverBase, IsoFailed>;

// Degree-by-degree search for an isomorphism X -> Y over the field (both laws
// are mapped there first). The first witness in coefficient order wins.
IsoResult find_iso(const BudLaw& X, const BudLaw& Y, const Ring& field);

// Looks for an isomorphism X -> H_h^(n) over F_(q^d), d = 1..max_ext
// (max_ext = 0 means p^h). Throws HeightMismatch unless X has height h.
IsoResult trivialize_height_h(const BudLaw& X, unsigned h, unsigned max_ext = 0);

// The strict isomorphism from X to the additive law. Throws NotQAlgebra.
Endo log_to_additive(const BudLaw& X);

} // namespace budlaw
