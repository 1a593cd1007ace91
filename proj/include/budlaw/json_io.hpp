#pragma once

// JSON forms of rings, elements, series and laws.
//
//   ring     "Z" | "Q" | {"mod": m} | {"gf": [p, k]} | {"poly": {"base": ring, "params": [...]}}
//   element  "12", "-3/4"; over GF(p^k), k > 1, {"i": c_i} for sum c_i x^i;
//            over a parameter ring {"t1^2*t2": base element, "1": ...}
//   series   {"ring", "vars", "bound", "terms": [[[e1, ..., ev], element], ...]}
//   law      {"ring", "n", "F": series, "validated": bool}

#include <json.hpp>

#include "budlaw/budlaw.hpp"

namespace budlaw::io {

using json = nlohmann::ordered_json;

json ring_to_json(const Ring& r);
Ring ring_from_json(const json& j);

// "z", "q", "mod:M", "gf:P^K", "poly:RING[t1,t2]" or "poly:RING[t1..t3]".
Ring parse_ring_spec(const std::string& spec);

json element_to_json(const Element& x);
Element element_from_json(const json& j, const Ring& r);

json series_to_json(const TruncPoly& f);
// A series; `ring` overrides (or supplies) the ring: coefficients are read
// in the file's ring and mapped over when both are present.
TruncPoly series_from_json(const json& j, const Ring* ring = nullptr);

json law_to_json(const BudLaw& X);
// Accepts a law object, a bare series, or any object with a "law" member.
BudLaw law_from_json(const json& j, const Ring* ring = nullptr);

json endo_to_json(const Endo& f);

} // namespace budlaw::io
