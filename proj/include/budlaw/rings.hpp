#pragma once

// Exact coefficient rings: Z, Q, Z/m, F_{p^k} and flat parameter polynomial
// rings R[t1..tr] over any of these.
//
// A Ring is a cheap handle to an interned, immutable descriptor; two handles
// compare equal iff they describe the same ring. Elements carry their ring and
// are always stored in canonical form, so structural equality is ring equality.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "budlaw/errors.hpp"

namespace budlaw {

enum class RingKind { Integers, Rationals, ModN, FiniteField, ParamPoly };

namespace detail {
struct RingData;
}

class Element;

class Ring {
public:
    // Z; the default-constructed handle.
    Ring();

    static Ring integers();
    static Ring rationals();
    static Ring mod_n(const mpz_class& m);
    // F_{p^k} with the lexicographically least monic irreducible modulus.
    static Ring finite_field(std::uint64_t p, unsigned k);
    // base[t1..tr]; a ParamPoly base is flattened into one parameter layer.
    static Ring param_poly(const Ring& base, std::vector<std::string> params);

    RingKind kind() const;
    bool is_param_poly() const { return kind() == RingKind::ParamPoly; }

    const mpz_class& modulus() const;                  // ModN
    std::uint64_t prime() const;                       // FiniteField
    unsigned extension_degree() const;                 // FiniteField
    std::uint64_t field_size() const;                  // FiniteField
    const std::vector<std::uint64_t>& field_modulus() const; // constant first

    Ring base() const;                                  // ParamPoly
    const std::vector<std::string>& params() const;    // ParamPoly
    // The ring coefficients live in: base() for ParamPoly, else *this.
    Ring scalars() const;

    // 0 for Z, Q and their parameter rings.
    mpz_class characteristic() const;
    // True for Q and for Q-based parameter rings.
    bool is_q_algebra() const;
    // Finite field (not under ParamPoly).
    bool is_finite_field() const { return kind() == RingKind::FiniteField; }

    Element zero() const;
    Element one() const;
    Element from_int(const mpz_class& v) const;
    Element from_int(long v) const;
    // Q only, or any ring in which den is invertible.
    Element from_rational(const mpq_class& v) const;
    // ParamPoly: the i-th parameter (0-based).
    Element param(std::size_t i) const;

    // FiniteField: the element with canonical index i = sum c_j p^j.
    Element field_element(std::uint64_t index) const;
    // FiniteField: the class of x.
    Element field_generator() const;
    // FiniteField: all q elements in canonical order.
    std::vector<Element> field_elements() const;

    std::string to_string() const;

    friend bool operator==(const Ring& a, const Ring& b) { return a.d_ == b.d_; }

    const detail::RingData* data() const { return d_; }

private:
    explicit Ring(const detail::RingData* d) : d_(d) {}
    const detail::RingData* d_;
};

// One term of a parameter polynomial: exponent vector over the ring's params
// and a nonzero coefficient in the base ring.
struct PolyTerm;
using PolyTerms = std::vector<PolyTerm>;

class Element {
public:
    using Payload = std::variant<mpz_class, mpq_class, std::uint64_t,
                                 std::shared_ptr<const PolyTerms>>;

    // The integer 0.
    Element();
    Element(Ring ring, Payload payload);

    const Ring& ring() const { return ring_; }

    bool is_zero() const;
    bool is_one() const;

    // Z and Z/m residues (in [0, m)).
    const mpz_class& integer() const;
    const mpq_class& rational() const;
    // FiniteField canonical index.
    std::uint64_t field_index() const;
    // ParamPoly terms in ascending graded-lex order; empty for 0.
    const PolyTerms& poly_terms() const;

    Element& operator+=(const Element& y);
    Element& operator-=(const Element& y);
    Element& operator*=(const Element& y);

    friend Element operator+(Element x, const Element& y) { return x += y; }
    friend Element operator-(Element x, const Element& y) { return x -= y; }
    friend Element operator*(Element x, const Element& y) { return x *= y; }
    friend Element operator-(const Element& x);

    friend bool operator==(const Element& x, const Element& y);

    // A total order used for canonical sorting (field index order for finite
    // fields; numeric order for Z, Q; residue order for Z/m; graded-lex term
    // order for parameter polynomials).
    friend int compare(const Element& x, const Element& y);

    std::string to_string() const;

    const Payload& payload() const { return payload_; }

private:
    Ring ring_;
    Payload payload_;
};

struct PolyTerm {
    std::vector<std::uint32_t> exps;
    Element coeff;
};

// Exact division; throws DivisionUndefined when y does not divide x.
Element divide(const Element& x, const Element& y);
// The multiplicative inverse, if x is a unit.
std::optional<Element> inverse(const Element& x);
inline bool is_unit(const Element& x) { return inverse(x).has_value(); }
bool is_nilpotent(const Element& x);
Element pow(const Element& x, const mpz_class& e);
Element pow(const Element& x, unsigned long e);
// x^(p^e); the ring must have characteristic p (p prime).
Element frobenius(const Element& x, std::uint64_t p, unsigned e);
// Some y with d*y = c, where d is an integer acting through Z -> ring.
std::optional<Element> solve_scalar(const mpz_class& d, const Element& c);
// Multiply by an integer.
Element scale(const Element& x, const mpz_class& d);

// The maps Z -> R, Q -> R (when denominators are invertible), Z/m -> Z/m',
// F_p -> F_{p^k}, F_{p^k} -> F_{p^km} (fixed deterministic embedding),
// R -> R[t..] and R[t..] -> R'[t'..] (params matched by name).
Element canonical_map(const Element& x, const Ring& target);

bool is_prime(std::uint64_t n);

// Ring homomorphisms usable with TruncPoly::map_coefficients.
class RingHom {
public:
    static RingHom canonical(Ring source, Ring target);
    // t_i -> values[i] (each in target); base coefficients mapped canonically.
    static RingHom specialization(Ring source, std::vector<Element> values,
                                  Ring target);

    const Ring& source() const { return source_; }
    const Ring& target() const { return target_; }

    Element operator()(const Element& x) const;

private:
    RingHom(Ring s, Ring t, std::vector<Element> v)
        : source_(s), target_(t), values_(std::move(v))
    {
    }
    Ring source_;
    Ring target_;
    std::vector<Element> values_;  // empty for canonical maps
    bool specialize_ = false;
};

} // namespace budlaw
