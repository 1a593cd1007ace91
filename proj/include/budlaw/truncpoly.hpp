#pragma once

// Truncated multivariate polynomials: R[T1..Tv]/(T1..Tv)^(bound+1).
//
// Exponent vectors are packed into a 64-bit key: the top byte holds the total
// degree and byte 6-i holds the exponent of T_(i+1). Comparing keys is graded
// lexicographic order, and adding keys multiplies monomials. This limits
// v <= 7 and bound <= 127, far beyond what any law computation here needs.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "budlaw/rings.hpp"

namespace budlaw {

class Monomial {
public:
    static constexpr unsigned kMaxVars = 7;
    static constexpr unsigned kMaxBound = 127;

    constexpr Monomial() = default;
    static Monomial from_exponents(std::span<const unsigned> e);
    static Monomial power(unsigned var, unsigned e);

    unsigned degree() const { return static_cast<unsigned>(key_ >> 56); }
    unsigned exponent(unsigned var) const
    {
        return static_cast<unsigned>((key_ >> (8 * (6 - var))) & 0xff);
    }
    std::vector<unsigned> exponents(unsigned vars) const;
    std::uint64_t key() const { return key_; }
    static Monomial from_key(std::uint64_t key)
    {
        Monomial m;
        m.key_ = key;
        return m;
    }

    friend Monomial operator*(Monomial a, Monomial b)
    {
        Monomial m;
        m.key_ = a.key_ + b.key_;
        return m;
    }
    friend auto operator<=>(Monomial, Monomial) = default;

private:
    std::uint64_t key_ = 0;
};

struct Term {
    Monomial mono;
    Element coeff;
};

class TruncPoly {
public:
    TruncPoly(Ring ring, unsigned vars, unsigned bound);

    static TruncPoly variable(Ring ring, unsigned vars, unsigned bound, unsigned var);
    static TruncPoly constant(Ring ring, unsigned vars, unsigned bound, const Element& c);
    static TruncPoly monomial(Ring ring, unsigned vars, unsigned bound, Monomial m,
                              const Element& c);
    // Build from unsorted terms; zero coefficients and terms past the bound
    // are dropped, repeated monomials are summed.
    static TruncPoly from_terms(Ring ring, unsigned vars, unsigned bound,
                                std::vector<Term> terms);

    const Ring& ring() const { return ring_; }
    unsigned vars() const { return vars_; }
    unsigned bound() const { return bound_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Element coefficient(Monomial m) const;
    Element coefficient(std::span<const unsigned> e) const;
    // 1-variable shorthand: coefficient of T^d.
    Element coefficient(unsigned d) const;

    // Lowest total degree carrying a nonzero term, or bound+1 if zero.
    unsigned min_degree() const;
    bool has_zero_constant_term() const;

    TruncPoly homogeneous_part(unsigned d) const;
    // Discard degrees > m (m <= bound).
    TruncPoly truncated(unsigned m) const;
    // Same terms viewed at a larger bound.
    TruncPoly lifted(unsigned m) const;

    TruncPoly& operator+=(const TruncPoly& g);
    TruncPoly& operator-=(const TruncPoly& g);
    TruncPoly& operator*=(const TruncPoly& g);
    TruncPoly& operator*=(const Element& c);

    friend TruncPoly operator+(TruncPoly f, const TruncPoly& g) { return f += g; }
    friend TruncPoly operator-(TruncPoly f, const TruncPoly& g) { return f -= g; }
    friend TruncPoly operator*(const TruncPoly& f, const TruncPoly& g);
    friend TruncPoly operator*(TruncPoly f, const Element& c) { return f *= c; }
    friend TruncPoly operator*(const Element& c, TruncPoly f) { return f *= c; }
    friend TruncPoly operator-(TruncPoly f);

    friend bool operator==(const TruncPoly& f, const TruncPoly& g);

    // Pretty form like "T1 + T2 + t1*T1*T2"; variable names default to T (v=1)
    // or T1..Tv.
    std::string to_string() const;

private:
    friend class TermAccumulator;
    void check_shape(const TruncPoly& g) const;

    Ring ring_;
    unsigned vars_;
    unsigned bound_;
    std::vector<Term> terms_;  // sorted by monomial, nonzero coefficients
};

TruncPoly pow(const TruncPoly& f, unsigned e);

// f(args...) in the common ring of the arguments. Every argument must have
// zero constant term.
TruncPoly substitute(const TruncPoly& f, std::span<const TruncPoly> args);
TruncPoly substitute(const TruncPoly& f, std::initializer_list<TruncPoly> args);

// g with f(g(T)) = g(f(T)) = T; f must be 1-variable with zero constant term and
// unit linear coefficient.
TruncPoly compositional_inverse(const TruncPoly& f);

TruncPoly map_coefficients(const TruncPoly& f, const RingHom& phi);

// Re-embed f in more (or the same number of) variables, variable i of f going
// to variable slots[i] of the result.
TruncPoly relabel_vars(const TruncPoly& f, unsigned vars,
                       std::span<const unsigned> slots);

} // namespace budlaw
