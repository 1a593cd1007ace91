#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "budlaw/rings.hpp"

namespace budlaw::detail {

struct RingData {
    RingKind kind = RingKind::Integers;
    std::string key;

    // ModN
    mpz_class modulus;

    // FiniteField: q = p^k, elements are indices sum c_j p^j.
    std::uint64_t p = 0;
    unsigned k = 0;
    std::uint64_t q = 0;
    std::vector<std::uint64_t> poly;  // monic modulus, constant term first
    std::vector<std::uint32_t> exp_table;  // 2(q-1) entries when tabulated
    std::vector<std::uint32_t> log_table;  // q entries when tabulated

    // ParamPoly
    const RingData* base = nullptr;
    std::vector<std::string> params;
};

// Finite field kernels on canonical indices.
std::uint64_t ff_add(const RingData& f, std::uint64_t a, std::uint64_t b);
std::uint64_t ff_neg(const RingData& f, std::uint64_t a);
std::uint64_t ff_mul(const RingData& f, std::uint64_t a, std::uint64_t b);
std::uint64_t ff_pow(const RingData& f, std::uint64_t a, const mpz_class& e);
std::uint64_t ff_inv(const RingData& f, std::uint64_t a);  // a != 0
std::uint64_t ff_from_int(const RingData& f, const mpz_class& v);
std::vector<std::uint64_t> ff_digits(const RingData& f, std::uint64_t a);
std::uint64_t ff_from_digits(const RingData& f, const std::vector<std::uint64_t>& d);

// Least monic irreducible of degree k over F_p in the canonical order.
std::vector<std::uint64_t> canonical_modulus(std::uint64_t p, unsigned k);
bool is_irreducible(const std::vector<std::uint64_t>& f, std::uint64_t p);
void build_tables(RingData& f);

} // namespace budlaw::detail
