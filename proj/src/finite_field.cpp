#include <algorithm>
#include <stdexcept>

#include "ring_data.hpp"

namespace budlaw::detail {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using Poly = std::vector<u64>;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

u64 powmod(u64 a, u64 e, u64 m)
{
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

void trim(Poly& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// a mod f for monic f.
Poly poly_rem(Poly a, const Poly& f, u64 p)
{
    const std::size_t df = f.size() - 1;
    trim(a);
    while (a.size() > df) {
        const u64 lead = a.back();
        const std::size_t shift = a.size() - 1 - df;
        for (std::size_t i = 0; i <= df; ++i) {
            a[shift + i] = (a[shift + i] + p - mulmod(lead, f[i], p)) % p;
        }
        trim(a);
    }
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b, u64 p)
{
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
        }
    }
    trim(r);
    return r;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, u64 p)
{
    return poly_rem(poly_mul(a, b, p), f, p);
}

Poly poly_powmod(Poly a, u64 e, const Poly& f, u64 p)
{
    Poly r{1};
    r = poly_rem(r, f, p);
    while (e) {
        if (e & 1) r = poly_mulmod(r, a, f, p);
        a = poly_mulmod(a, a, f, p);
        e >>= 1;
    }
    return r;
}

// Monic gcd over F_p; general (non-monic) remainders.
Poly poly_gcd(Poly a, Poly b, u64 p)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b with b not necessarily monic
        const u64 inv_lead = invmod(b.back(), p);
        while (a.size() >= b.size() && !a.empty()) {
            const u64 c = mulmod(a.back(), inv_lead, p);
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) {
                a[shift + i] = (a[shift + i] + p - mulmod(c, b[i], p)) % p;
            }
            trim(a);
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        const u64 inv_lead = invmod(a.back(), p);
        for (auto& c : a) c = mulmod(c, inv_lead, p);
    }
    return a;
}

} // namespace

bool is_irreducible(const Poly& f, u64 p)
{
    Poly g = f;
    trim(g);
    if (g.size() < 2) return false;
    const std::size_t k = g.size() - 1;
    if (k == 1) return true;
    // Ben-Or: no factor of degree i <= k/2, i.e. gcd(x^(p^i) - x, f) = 1.
    const Poly x{0, 1};
    Poly xp = x;
    for (std::size_t i = 1; i <= k / 2; ++i) {
        xp = poly_powmod(xp, p, g, p);
        Poly diff = xp;
        diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(diff);
        const Poly d = poly_gcd(g, diff, p);
        if (d.size() != 1) return false;
    }
    return true;
}

Poly canonical_modulus(u64 p, unsigned k)
{
    // Candidates ordered by the coefficient vector (c_0, ..., c_{k-1}) with c_0
    // most significant.
    std::vector<u64> c(k, 0);
    for (;;) {
        Poly f(c.begin(), c.end());
        f.push_back(1);
        if (is_irreducible(f, p)) return f;
        // increment with c_{k-1} least significant
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && ++c[i] == p) {
            c[i] = 0;
            --i;
        }
        if (i < 0) throw std::logic_error("no irreducible polynomial found");
    }
}

std::vector<u64> ff_digits(const RingData& f, u64 a)
{
    std::vector<u64> d(f.k, 0);
    for (unsigned j = 0; j < f.k; ++j) {
        d[j] = a % f.p;
        a /= f.p;
    }
    return d;
}

u64 ff_from_digits(const RingData& f, const std::vector<u64>& d)
{
    u64 a = 0;
    for (std::size_t j = d.size(); j-- > 0;) a = a * f.p + d[j];
    return a;
}

u64 ff_add(const RingData& f, u64 a, u64 b)
{
    if (f.k == 1) {
        const u64 s = a + b;  // p < 2^63
        return s >= f.p ? s - f.p : s;
    }
    if (f.p == 2) return a ^ b;
    u64 r = 0, w = 1;
    for (unsigned j = 0; j < f.k; ++j) {
        u64 s = a % f.p + b % f.p;
        if (s >= f.p) s -= f.p;
        r += s * w;
        a /= f.p;
        b /= f.p;
        w *= f.p;
    }
    return r;
}

u64 ff_neg(const RingData& f, u64 a)
{
    if (f.k == 1) return a == 0 ? 0 : f.p - a;
    if (f.p == 2) return a;
    u64 r = 0, w = 1;
    for (unsigned j = 0; j < f.k; ++j) {
        const u64 c = a % f.p;
        r += (c == 0 ? 0 : f.p - c) * w;
        a /= f.p;
        w *= f.p;
    }
    return r;
}

namespace {

u64 ff_mul_slow(const RingData& f, u64 a, u64 b)
{
    Poly pa = ff_digits(f, a), pb = ff_digits(f, b);
    trim(pa);
    trim(pb);
    Poly r = poly_mulmod(pa, pb, f.poly, f.p);
    r.resize(f.k, 0);
    return ff_from_digits(f, r);
}

} // namespace

u64 ff_mul(const RingData& f, u64 a, u64 b)
{
    if (a == 0 || b == 0) return 0;
    if (f.k == 1) return mulmod(a, b, f.p);
    if (!f.log_table.empty()) {
        return f.exp_table[f.log_table[a] + f.log_table[b]];
    }
    return ff_mul_slow(f, a, b);
}

u64 ff_pow(const RingData& f, u64 a, const mpz_class& e)
{
    if (e == 0) return 1;
    if (a == 0) return 0;
    const mpz_class order = mpz_class(std::to_string(f.q)) - 1;
    mpz_class r = e % order;
    if (!f.log_table.empty()) {
        mpz_class l = (mpz_class(f.log_table[a]) * r) % order;
        return f.exp_table[l.get_ui()];
    }
    u64 res = 1, base = a;
    const std::size_t bits = mpz_sizeinbase(r.get_mpz_t(), 2);
    for (std::size_t i = 0; i < bits; ++i) {
        if (mpz_tstbit(r.get_mpz_t(), i)) res = ff_mul(f, res, base);
        base = ff_mul(f, base, base);
    }
    return res;
}

u64 ff_inv(const RingData& f, u64 a)
{
    if (f.k == 1) return invmod(a, f.p);
    if (!f.log_table.empty()) {
        const u64 order = f.q - 1;
        return f.exp_table[(order - f.log_table[a]) % order];
    }
    return ff_pow(f, a, mpz_class(std::to_string(f.q - 2)));
}

u64 ff_from_int(const RingData& f, const mpz_class& v)
{
    mpz_class r = v % mpz_class(std::to_string(f.p));
    if (r < 0) r += mpz_class(std::to_string(f.p));
    return r.get_ui();
}

void build_tables(RingData& f)
{
    constexpr u64 kTableLimit = 1u << 16;
    if (f.k == 1 || f.q > kTableLimit) return;
    const u64 order = f.q - 1;
    std::vector<u64> primes;
    {
        u64 m = order;
        for (u64 r = 2; r * r <= m; ++r) {
            if (m % r == 0) {
                primes.push_back(r);
                while (m % r == 0) m /= r;
            }
        }
        if (m > 1) primes.push_back(m);
    }
    auto slow_pow = [&](u64 a, u64 e) {
        u64 r = 1;
        while (e) {
            if (e & 1) r = ff_mul_slow(f, r, a);
            a = ff_mul_slow(f, a, a);
            e >>= 1;
        }
        return r;
    };
    u64 gen = 0;
    for (u64 g = 1; g < f.q; ++g) {
        bool primitive = true;
        for (u64 r : primes) {
            if (slow_pow(g, order / r) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) {
            gen = g;
            break;
        }
    }
    f.exp_table.assign(2 * order, 0);
    f.log_table.assign(f.q, 0);
    u64 x = 1;
    for (u64 i = 0; i < order; ++i) {
        f.exp_table[i] = static_cast<std::uint32_t>(x);
        f.exp_table[i + order] = static_cast<std::uint32_t>(x);
        f.log_table[x] = static_cast<std::uint32_t>(i);
        x = ff_mul_slow(f, x, gen);
    }
}

} // namespace budlaw::detail
