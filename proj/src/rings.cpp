#include "budlaw/rings.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include <fmt/format.h>

#include "ring_data.hpp"

namespace budlaw {

using detail::RingData;

namespace {

using u64 = std::uint64_t;

mpz_class mpz_u64(u64 v) { return mpz_class(static_cast<unsigned long>(v)); }

// Interned descriptors; never freed.
std::mutex registry_mutex;
std::map<std::string, std::unique_ptr<RingData>>& registry()
{
    static std::map<std::string, std::unique_ptr<RingData>> r;
    return r;
}

template <typename Build>
const RingData* intern(const std::string& key, Build build)
{
    std::lock_guard lock(registry_mutex);
    auto& reg = registry();
    auto it = reg.find(key);
    if (it != reg.end()) return it->second.get();
    auto d = std::make_unique<RingData>();
    d->key = key;
    build(*d);
    const RingData* raw = d.get();
    reg.emplace(key, std::move(d));
    return raw;
}

const PolyTerms& empty_terms()
{
    static const PolyTerms e;
    return e;
}

bool grlex_less(const std::vector<std::uint32_t>& a,
                const std::vector<std::uint32_t>& b)
{
    const auto da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
    const auto db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
    if (da != db) return da < db;
    return a < b;
}

struct GrlexLess {
    bool operator()(const std::vector<std::uint32_t>& a,
                    const std::vector<std::uint32_t>& b) const
    {
        return grlex_less(a, b);
    }
};

Element make_poly(const Ring& r, PolyTerms terms)
{
    if (terms.empty()) return Element(r, std::shared_ptr<const PolyTerms>{});
    return Element(r, std::make_shared<const PolyTerms>(std::move(terms)));
}

Element poly_from_map(
    const Ring& r,
    std::map<std::vector<std::uint32_t>, Element, GrlexLess>& acc)
{
    PolyTerms out;
    out.reserve(acc.size());
    for (auto& [e, c] : acc) {
        if (!c.is_zero()) out.push_back(PolyTerm{e, std::move(c)});
    }
    return make_poly(r, std::move(out));
}

void require_same(const Element& x, const Element& y)
{
    if (!(x.ring() == y.ring())) {
        throw Error(ErrorKind::DescriptorMismatch,
                    fmt::format("{} vs {}", x.ring().to_string(),
                                y.ring().to_string()));
    }
}

std::string wrap(const std::string& s)
{
    if (s.find_first_of("+ ") != std::string::npos ||
        (s.size() > 1 && s.find('-', 1) != std::string::npos)) {
        return "(" + s + ")";
    }
    return s;
}

} // namespace

// ---------------------------------------------------------------- Ring

Ring::Ring() : d_(integers().d_) {}

Ring Ring::integers()
{
    static const RingData* d =
        intern("Z", [](RingData& r) { r.kind = RingKind::Integers; });
    return Ring(d);
}

Ring Ring::rationals()
{
    static const RingData* d =
        intern("Q", [](RingData& r) { r.kind = RingKind::Rationals; });
    return Ring(d);
}

Ring Ring::mod_n(const mpz_class& m)
{
    if (m <= 0) {
        throw Error(ErrorKind::InvalidInput, "modulus must be positive");
    }
    return Ring(intern("Z/" + m.get_str(), [&](RingData& r) {
        r.kind = RingKind::ModN;
        r.modulus = m;
    }));
}

Ring Ring::finite_field(std::uint64_t p, unsigned k)
{
    if (!is_prime(p)) {
        throw Error(ErrorKind::NotPrime, fmt::format("{} is not prime", p));
    }
    if (k == 0) throw Error(ErrorKind::InvalidInput, "extension degree 0");
    // q must fit comfortably in 63 bits
    u64 q = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (q > (u64{1} << 62) / p) {
            throw Error(ErrorKind::InvalidInput, "field too large");
        }
        q *= p;
    }
    return Ring(intern(fmt::format("GF({}^{})", p, k), [&](RingData& r) {
        r.kind = RingKind::FiniteField;
        r.p = p;
        r.k = k;
        r.q = q;
        r.poly = detail::canonical_modulus(p, k);
        detail::build_tables(r);
    }));
}

Ring Ring::param_poly(const Ring& base, std::vector<std::string> params)
{
    Ring b = base;
    if (base.is_param_poly()) {
        std::vector<std::string> all = base.params();
        all.insert(all.end(), params.begin(), params.end());
        params = std::move(all);
        b = base.base();
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].empty()) {
            throw Error(ErrorKind::InvalidInput, "empty parameter name");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (params[i] == params[j]) {
                throw Error(ErrorKind::InvalidInput,
                            "duplicate parameter " + params[i]);
            }
        }
    }
    std::string key = b.to_string() + "[";
    for (std::size_t i = 0; i < params.size(); ++i) {
        key += (i ? "," : "") + params[i];
    }
    key += "]";
    return Ring(intern(key, [&](RingData& r) {
        r.kind = RingKind::ParamPoly;
        r.base = b.d_;
        r.params = params;
    }));
}

RingKind Ring::kind() const { return d_->kind; }
const mpz_class& Ring::modulus() const { return d_->modulus; }
std::uint64_t Ring::prime() const { return d_->p; }
unsigned Ring::extension_degree() const { return d_->k; }
std::uint64_t Ring::field_size() const { return d_->q; }
const std::vector<std::uint64_t>& Ring::field_modulus() const { return d_->poly; }

Ring Ring::base() const
{
    if (!is_param_poly()) {
        throw Error(ErrorKind::InvalidInput, "not a parameter ring");
    }
    return Ring(d_->base);
}

const std::vector<std::string>& Ring::params() const { return d_->params; }

Ring Ring::scalars() const { return is_param_poly() ? base() : *this; }

mpz_class Ring::characteristic() const
{
    switch (kind()) {
    case RingKind::Integers:
    case RingKind::Rationals: return 0;
    case RingKind::ModN: return d_->modulus;
    case RingKind::FiniteField: return mpz_u64(d_->p);
    case RingKind::ParamPoly: return base().characteristic();
    }
    return 0;
}

bool Ring::is_q_algebra() const { return scalars().kind() == RingKind::Rationals; }

Element Ring::zero() const { return from_int(0L); }
Element Ring::one() const { return from_int(1L); }
Element Ring::from_int(long v) const { return from_int(mpz_class(v)); }

Element Ring::from_int(const mpz_class& v) const
{
    switch (kind()) {
    case RingKind::Integers: return Element(*this, v);
    case RingKind::Rationals: return Element(*this, mpq_class(v));
    case RingKind::ModN: {
        mpz_class r = v % d_->modulus;
        if (r < 0) r += d_->modulus;
        return Element(*this, r);
    }
    case RingKind::FiniteField:
        return Element(*this, detail::ff_from_int(*d_, v));
    case RingKind::ParamPoly: {
        Element c = base().from_int(v);
        if (c.is_zero()) return make_poly(*this, {});
        return make_poly(*this, {PolyTerm{std::vector<std::uint32_t>(
                                              d_->params.size(), 0),
                                          c}});
    }
    }
    return Element();
}

Element Ring::from_rational(const mpq_class& v) const
{
    mpq_class c(v);
    c.canonicalize();
    return canonical_map(Element(rationals(), c), *this);
}

Element Ring::param(std::size_t i) const
{
    if (!is_param_poly() || i >= d_->params.size()) {
        throw Error(ErrorKind::InvalidInput, "no such parameter");
    }
    std::vector<std::uint32_t> e(d_->params.size(), 0);
    e[i] = 1;
    return make_poly(*this, {PolyTerm{e, base().one()}});
}

Element Ring::field_element(std::uint64_t index) const
{
    if (!is_finite_field() || index >= d_->q) {
        throw Error(ErrorKind::InvalidInput, "not a field element index");
    }
    return Element(*this, index);
}

Element Ring::field_generator() const
{
    if (!is_finite_field()) throw Error(ErrorKind::InvalidInput, "not a field");
    if (d_->k == 1) return Element(*this, (d_->p - d_->poly[0]) % d_->p);
    return Element(*this, d_->p);
}

std::vector<Element> Ring::field_elements() const
{
    if (!is_finite_field()) throw Error(ErrorKind::InvalidInput, "not a field");
    std::vector<Element> out;
    out.reserve(d_->q);
    for (u64 i = 0; i < d_->q; ++i) out.emplace_back(*this, i);
    return out;
}

std::string Ring::to_string() const { return d_->key; }

// ---------------------------------------------------------------- Element

Element::Element() : ring_(Ring::integers()), payload_(mpz_class(0)) {}

Element::Element(Ring ring, Payload payload)
    : ring_(ring), payload_(std::move(payload))
{
}

const mpz_class& Element::integer() const { return std::get<mpz_class>(payload_); }
const mpq_class& Element::rational() const { return std::get<mpq_class>(payload_); }
std::uint64_t Element::field_index() const { return std::get<u64>(payload_); }

const PolyTerms& Element::poly_terms() const
{
    const auto& p = std::get<std::shared_ptr<const PolyTerms>>(payload_);
    return p ? *p : empty_terms();
}

bool Element::is_zero() const
{
    switch (ring_.kind()) {
    case RingKind::Integers:
    case RingKind::ModN: return integer() == 0;
    case RingKind::Rationals: return rational() == 0;
    case RingKind::FiniteField: return field_index() == 0;
    case RingKind::ParamPoly: return poly_terms().empty();
    }
    return false;
}

bool Element::is_one() const { return *this == ring_.one(); }

Element& Element::operator+=(const Element& y)
{
    require_same(*this, y);
    const RingData& d = *ring_.data();
    switch (d.kind) {
    case RingKind::Integers: std::get<mpz_class>(payload_) += y.integer(); break;
    case RingKind::Rationals: std::get<mpq_class>(payload_) += y.rational(); break;
    case RingKind::ModN: {
        auto& v = std::get<mpz_class>(payload_);
        v += y.integer();
        if (v >= d.modulus) v -= d.modulus;
        break;
    }
    case RingKind::FiniteField:
        payload_ = detail::ff_add(d, field_index(), y.field_index());
        break;
    case RingKind::ParamPoly: {
        const PolyTerms& a = poly_terms();
        const PolyTerms& b = y.poly_terms();
        if (b.empty()) break;
        if (a.empty()) {
            payload_ = y.payload_;
            break;
        }
        PolyTerms out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && grlex_less(a[i].exps, b[j].exps))) {
                out.push_back(a[i++]);
            } else if (i == a.size() || grlex_less(b[j].exps, a[i].exps)) {
                out.push_back(b[j++]);
            } else {
                Element c = a[i].coeff + b[j].coeff;
                if (!c.is_zero()) out.push_back(PolyTerm{a[i].exps, std::move(c)});
                ++i;
                ++j;
            }
        }
        *this = make_poly(ring_, std::move(out));
        break;
    }
    }
    return *this;
}

Element operator-(const Element& x)
{
    const RingData& d = *x.ring().data();
    switch (d.kind) {
    case RingKind::Integers: return Element(x.ring(), mpz_class(-x.integer()));
    case RingKind::Rationals: return Element(x.ring(), mpq_class(-x.rational()));
    case RingKind::ModN: {
        if (x.integer() == 0) return x;
        return Element(x.ring(), mpz_class(d.modulus - x.integer()));
    }
    case RingKind::FiniteField:
        return Element(x.ring(), detail::ff_neg(d, x.field_index()));
    case RingKind::ParamPoly: {
        PolyTerms out = x.poly_terms();
        for (auto& t : out) t.coeff = -t.coeff;
        return make_poly(x.ring(), std::move(out));
    }
    }
    return x;
}

Element& Element::operator-=(const Element& y) { return *this += -y; }

Element& Element::operator*=(const Element& y)
{
    require_same(*this, y);
    const RingData& d = *ring_.data();
    switch (d.kind) {
    case RingKind::Integers: std::get<mpz_class>(payload_) *= y.integer(); break;
    case RingKind::Rationals: std::get<mpq_class>(payload_) *= y.rational(); break;
    case RingKind::ModN: {
        auto& v = std::get<mpz_class>(payload_);
        v *= y.integer();
        v %= d.modulus;
        break;
    }
    case RingKind::FiniteField:
        payload_ = detail::ff_mul(d, field_index(), y.field_index());
        break;
    case RingKind::ParamPoly: {
        const PolyTerms& a = poly_terms();
        const PolyTerms& b = y.poly_terms();
        if (a.empty() || b.empty()) {
            *this = make_poly(ring_, {});
            break;
        }
        std::map<std::vector<std::uint32_t>, Element, GrlexLess> acc;
        const std::size_t r = d.params.size();
        std::vector<std::uint32_t> e(r);
        for (const auto& s : a) {
            for (const auto& t : b) {
                for (std::size_t i = 0; i < r; ++i) e[i] = s.exps[i] + t.exps[i];
                Element c = s.coeff * t.coeff;
                auto it = acc.find(e);
                if (it == acc.end()) {
                    acc.emplace(e, std::move(c));
                } else {
                    it->second += c;
                }
            }
        }
        *this = poly_from_map(ring_, acc);
        break;
    }
    }
    return *this;
}

bool operator==(const Element& x, const Element& y)
{
    if (!(x.ring() == y.ring())) return false;
    switch (x.ring().kind()) {
    case RingKind::Integers:
    case RingKind::ModN: return x.integer() == y.integer();
    case RingKind::Rationals: return x.rational() == y.rational();
    case RingKind::FiniteField: return x.field_index() == y.field_index();
    case RingKind::ParamPoly: {
        const auto& a = x.poly_terms();
        const auto& b = y.poly_terms();
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].exps != b[i].exps || !(a[i].coeff == b[i].coeff)) return false;
        }
        return true;
    }
    }
    return false;
}

int compare(const Element& x, const Element& y)
{
    require_same(x, y);
    switch (x.ring().kind()) {
    case RingKind::Integers:
    case RingKind::ModN: return cmp(x.integer(), y.integer());
    case RingKind::Rationals: return cmp(x.rational(), y.rational());
    case RingKind::FiniteField:
        return x.field_index() < y.field_index() ? -1
               : x.field_index() > y.field_index() ? 1 : 0;
    case RingKind::ParamPoly: {
        const auto& a = x.poly_terms();
        const auto& b = y.poly_terms();
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
            if (a[i].exps != b[i].exps) return grlex_less(a[i].exps, b[i].exps) ? -1 : 1;
            if (int c = compare(a[i].coeff, b[i].coeff)) return c;
        }
        return a.size() < b.size() ? -1 : a.size() > b.size() ? 1 : 0;
    }
    }
    return 0;
}

std::string Element::to_string() const
{
    const RingData& d = *ring_.data();
    switch (d.kind) {
    case RingKind::Integers:
    case RingKind::ModN: return integer().get_str();
    case RingKind::Rationals: return rational().get_str();
    case RingKind::FiniteField: {
        if (d.k == 1) return std::to_string(field_index());
        const auto digits = detail::ff_digits(d, field_index());
        std::string s;
        for (std::size_t j = digits.size(); j-- > 0;) {
            if (digits[j] == 0) continue;
            if (!s.empty()) s += "+";
            if (j == 0) {
                s += std::to_string(digits[j]);
                continue;
            }
            if (digits[j] != 1) s += std::to_string(digits[j]) + "*";
            s += j == 1 ? "x" : fmt::format("x^{}", j);
        }
        return s.empty() ? "0" : s;
    }
    case RingKind::ParamPoly: {
        const auto& terms = poly_terms();
        if (terms.empty()) return "0";
        std::string s;
        for (std::size_t i = terms.size(); i-- > 0;) {
            const auto& t = terms[i];
            std::string mono;
            for (std::size_t v = 0; v < t.exps.size(); ++v) {
                if (t.exps[v] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += d.params[v];
                if (t.exps[v] > 1) mono += fmt::format("^{}", t.exps[v]);
            }
            std::string c = t.coeff.to_string();
            std::string term;
            if (mono.empty()) {
                term = c;
            } else if (t.coeff.is_one()) {
                term = mono;
            } else if (c == "-1") {
                term = "-" + mono;
            } else {
                term = wrap(c) + "*" + mono;
            }
            if (s.empty()) {
                s = term;
            } else if (term[0] == '-') {
                s += " - " + term.substr(1);
            } else {
                s += " + " + term;
            }
        }
        return s;
    }
    }
    return "?";
}

// ---------------------------------------------------------------- free ops

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (u64 small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % small == 0) return n == small;
    }
    using u128 = unsigned __int128;
    auto mulmod = [n](u64 a, u64 b) { return static_cast<u64>((u128)a * b % n); };
    auto powmod = [&](u64 a, u64 e) {
        u64 r = 1;
        while (e) {
            if (e & 1) r = mulmod(r, a);
            a = mulmod(a, a);
            e >>= 1;
        }
        return r;
    };
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u64 x = powmod(a, d);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool is_nilpotent(const Element& x)
{
    switch (x.ring().kind()) {
    case RingKind::ModN: {
        const mpz_class& m = x.ring().modulus();
        const auto bits = mpz_sizeinbase(m.get_mpz_t(), 2);
        mpz_class r;
        mpz_powm_ui(r.get_mpz_t(), x.integer().get_mpz_t(), bits, m.get_mpz_t());
        return r == 0;
    }
    case RingKind::ParamPoly:
        return std::all_of(x.poly_terms().begin(), x.poly_terms().end(),
                           [](const PolyTerm& t) { return is_nilpotent(t.coeff); });
    default: return x.is_zero();
    }
}

std::optional<Element> inverse(const Element& x)
{
    const Ring& r = x.ring();
    const RingData& d = *r.data();
    switch (d.kind) {
    case RingKind::Integers:
        if (x.integer() == 1 || x.integer() == -1) return x;
        return std::nullopt;
    case RingKind::Rationals:
        if (x.rational() == 0) return std::nullopt;
        return Element(r, mpq_class(1 / x.rational()));
    case RingKind::ModN: {
        mpz_class inv;
        if (d.modulus == 1) return r.zero();
        if (mpz_invert(inv.get_mpz_t(), x.integer().get_mpz_t(),
                       d.modulus.get_mpz_t()) == 0) {
            return std::nullopt;
        }
        return Element(r, inv);
    }
    case RingKind::FiniteField:
        if (x.field_index() == 0) return std::nullopt;
        return Element(r, detail::ff_inv(d, x.field_index()));
    case RingKind::ParamPoly: {
        const auto& terms = x.poly_terms();
        if (terms.empty()) return std::nullopt;
        // Unit iff constant term is a unit and every other coefficient is
        // nilpotent; then invert c0 + N as c0^-1 * sum (-c0^-1 N)^k.
        const auto& first = terms.front();
        const bool has_const =
            std::all_of(first.exps.begin(), first.exps.end(),
                        [](std::uint32_t e) { return e == 0; });
        if (!has_const) return std::nullopt;
        auto c0_inv = inverse(first.coeff);
        if (!c0_inv) return std::nullopt;
        PolyTerms rest(terms.begin() + 1, terms.end());
        for (const auto& t : rest) {
            if (!is_nilpotent(t.coeff)) return std::nullopt;
        }
        const Element c0i = make_poly(r, {PolyTerm{first.exps, *c0_inv}});
        const Element step = -(c0i * make_poly(r, std::move(rest)));
        Element sum = r.one();
        Element power = r.one();
        for (;;) {
            power *= step;
            if (power.is_zero()) break;
            sum += power;
        }
        return c0i * sum;
    }
    }
    return std::nullopt;
}

Element divide(const Element& x, const Element& y)
{
    require_same(x, y);
    if (auto inv = inverse(y)) return x * *inv;
    const Ring& r = x.ring();
    switch (r.kind()) {
    case RingKind::Integers:
        if (y.integer() != 0 && mpz_divisible_p(x.integer().get_mpz_t(),
                                                y.integer().get_mpz_t())) {
            mpz_class q;
            mpz_divexact(q.get_mpz_t(), x.integer().get_mpz_t(),
                         y.integer().get_mpz_t());
            return Element(r, q);
        }
        break;
    case RingKind::ParamPoly: {
        if (y.is_zero()) break;
        // Exact multivariate division by leading terms.
        Element rem = x;
        Element quot = r.zero();
        const PolyTerm& ly = y.poly_terms().back();
        while (!rem.is_zero()) {
            const PolyTerm& lr = rem.poly_terms().back();
            std::vector<std::uint32_t> e(lr.exps.size());
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (lr.exps[i] < ly.exps[i]) {
                    throw Error(ErrorKind::DivisionUndefined,
                                x.to_string() + " / " + y.to_string());
                }
                e[i] = lr.exps[i] - ly.exps[i];
            }
            const Element t = make_poly(r, {PolyTerm{e, divide(lr.coeff, ly.coeff)}});
            quot += t;
            rem -= t * y;
        }
        return quot;
    }
    default: break;
    }
    throw Error(ErrorKind::DivisionUndefined, x.to_string() + " / " + y.to_string());
}

Element pow(const Element& x, const mpz_class& e)
{
    if (e < 0) throw Error(ErrorKind::InvalidInput, "negative exponent");
    if (x.ring().is_finite_field()) {
        return Element(x.ring(), detail::ff_pow(*x.ring().data(), x.field_index(), e));
    }
    Element r = x.ring().one();
    Element b = x;
    const std::size_t bits = e == 0 ? 0 : mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = 0; i < bits; ++i) {
        if (mpz_tstbit(e.get_mpz_t(), i)) r *= b;
        if (i + 1 < bits) b *= b;
    }
    return r;
}

Element pow(const Element& x, unsigned long e) { return pow(x, mpz_class(e)); }

Element frobenius(const Element& x, std::uint64_t p, unsigned e)
{
    const Ring& r = x.ring();
    if (!is_prime(p) || r.characteristic() != mpz_u64(p)) {
        throw Error(ErrorKind::CharacteristicMismatch,
                    fmt::format("{} does not have characteristic {}", r.to_string(), p));
    }
    switch (r.kind()) {
    case RingKind::ModN: return x;  // Z/p: Fermat
    case RingKind::FiniteField: {
        Element y = x;
        const unsigned k = r.extension_degree();
        for (unsigned i = 0; i < e % k; ++i) y = pow(y, mpz_u64(p));
        return y;
    }
    case RingKind::ParamPoly: {
        mpz_class pe;
        mpz_ui_pow_ui(pe.get_mpz_t(), p, e);
        PolyTerms out;
        for (const auto& t : x.poly_terms()) {
            PolyTerm nt{t.exps, frobenius(t.coeff, p, e)};
            for (auto& ex : nt.exps) {
                mpz_class v = pe * ex;
                if (!v.fits_uint_p() || v > 0xffffffffu) {
                    throw Error(ErrorKind::InvalidInput, "exponent overflow");
                }
                ex = static_cast<std::uint32_t>(v.get_ui());
            }
            out.push_back(std::move(nt));
        }
        // exponent scaling preserves the graded-lex order
        return make_poly(r, std::move(out));
    }
    default: break;
    }
    return x;
}

Element scale(const Element& x, const mpz_class& d) { return x * x.ring().from_int(d); }

std::optional<Element> solve_scalar(const mpz_class& d, const Element& c)
{
    const Ring& r = c.ring();
    switch (r.kind()) {
    case RingKind::Integers:
        if (d == 0) return c.is_zero() ? std::optional(r.zero()) : std::nullopt;
        if (!mpz_divisible_p(c.integer().get_mpz_t(), d.get_mpz_t())) return std::nullopt;
        return Element(r, mpz_class(c.integer() / d));
    case RingKind::Rationals:
        if (d == 0) return c.is_zero() ? std::optional(r.zero()) : std::nullopt;
        return Element(r, mpq_class(c.rational() / mpq_class(d)));
    case RingKind::ModN: {
        const mpz_class& m = r.modulus();
        mpz_class dm = d % m;
        if (dm < 0) dm += m;
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), dm.get_mpz_t(), m.get_mpz_t());
        if (!mpz_divisible_p(c.integer().get_mpz_t(), g.get_mpz_t())) return std::nullopt;
        const mpz_class m2 = m / g;
        if (m2 == 1) return r.zero();
        mpz_class inv;
        mpz_class dg = dm / g;
        mpz_invert(inv.get_mpz_t(), dg.get_mpz_t(), m2.get_mpz_t());
        mpz_class y = (c.integer() / g) * inv % m2;
        return Element(r, y);
    }
    case RingKind::FiniteField: {
        const Element dd = r.from_int(d);
        if (dd.is_zero()) return c.is_zero() ? std::optional(r.zero()) : std::nullopt;
        return c * *inverse(dd);
    }
    case RingKind::ParamPoly: {
        PolyTerms out;
        for (const auto& t : c.poly_terms()) {
            auto y = solve_scalar(d, t.coeff);
            if (!y) return std::nullopt;
            if (!y->is_zero()) out.push_back(PolyTerm{t.exps, std::move(*y)});
        }
        return make_poly(r, std::move(out));
    }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- maps

namespace {

std::mutex embed_mutex;

// Image of the generator x of `src` in `tgt`: the first root of src's modulus
// in canonical order.
u64 embedding_root(const RingData& src, const RingData& tgt)
{
    static std::map<std::pair<const RingData*, const RingData*>, u64> cache;
    {
        std::lock_guard lock(embed_mutex);
        auto it = cache.find({&src, &tgt});
        if (it != cache.end()) return it->second;
    }
    if (tgt.q > (u64{1} << 24)) {
        throw Error(ErrorKind::EmbeddingUndefined, "target field too large for root search");
    }
    for (u64 a = 0; a < tgt.q; ++a) {
        u64 v = 0;
        for (std::size_t j = src.poly.size(); j-- > 0;) {
            v = detail::ff_add(tgt, detail::ff_mul(tgt, v, a), src.poly[j]);
        }
        if (v == 0) {
            std::lock_guard lock(embed_mutex);
            cache.emplace(std::pair{&src, &tgt}, a);
            return a;
        }
    }
    throw Error(ErrorKind::EmbeddingUndefined, "no root of the modulus");
}

[[noreturn]] void no_map(const Ring& s, const Ring& t)
{
    throw Error(ErrorKind::EmbeddingUndefined,
                fmt::format("no canonical map {} -> {}", s.to_string(), t.to_string()));
}

} // namespace

Element canonical_map(const Element& x, const Ring& target)
{
    const Ring& src = x.ring();
    if (src == target) return x;
    if (target.is_param_poly() && !src.is_param_poly()) {
        Element c = canonical_map(x, target.base());
        if (c.is_zero()) return make_poly(target, {});
        return make_poly(target, {PolyTerm{std::vector<std::uint32_t>(
                                               target.params().size(), 0),
                                           std::move(c)}});
    }
    switch (src.kind()) {
    case RingKind::Integers: return target.from_int(x.integer());
    case RingKind::Rationals: {
        const mpq_class& v = x.rational();
        switch (target.kind()) {
        case RingKind::Rationals: return Element(target, v);
        case RingKind::ModN:
        case RingKind::FiniteField: {
            const Element den = target.from_int(v.get_den());
            auto inv = inverse(den);
            if (!inv) {
                throw Error(ErrorKind::NotPIntegral,
                            fmt::format("{} has a denominator not invertible in {}",
                                        v.get_str(), target.to_string()));
            }
            return target.from_int(v.get_num()) * *inv;
        }
        default: no_map(src, target);
        }
    }
    case RingKind::ModN: {
        const mpz_class tc = target.characteristic();
        if ((target.kind() == RingKind::ModN || target.is_finite_field()) &&
            mpz_divisible_p(src.modulus().get_mpz_t(), tc.get_mpz_t())) {
            return target.from_int(x.integer());
        }
        no_map(src, target);
    }
    case RingKind::FiniteField: {
        if (!target.is_finite_field() || target.prime() != src.prime() ||
            target.extension_degree() % src.extension_degree() != 0) {
            no_map(src, target);
        }
        if (src.extension_degree() == 1) return target.from_int(mpz_u64(x.field_index()));
        const RingData& sd = *src.data();
        const RingData& td = *target.data();
        const u64 root = embedding_root(sd, td);
        const auto digits = detail::ff_digits(sd, x.field_index());
        u64 v = 0;
        for (std::size_t j = digits.size(); j-- > 0;) {
            v = detail::ff_add(td, detail::ff_mul(td, v, root), digits[j]);
        }
        return Element(target, v);
    }
    case RingKind::ParamPoly: {
        // Parameters missing from the target are allowed as long as x does
        // not involve them; a non-parameter target takes constants only.
        static const std::vector<std::string> kNoParams;
        const auto& sp = src.params();
        const auto& tp = target.is_param_poly() ? target.params() : kNoParams;
        constexpr std::size_t kMissing = static_cast<std::size_t>(-1);
        std::vector<std::size_t> where(sp.size(), kMissing);
        for (std::size_t i = 0; i < sp.size(); ++i) {
            auto it = std::find(tp.begin(), tp.end(), sp[i]);
            if (it != tp.end()) where[i] = static_cast<std::size_t>(it - tp.begin());
        }
        if (!target.is_param_poly()) {
            Element out = target.zero();
            for (const auto& t : x.poly_terms()) {
                for (auto e : t.exps) {
                    if (e != 0) no_map(src, target);
                }
                out += canonical_map(t.coeff, target);
            }
            return out;
        }
        const Ring tb = target.base();
        std::map<std::vector<std::uint32_t>, Element, GrlexLess> acc;
        for (const auto& t : x.poly_terms()) {
            Element c = canonical_map(t.coeff, tb);
            if (c.is_zero()) continue;
            std::vector<std::uint32_t> e(tp.size(), 0);
            for (std::size_t i = 0; i < sp.size(); ++i) {
                if (t.exps[i] == 0) continue;
                if (where[i] == kMissing) no_map(src, target);
                e[where[i]] = t.exps[i];
            }
            auto [it, fresh] = acc.try_emplace(e, c);
            if (!fresh) it->second += c;
        }
        return poly_from_map(target, acc);
    }
    }
    no_map(src, target);
}

RingHom RingHom::canonical(Ring source, Ring target)
{
    return RingHom(source, target, {});
}

RingHom RingHom::specialization(Ring source, std::vector<Element> values, Ring target)
{
    if (!source.is_param_poly() || values.size() != source.params().size()) {
        throw Error(ErrorKind::InvalidInput,
                    "specialization needs one value per parameter");
    }
    for (const auto& v : values) {
        if (!(v.ring() == target)) {
            throw Error(ErrorKind::DescriptorMismatch,
                        "specialization value outside the target ring");
        }
    }
    RingHom h(source, target, std::move(values));
    h.specialize_ = true;
    return h;
}

Element RingHom::operator()(const Element& x) const
{
    if (!(x.ring() == source_)) {
        throw Error(ErrorKind::DescriptorMismatch,
                    "element is not in the source of the map");
    }
    if (!specialize_) return canonical_map(x, target_);
    Element out = target_.zero();
    for (const auto& t : x.poly_terms()) {
        Element term = canonical_map(t.coeff, target_);
        for (std::size_t i = 0; i < t.exps.size(); ++i) {
            if (t.exps[i]) term *= pow(values_[i], static_cast<unsigned long>(t.exps[i]));
        }
        out += term;
    }
    return out;
}

} // namespace budlaw
