#include "budlaw/lazard.hpp"

#include <fmt/format.h>

#include <map>
#include <memory>
#include <mutex>

#include "budlaw/smith.hpp"

namespace budlaw {

namespace {

TruncPoly var(const Ring& r, unsigned vars, unsigned bound, unsigned i)
{
    return TruncPoly::variable(r, vars, bound, i);
}

mpz_class binomial(unsigned m, unsigned i)
{
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), m, i);
    return b;
}

Monomial mono2(unsigned a, unsigned b)
{
    const unsigned e[] = {a, b};
    return Monomial::from_exponents(e);
}

struct BezoutVector {
    std::vector<mpz_class> u;  // u[i] pairs with coeff(C_m, T1^i T2^(m-i)), i = 1..m-1
};

BezoutVector bezout_for(unsigned m)
{
    const mpz_class lam = lambda_of(m);
    BezoutVector out;
    out.u.assign(m, 0);
    mpz_class g = 0;
    for (unsigned i = 1; i < m; ++i) {
        const mpz_class c = binomial(m, i) / lam;
        mpz_class g2, s, t;
        mpz_gcdext(g2.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        for (auto& x : out.u) x *= s;
        out.u[i] = t;
        g = g2;
    }
    if (g != 1) throw std::logic_error("C_m is not primitive");
    return out;
}

// The coboundary matrix for degree N: rows are degree-N monomials in x,y,z,
// columns the symmetric basis T1^a T2^(N-a) (+ mirror), 1 <= a <= N/2.
struct CoboundarySystem {
    std::vector<Monomial> rows;
    std::vector<unsigned> cols;  // a
    SmithForm snf;
};

TruncPoly basis_element(const Ring& r, unsigned N, unsigned bound, unsigned a)
{
    TruncPoly g = TruncPoly::monomial(r, 2, bound, mono2(a, N - a), r.one());
    if (2 * a != N) g += TruncPoly::monomial(r, 2, bound, mono2(N - a, a), r.one());
    return g;
}

const CoboundarySystem& coboundary_system(unsigned N)
{
    static std::mutex mu;
    static std::map<unsigned, std::unique_ptr<CoboundarySystem>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[N];
    if (slot) return *slot;
    auto sys = std::make_unique<CoboundarySystem>();
    const Ring z = Ring::integers();
    for (unsigned a = 0; a <= N; ++a) {
        for (unsigned b = 0; a + b <= N; ++b) {
            const unsigned e[] = {a, b, N - a - b};
            sys->rows.push_back(Monomial::from_exponents(e));
        }
    }
    std::sort(sys->rows.begin(), sys->rows.end());
    for (unsigned a = 1; 2 * a <= N; ++a) sys->cols.push_back(a);
    IntMatrix M(sys->rows.size(), std::vector<mpz_class>(sys->cols.size(), 0));
    for (std::size_t c = 0; c < sys->cols.size(); ++c) {
        const TruncPoly d = coboundary(basis_element(z, N, N, sys->cols[c]));
        for (std::size_t i = 0; i < sys->rows.size(); ++i) {
            M[i][c] = d.coefficient(sys->rows[i]).integer();
        }
    }
    sys->snf = smith_normal_form(M, sys->rows.size(), sys->cols.size());
    slot = std::move(sys);
    return *slot;
}

std::string param_name(unsigned i) { return fmt::format("t{}", i); }

} // namespace

std::uint64_t lambda_of(unsigned m)
{
    if (m < 2) return 1;
    for (std::uint64_t l = 2; l <= m; ++l) {
        if (m % l != 0) continue;
        // l is the least prime factor
        std::uint64_t r = m;
        while (r % l == 0) r /= l;
        return r == 1 ? l : 1;
    }
    return 1;
}

TruncPoly b_poly(unsigned m, const Ring& r, unsigned bound)
{
    if (bound == 0) bound = m;
    std::vector<Term> terms;
    for (unsigned i = 1; i < m; ++i) terms.push_back({mono2(i, m - i), r.from_int(binomial(m, i))});
    return TruncPoly::from_terms(r, 2, bound, std::move(terms));
}

TruncPoly c_poly(unsigned m, const Ring& r, unsigned bound)
{
    if (bound == 0) bound = m;
    const mpz_class lam = lambda_of(m);
    std::vector<Term> terms;
    for (unsigned i = 1; i < m; ++i) {
        terms.push_back({mono2(i, m - i), r.from_int(mpz_class(binomial(m, i) / lam))});
    }
    return TruncPoly::from_terms(r, 2, bound, std::move(terms));
}

TruncPoly coboundary(const TruncPoly& G)
{
    const Ring& r = G.ring();
    const unsigned n = G.bound();
    const TruncPoly x = var(r, 3, n, 0), y = var(r, 3, n, 1), z = var(r, 3, n, 2);
    return substitute(G, {y, z}) - substitute(G, {x + y, z}) + substitute(G, {x, y + z}) -
           substitute(G, {x, y});
}

bool is_spc(const TruncPoly& P, unsigned m)
{
    if (P.vars() != 2) return false;
    for (const auto& t : P.terms()) {
        if (t.mono.degree() != m) return false;
    }
    const unsigned swap[] = {1, 0};
    if (!(P == relabel_vars(P, 2, swap))) return false;
    return coboundary(P).is_zero();
}

Element spc_multiplier(const TruncPoly& P, unsigned m)
{
    if (P.vars() != 2 || m < 2 || m > P.bound()) {
        throw Error(ErrorKind::ShapeMismatch, "cocycle shape does not match its degree");
    }
    const Ring& r = P.ring();
    static std::mutex mu;
    static std::map<unsigned, BezoutVector> cache;
    BezoutVector bz;
    {
        std::lock_guard lock(mu);
        auto it = cache.find(m);
        if (it == cache.end()) it = cache.emplace(m, bezout_for(m)).first;
        bz = it->second;
    }
    Element a = r.zero();
    for (unsigned i = 1; i < m; ++i) {
        if (bz.u[i] == 0) continue;
        a += scale(P.coefficient(mono2(i, m - i)), bz.u[i]);
    }
    if (!(P == c_poly(m, r, P.bound()) * a)) {
        throw Error(ErrorKind::NotMultipleOfC,
                    fmt::format("polynomial is not a multiple of C_{}", m), {}, m);
    }
    return a;
}

TruncPoly assoc_defect(const TruncPoly& F)
{
    const unsigned N = F.bound() + 1;
    const Ring& r = F.ring();
    const TruncPoly Ft = F.lifted(N);
    const TruncPoly x = var(r, 3, N, 0), y = var(r, 3, N, 1), z = var(r, 3, N, 2);
    const TruncPoly lhs = substitute(Ft, {substitute(Ft, {x, y}), z});
    const TruncPoly rhs = substitute(Ft, {x, substitute(Ft, {y, z})});
    return (lhs - rhs).homogeneous_part(N);
}

BudLaw extend_one_degree(const BudLaw& X)
{
    const Ring& r = X.ring();
    const unsigned N = X.n() + 1;
    if (N > Monomial::kMaxBound) throw Error(ErrorKind::ShapeMismatch, "order too large");
    const TruncPoly delta = assoc_defect(X.F());
    const CoboundarySystem& sys = coboundary_system(N);
    const SmithForm& snf = sys.snf;
    const std::size_t R = sys.rows.size(), C = sys.cols.size();

    std::vector<Element> rhs(R);
    for (std::size_t i = 0; i < R; ++i) rhs[i] = delta.coefficient(sys.rows[i]);

    // D y = U rhs, then x = V y.
    std::vector<Element> y(C, r.zero());
    for (std::size_t i = 0; i < R; ++i) {
        Element b = r.zero();
        for (std::size_t j = 0; j < R; ++j) {
            if (snf.U[i][j] != 0 && !rhs[j].is_zero()) b += scale(rhs[j], snf.U[i][j]);
        }
        const mpz_class d = i < C ? snf.diag[i] : mpz_class(0);
        auto s = solve_scalar(d, b);
        if (!s) {
            throw Error(ErrorKind::NoExtension,
                        fmt::format("no symmetric cochain extends the law to order {}", N), {},
                        N);
        }
        if (i < C) y[i] = *s;
    }
    TruncPoly G = X.F().lifted(N);
    for (std::size_t c = 0; c < C; ++c) {
        Element xc = r.zero();
        for (std::size_t i = 0; i < C; ++i) {
            if (snf.V[c][i] != 0 && !y[i].is_zero()) xc += scale(y[i], snf.V[c][i]);
        }
        if (!xc.is_zero()) G += basis_element(r, N, N, sys.cols[c]) * xc;
    }
    return BudLaw::validate(G);
}

Ring universal_ring(unsigned n)
{
    std::vector<std::string> names;
    for (unsigned i = 1; i < n; ++i) names.push_back(param_name(i));
    return Ring::param_poly(Ring::integers(), std::move(names));
}

const UniversalLaw& universal_law(unsigned n)
{
    if (n < 1) throw Error(ErrorKind::InvalidInput, "order must be at least 1");
    static std::mutex mu;
    static std::map<unsigned, std::unique_ptr<UniversalLaw>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (slot) return *slot;
    const Ring R = universal_ring(n);
    BudLaw law = BudLaw::additive(R, 1);
    for (unsigned m = 2; m <= n; ++m) {
        const BudLaw ext = extend_one_degree(law);
        law = BudLaw::validate(ext.F() + c_poly(m, R) * R.param(m - 2));
    }
    slot = std::make_unique<UniversalLaw>(UniversalLaw{n, law});
    return *slot;
}

BudLaw specialize(const UniversalLaw& U, const std::vector<Element>& values,
                  const Ring& target)
{
    if (values.size() + 1 != U.n) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("order {} needs {} parameter values", U.n, U.n - 1));
    }
    return base_change(U.law, RingHom::specialization(U.law.ring(), values, target));
}

std::vector<Element> classify(const BudLaw& X)
{
    const Ring& r = X.ring();
    std::vector<Element> tau;
    for (unsigned m = 2; m <= X.n(); ++m) {
        const UniversalLaw& U = universal_law(m);
        std::vector<Element> vals = tau;
        vals.push_back(r.zero());
        const RingHom hom = RingHom::specialization(U.law.ring(), vals, r);
        const TruncPoly diff = X.F().truncated(m) - map_coefficients(U.law.F(), hom);
        tau.push_back(spc_multiplier(diff, m));
    }
    return tau;
}

HeightGeLaw universal_height_ge(std::uint64_t p, unsigned h, unsigned n)
{
    if (!is_prime(p)) throw Error(ErrorKind::NotPrime, fmt::format("{} is not prime", p));
    if (h < 1) throw Error(ErrorKind::InvalidInput, "height must be at least 1");
    std::uint64_t ph = 1;
    for (unsigned i = 0; i < h; ++i) ph *= p;
    if (n < ph) {
        throw Error(ErrorKind::TruncationTooShallow,
                    fmt::format("order {} is below p^h = {}", n, ph));
    }
    const UniversalLaw& U = universal_law(n);
    const Ring fp = Ring::finite_field(p, 1);
    Ring cur = Ring::param_poly(fp, U.law.ring().params());
    BudLaw law = base_change(U.law, RingHom::canonical(U.law.ring(), cur));

    HeightGeLaw out{law, {}, false};
    std::uint64_t pj = 1;
    for (unsigned j = 1; j <= h; ++j) {
        pj *= p;
        const unsigned k = static_cast<unsigned>(pj - 1);
        const auto& names = cur.params();
        const auto pos = std::find(names.begin(), names.end(), param_name(k));
        if (pos == names.end()) throw std::logic_error("parameter already eliminated");
        const std::size_t idx = static_cast<std::size_t>(pos - names.begin());

        const Element a = m_series(law, p).f().coefficient(static_cast<unsigned>(pj));
        // a = c * t_k + (terms in t_i, i < k)
        Element c = fp.zero();
        bool ok = true;
        Element rest = cur.zero();
        for (const auto& t : a.poly_terms()) {
            bool later = false;
            for (std::size_t i = 0; i < names.size(); ++i) {
                if (t.exps[i] == 0) continue;
                const unsigned ti = static_cast<unsigned>(std::stoul(names[i].substr(1)));
                if (ti >= k) later = true;
            }
            if (!later) {
                rest += Element(cur, std::make_shared<const PolyTerms>(PolyTerms{t}));
                continue;
            }
            bool linear = t.exps[idx] == 1;
            for (std::size_t i = 0; i < names.size() && linear; ++i) {
                if (i != idx && t.exps[i] != 0) linear = false;
            }
            if (linear) {
                c = t.coeff;
            } else {
                ok = false;
            }
        }
        mpz_class expected;
        mpz_ui_pow_ui(expected.get_mpz_t(), p, k);
        expected -= 1;
        const Element want = fp.from_int(expected);
        ok = ok && is_unit(c) && c == want;
        out.steps.push_back(ShapeStep{j, k, c, ok, a.to_string()});
        if (j == h) break;
        if (!ok) {
            throw Error(ErrorKind::ShapeViolation,
                        fmt::format("coefficient of T^{} in [{}] is not a unit multiple of {} "
                                    "plus earlier terms: {}",
                                    pj, p, param_name(k), a.to_string()),
                        {}, static_cast<unsigned>(pj));
        }
        std::vector<std::string> kept;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i != idx) kept.push_back(names[i]);
        }
        const Ring next = Ring::param_poly(fp, kept);
        const Element cinv = canonical_map(-*inverse(c), next);
        std::vector<Element> vals;
        std::size_t kk = 0;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i == idx) {
                vals.push_back(canonical_map(rest, next) * cinv);
            } else {
                vals.push_back(next.param(kk++));
            }
        }
        law = base_change(law, RingHom::specialization(cur, vals, next));
        cur = next;
    }
    out.law = law;
    const TruncPoly ps = m_series(law, p).f();
    out.lower_vanish = ps.is_zero() || ps.min_degree() >= ph;
    return out;
}

} // namespace budlaw
