#include "budlaw/honda.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "budlaw/lazard.hpp"

namespace budlaw {

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned e)
{
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

bool is_p_power(unsigned m, std::uint64_t p) { return log_p(m, p).has_value(); }

// The degree-by-degree search over one field. trunc[m] is H^(m).
class Search {
public:
    Search(const BudLaw& H, std::uint64_t p) : H_(H), p_(p), N_(H.n())
    {
        trunc_.resize(N_ + 1, H);
        lambda_inv_.resize(N_ + 1, H.ring().zero());
        for (unsigned m = 1; m <= N_; ++m) {
            trunc_[m] = truncate_law(H, m);
            if (!is_p_power(m, p)) {
                lambda_inv_[m] = *inverse(H.ring().from_int(static_cast<long>(lambda_of(m))));
            }
        }
        elems_ = H.ring().field_elements();
    }

    unsigned order() const { return N_; }
    const Ring& ring() const { return H_.ring(); }

    TruncPoly zero() const { return TruncPoly(ring(), 1, N_); }
    TruncPoly mono(unsigned m, const Element& c) const
    {
        return TruncPoly::monomial(ring(), 1, N_, Monomial::power(0, m), c);
    }

    // g is a homomorphism through degree m-1; the multiplier of C_m in its
    // degree-m defect.
    Element defect_at(const TruncPoly& g, unsigned m) const
    {
        const TruncPoly gm = g.truncated(m);
        const TruncPoly d = defect(gm, trunc_[m], trunc_[m]).homogeneous_part(m);
        if (d.is_zero()) return ring().zero();
        return spc_multiplier(d, m);
    }

    // Applies the forced step at a non-p-power degree; at p-power degrees
    // returns false if the defect survives.
    bool step_forced(TruncPoly& g, unsigned m) const
    {
        const Element a = defect_at(g, m);
        if (is_p_power(m, p_)) return a.is_zero();
        if (!a.is_zero()) g += mono(m, -(a * lambda_inv_[m]));
        return true;
    }

    // Full enumeration from degree m through stop; at stop+1.. the branch only
    // needs to extend to the search order.
    template <class Emit>
    void enumerate(TruncPoly g, unsigned m, unsigned stop, Emit& emit) const
    {
        for (; m <= stop; ++m) {
            if (is_p_power(m, p_)) {
                if (!defect_at(g, m).is_zero()) return;
                for (const Element& c : elems_) {
                    TruncPoly next = g;
                    if (!c.is_zero()) next += mono(m, c);
                    enumerate(std::move(next), m + 1, stop, emit);
                }
                return;
            }
            step_forced(g, m);
        }
        if (stop >= N_ || extends(g, stop + 1)) emit(g);
    }

    // Whether g (a homomorphism through m-1) extends to order N.
    bool extends(TruncPoly g, unsigned m) const
    {
        for (; m <= N_; ++m) {
            if (is_p_power(m, p_)) {
                if (!defect_at(g, m).is_zero()) return false;
                for (const Element& c : elems_) {
                    TruncPoly next = g;
                    if (!c.is_zero()) next += mono(m, c);
                    if (extends(std::move(next), m + 1)) return true;
                }
                return false;
            }
            step_forced(g, m);
        }
        return true;
    }

    // Collect search states at degree split (branching below it) for the
    // threads to finish.
    void prefixes(TruncPoly g, unsigned m, unsigned split, std::vector<std::pair<TruncPoly, unsigned>>& out) const
    {
        for (; m < split; ++m) {
            if (is_p_power(m, p_)) {
                if (!defect_at(g, m).is_zero()) return;
                for (const Element& c : elems_) {
                    TruncPoly next = g;
                    if (!c.is_zero()) next += mono(m, c);
                    prefixes(std::move(next), m + 1, split, out);
                }
                return;
            }
            step_forced(g, m);
        }
        out.emplace_back(std::move(g), m);
    }

private:
    BudLaw H_;
    std::uint64_t p_;
    unsigned N_;
    std::vector<BudLaw> trunc_;
    std::vector<Element> lambda_inv_;
    std::vector<Element> elems_;
};

std::vector<std::uint64_t> coeff_key(const TruncPoly& f)
{
    std::vector<std::uint64_t> k(f.bound(), 0);
    for (const Term& t : f.terms()) k[t.mono.degree() - 1] = t.coeff.field_index();
    return k;
}

// Endomorphisms of the search's law, truncated to order stop, each of which
// extends to the search order.
std::vector<TruncPoly> run_search(const Search& s, std::uint64_t p, unsigned stop, unsigned jobs)
{
    std::vector<std::pair<TruncPoly, unsigned>> tasks;
    const unsigned split = std::min<unsigned>(stop, static_cast<unsigned>(std::min<std::uint64_t>(p, stop))) + 1;
    s.prefixes(s.zero(), 1, split, tasks);

    std::vector<std::vector<TruncPoly>> found(tasks.size());
    auto work = [&](std::size_t t) {
        auto emit = [&](const TruncPoly& g) { found[t].push_back(g.truncated(stop)); };
        s.enumerate(tasks[t].first, tasks[t].second, stop, emit);
    };
    if (jobs <= 1 || tasks.size() <= 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) work(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(jobs);
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back([&, j] {
                try {
                    for (std::size_t t; (t = next++) < tasks.size();) work(t);
                } catch (...) {
                    errs[j] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errs) {
            if (e) std::rethrow_exception(e);
        }
    }
    std::vector<TruncPoly> out;
    for (auto& v : found) {
        for (auto& g : v) out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

void require_field_over(const Ring& field, std::uint64_t p)
{
    if (!field.is_finite_field() || field.prime() != p) {
        throw Error(ErrorKind::CharacteristicMismatch,
                    fmt::format("need a finite field of characteristic {}, got {}", p, field.to_string()));
    }
}

} // namespace

unsigned floor_log(std::uint64_t p, unsigned n)
{
    unsigned l = 0;
    std::uint64_t q = p;
    while (q <= n) {
        ++l;
        q *= p;
    }
    return l;
}

HondaLaw honda_law(std::uint64_t p, unsigned h, unsigned n)
{
    if (!is_prime(p)) throw Error(ErrorKind::NotPrime, fmt::format("{} is not prime", p));
    if (h == 0) throw Error(ErrorKind::InvalidInput, "height must be positive");
    if (n == 0) throw Error(ErrorKind::InvalidInput, "order must be positive");
    const Ring Q = Ring::rationals();
    TruncPoly log(Q, 1, n);
    {
        std::uint64_t deg = 1;
        mpz_class den = 1;
        while (deg <= n) {
            log += TruncPoly::monomial(Q, 1, n, Monomial::power(0, static_cast<unsigned>(deg)),
                                       Q.from_rational(mpq_class(1, den)));
            deg *= ipow(p, h);
            den *= p;
        }
    }
    const TruncPoly finv = compositional_inverse(log);
    const unsigned s0[] = {0}, s1[] = {1};
    const TruncPoly FQ = substitute(finv, {relabel_vars(log, 2, s0) + relabel_vars(log, 2, s1)});
    BudLaw rational = BudLaw::validate(FQ);

    const Ring Fp = Ring::finite_field(p, 1);
    BudLaw law = BudLaw::validate(map_coefficients(FQ, RingHom::canonical(Q, Fp)));

    const std::uint64_t ph = ipow(p, h);
    TruncPoly want(Fp, 1, n);
    if (ph <= n) want = TruncPoly::monomial(Fp, 1, n, Monomial::power(0, static_cast<unsigned>(ph)), Fp.one());
    const TruncPoly got = m_series(law, p).f();
    if (!(got == want)) {
        throw Error(ErrorKind::ShapeViolation,
                    fmt::format("[{}] = {} is not {}", p, got.to_string(), want.to_string()));
    }
    return HondaLaw{p, h, n, std::move(law), std::move(log), std::move(rational)};
}

BudLaw honda_over(const HondaLaw& H, const Ring& field)
{
    require_field_over(field, H.p);
    return base_change(H.law, RingHom::canonical(H.law.ring(), field));
}

Endo lift_endomorphism(const HondaLaw& H, const Ring& field, unsigned j, const Element& a)
{
    const BudLaw over = honda_over(H, field);
    const Element c = canonical_map(a, field);
    const std::uint64_t start = ipow(H.p, j);
    if (start > H.n) {
        throw Error(ErrorKind::InvalidInput, fmt::format("p^j = {} exceeds the order {}", start, H.n));
    }
    const Search s(over, H.p);
    TruncPoly g = c.is_zero() ? s.zero() : s.mono(static_cast<unsigned>(start), c);
    for (unsigned m = static_cast<unsigned>(start) + 1; m <= H.n; ++m) {
        if (!s.step_forced(g, m)) {
            throw Error(ErrorKind::Obstructed,
                        fmt::format("defect survives at degree {}", m), {}, m);
        }
    }
    return Endo(std::move(g), over);
}

bool canonical_less(const TruncPoly& f, const TruncPoly& g)
{
    return coeff_key(f) < coeff_key(g);
}

EndoSet enumerate_endos(const HondaLaw& H, const Ring& field, unsigned jobs)
{
    const BudLaw over = honda_over(H, field);
    const Search s(over, H.p);
    std::vector<TruncPoly> elems = run_search(s, H.p, H.n, jobs);
    for (const TruncPoly& f : elems) Endo(f, over);  // re-verify
    return EndoSet{H.p, H.h, H.n, field, over, floor_log(H.p, H.n), std::move(elems)};
}

std::uint64_t count_mu(const Ring& field, std::uint64_t p, unsigned h)
{
    const std::uint64_t e = ipow(p, h) - 1;
    std::uint64_t c = 0;
    for (const Element& a : field.field_elements()) {
        if (!a.is_zero() && pow(a, static_cast<unsigned long>(e)).is_one()) ++c;
    }
    return c;
}

std::uint64_t count_fix(const Ring& field, std::uint64_t p, unsigned h)
{
    std::uint64_t c = 0;
    for (const Element& a : field.field_elements()) {
        if (frobenius(a, p, h) == a) ++c;
    }
    return c;
}

AutGroup aut_group(const HondaLaw& H, const Ring& field, unsigned jobs)
{
    EndoSet endos = enumerate_endos(H, field, jobs);
    const unsigned n = H.n;
    std::vector<TruncPoly> units;
    for (const TruncPoly& f : endos.elements) {
        if (!f.coefficient(1u).is_zero()) units.push_back(f);
    }

    FiltrationReport rep;
    rep.mu_count = count_mu(field, H.p, H.h);
    rep.fix_count = count_fix(field, H.p, H.h);
    const unsigned l = endos.l;
    const std::uint64_t q = field.field_size();

    // A_i = {f : f = T mod degree i+1}
    auto in_A = [&](const TruncPoly& f, unsigned i) {
        if (i == 0) return !f.coefficient(1u).is_zero();
        if (!f.coefficient(1u).is_one()) return false;
        for (unsigned d = 2; d <= i && d <= n; ++d) {
            if (!f.coefficient(d).is_zero()) return false;
        }
        return true;
    };
    std::vector<std::uint64_t> order(n + 1, 0);
    for (unsigned i = 0; i <= n; ++i) {
        for (const TruncPoly& f : units) order[i] += in_A(f, i) ? 1 : 0;
    }
    rep.all_match = true;
    for (unsigned i = 0; i <= n; ++i) {
        FiltrationLevel lv{i, order[i], 0, 1, "trivial", true};
        if (i < n) {
            lv.quotient = order[i + 1] == 0 ? 0 : order[i] / order[i + 1];
            if (i == 0) {
                if (H.h <= l) {
                    lv.kind = "mu";
                    lv.predicted = rep.mu_count;
                } else {
                    lv.kind = "gm";
                    lv.predicted = q - 1;
                }
            } else if (auto j = log_p(i + 1, H.p); j && *j >= 1) {
                if (*j + H.h <= l) {
                    lv.kind = "fix";
                    lv.predicted = rep.fix_count;
                } else {
                    lv.kind = "ga";
                    lv.predicted = q;
                }
            }
            lv.match = lv.quotient == lv.predicted && order[i] % std::max<std::uint64_t>(order[i + 1], 1) == 0;
        } else {
            lv.quotient = order[n];
            lv.match = order[n] == 1;
        }
        rep.all_match = rep.all_match && lv.match;
        rep.levels.push_back(lv);
    }

    // normality
    rep.normal = true;
    std::vector<TruncPoly> inv;
    inv.reserve(units.size());
    for (const TruncPoly& g : units) inv.push_back(compositional_inverse(g));
    for (unsigned i = 1; i <= n && rep.normal; ++i) {
        for (const TruncPoly& a : units) {
            if (!in_A(a, i)) continue;
            for (std::size_t k = 0; k < units.size() && rep.normal; ++k) {
                const TruncPoly c = substitute(units[k], {substitute(a, {inv[k]})});
                if (!in_A(c, i)) rep.normal = false;
            }
        }
    }

    // f -> T +_H f from I_i onto A_i
    rep.bijection = true;
    const TruncPoly T = TruncPoly::variable(field, 1, n, 0);
    for (unsigned i = 1; i <= n && rep.bijection; ++i) {
        std::set<std::vector<std::uint64_t>> image;
        for (const TruncPoly& f : endos.elements) {
            if (!(f.is_zero() || f.min_degree() > i)) continue;
            const TruncPoly u = endos.over.apply(T, f);
            if (!in_A(u, i)) rep.bijection = false;
            image.insert(coeff_key(u));
        }
        if (image.size() != order[i]) rep.bijection = false;
    }
    rep.all_match = rep.all_match && rep.normal && rep.bijection;
    return AutGroup{std::move(endos), std::move(units), std::move(rep)};
}

std::size_t FiniteRing::index_of(const TruncPoly& f) const
{
    auto it = lookup.find(coeff_key(f));
    if (it == lookup.end()) {
        throw Error(ErrorKind::InvalidInput, fmt::format("{} is not an element of the ring", f.to_string()));
    }
    return it->second;
}

std::vector<std::size_t> FiniteRing::units() const
{
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < size(); ++x) {
        for (std::size_t y = 0; y < size(); ++y) {
            if (mul[x][y] == one && mul[y][x] == one) {
                out.push_back(x);
                break;
            }
        }
    }
    return out;
}

std::size_t FiniteRing::neg(std::size_t x) const
{
    for (std::size_t y = 0; y < size(); ++y) {
        if (add[x][y] == zero) return y;
    }
    throw Error(ErrorKind::InvalidInput, "element without additive inverse");
}

FiniteRing make_finite_ring(const BudLaw& H, std::vector<TruncPoly> elements)
{
    FiniteRing R;
    std::sort(elements.begin(), elements.end(), canonical_less);
    R.elements = std::move(elements);
    for (std::size_t i = 0; i < R.size(); ++i) R.lookup.emplace(coeff_key(R.elements[i]), i);
    const Ring& r = H.ring();
    R.zero = R.index_of(TruncPoly(r, 1, H.n()));
    R.one = R.index_of(TruncPoly::variable(r, 1, H.n(), 0));
    const std::size_t s = R.size();
    R.add.assign(s, std::vector<std::size_t>(s));
    R.mul.assign(s, std::vector<std::size_t>(s));
    for (std::size_t x = 0; x < s; ++x) {
        for (std::size_t y = 0; y < s; ++y) {
            R.add[x][y] = R.index_of(H.apply(R.elements[x], R.elements[y]));
            R.mul[x][y] = R.index_of(substitute(R.elements[x], {R.elements[y]}));
        }
    }
    return R;
}

QuotientRing quotient_ring(const HondaLaw& H_N, unsigned n, const Ring& field, unsigned jobs)
{
    const unsigned N = H_N.n;
    const unsigned l = floor_log(H_N.p, n);
    const std::uint64_t need = ipow(H_N.p, l + H_N.h);
    if (N < n || N < need) {
        throw Error(ErrorKind::OrderTooSmall,
                    fmt::format("order {} is below max(n, p^(l+h)) = {}", N, std::max<std::uint64_t>(n, need)), {},
                    static_cast<unsigned>(std::max<std::uint64_t>(n, need)));
    }
    const BudLaw over = honda_over(H_N, field);
    const Search s(over, H_N.p);
    std::vector<TruncPoly> elems = run_search(s, H_N.p, n, jobs);
    const BudLaw small = truncate_law(over, n);
    QuotientRing Q{n, N, l, make_finite_ring(small, std::move(elems)), {}, 0, false};
    Q.units = Q.ring.units();
    Q.expected = ipow(count_fix(field, H_N.p, H_N.h), l + 1);
    Q.size_ok = Q.ring.size() == Q.expected;
    return Q;
}

UnitQuotientReport unit_quotient_check(const FiniteRing& R, unsigned i, unsigned j)
{
    UnitQuotientReport rep{i, j, true, true, true, {}};
    if (i == 0 || j < i) {
        throw Error(ErrorKind::InvalidInput, fmt::format("need 1 <= i <= j, got i={} j={}", i, j));
    }
    const std::size_t s = R.size();
    auto in_I = [&](std::size_t x, unsigned k) {
        const TruncPoly& f = R.elements[x];
        return f.is_zero() || f.min_degree() > k;
    };
    std::vector<std::size_t> I, J;
    for (std::size_t x = 0; x < s; ++x) {
        if (in_I(x, i)) I.push_back(x);
        if (in_I(x, j)) J.push_back(x);
    }
    for (std::size_t x : I) {
        for (std::size_t y : I) {
            if (!in_I(R.mul[x][y], j)) rep.square_in_j = false;
        }
    }
    if (!rep.square_in_j) rep.failures.push_back("I_i * I_i is not inside I_j");

    const std::size_t minus_one = R.neg(R.one);
    auto one_plus = [&](std::size_t x, unsigned k) { return in_I(R.add[x][minus_one], k); };
    const std::vector<std::size_t> units = R.units();
    std::vector<bool> is_unit(s, false);
    for (std::size_t u : units) is_unit[u] = true;
    auto inv = [&](std::size_t u) {
        for (std::size_t v : units) {
            if (R.mul[u][v] == R.one) return v;
        }
        return s;
    };

    // part 1: cosets mod I_i
    std::vector<std::size_t> cls(s);
    for (std::size_t x = 0; x < s; ++x) {
        std::size_t best = s;
        for (std::size_t y : I) best = std::min(best, R.add[x][y]);
        cls[x] = best;
    }
    std::set<std::size_t> classes(cls.begin(), cls.end());
    std::set<std::size_t> unit_classes;
    for (std::size_t c : classes) {
        for (std::size_t d : classes) {
            if (cls[R.mul[c][d]] == cls[R.one] && cls[R.mul[d][c]] == cls[R.one]) {
                unit_classes.insert(c);
                break;
            }
        }
    }
    std::set<std::size_t> image, kernel, oneI;
    for (std::size_t u : units) {
        image.insert(cls[u]);
        if (cls[u] == cls[R.one]) kernel.insert(u);
    }
    for (std::size_t x = 0; x < s; ++x) {
        if (one_plus(x, i)) oneI.insert(x);
    }
    for (std::size_t x : oneI) {
        if (!is_unit[x]) {
            rep.part1 = false;
            rep.failures.push_back("1 + I_i contains a non-unit");
            break;
        }
    }
    if (image != unit_classes) {
        rep.part1 = false;
        rep.failures.push_back("reduction R^x -> (R/I_i)^x is not onto");
    }
    if (kernel != oneI) {
        rep.part1 = false;
        rep.failures.push_back("kernel of the reduction is not 1 + I_i");
    }
    if (oneI.empty() || units.size() % oneI.size() != 0 || units.size() / oneI.size() != unit_classes.size()) {
        rep.part1 = false;
        rep.failures.push_back("|R^x / (1 + I_i)| differs from |(R/I_i)^x|");
    }

    // part 2: x -> 1 + x, I_i / I_j against (1 + I_i) / (1 + J)
    std::set<std::size_t> oneJ;
    for (std::size_t x = 0; x < s; ++x) {
        if (one_plus(x, j)) oneJ.insert(x);
    }
    auto lift = [&](std::size_t x) { return R.add[R.one][x]; };
    bool hom = true;
    for (std::size_t x : I) {
        for (std::size_t y : I) {
            const std::size_t prod = R.mul[lift(x)][lift(y)];
            const std::size_t w = inv(prod);
            if (w == s || !oneJ.count(R.mul[w][lift(R.add[x][y])])) hom = false;
        }
        if (!hom) break;
    }
    if (!hom) {
        rep.part2 = false;
        rep.failures.push_back("x -> 1 + x is not a homomorphism modulo 1 + I_j");
    }
    for (std::size_t x : I) {
        if (oneJ.count(lift(x)) != static_cast<std::size_t>(in_I(x, j))) {
            rep.part2 = false;
            rep.failures.push_back("kernel of x -> 1 + x is not I_j");
            break;
        }
    }
    if (J.empty() || oneJ.empty() || I.size() / J.size() != oneI.size() / oneJ.size()) {
        rep.part2 = false;
        rep.failures.push_back("|I_i / I_j| differs from |(1 + I_i) / (1 + I_j)|");
    }
    return rep;
}

} // namespace budlaw
