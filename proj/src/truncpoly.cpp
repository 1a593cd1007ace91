#include "budlaw/truncpoly.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include <fmt/format.h>

namespace budlaw {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::from_exponents(std::span<const unsigned> e)
{
    if (e.size() > kMaxVars) {
        throw Error(ErrorKind::ShapeMismatch, "too many variables");
    }
    std::uint64_t key = 0;
    unsigned deg = 0;
    for (unsigned i = 0; i < e.size(); ++i) {
        if (e[i] > 255) throw Error(ErrorKind::ShapeMismatch, "exponent too large");
        key |= std::uint64_t{e[i]} << (8 * (6 - i));
        deg += e[i];
    }
    if (deg > 255) throw Error(ErrorKind::ShapeMismatch, "degree too large");
    Monomial m;
    m.key_ = key | (std::uint64_t{deg} << 56);
    return m;
}

Monomial Monomial::power(unsigned var, unsigned e)
{
    std::vector<unsigned> ex(var + 1, 0);
    ex[var] = e;
    return from_exponents(ex);
}

std::vector<unsigned> Monomial::exponents(unsigned vars) const
{
    std::vector<unsigned> e(vars);
    for (unsigned i = 0; i < vars; ++i) e[i] = exponent(i);
    return e;
}

// ---------------------------------------------------------------- helpers

class TermAccumulator {
public:
    explicit TermAccumulator(std::size_t hint = 0) { acc_.reserve(hint); }

    void add(Monomial m, Element c)
    {
        auto [it, fresh] = acc_.try_emplace(m.key(), c);
        if (!fresh) it->second += c;
    }

    void finish(TruncPoly& out)
    {
        out.terms_.clear();
        out.terms_.reserve(acc_.size());
        for (auto& [k, c] : acc_) {
            if (c.is_zero()) continue;
            out.terms_.push_back(Term{Monomial::from_key(k), std::move(c)});
        }
        std::sort(out.terms_.begin(), out.terms_.end(),
                  [](const Term& a, const Term& b) { return a.mono < b.mono; });
    }

private:
    std::unordered_map<std::uint64_t, Element> acc_;
};

namespace {

std::string wrap_coeff(const std::string& s)
{
    if (s.find_first_of("+ *") != std::string::npos ||
        (s.size() > 1 && s.find('-', 1) != std::string::npos) ||
        s.find('/') != std::string::npos) {
        return "(" + s + ")";
    }
    return s;
}

} // namespace

// ---------------------------------------------------------------- TruncPoly

TruncPoly::TruncPoly(Ring ring, unsigned vars, unsigned bound)
    : ring_(ring), vars_(vars), bound_(bound)
{
    if (vars == 0 || vars > Monomial::kMaxVars) {
        throw Error(ErrorKind::ShapeMismatch, fmt::format("unsupported variable count {}", vars));
    }
    if (bound > Monomial::kMaxBound) {
        throw Error(ErrorKind::ShapeMismatch, fmt::format("unsupported bound {}", bound));
    }
}

TruncPoly TruncPoly::variable(Ring ring, unsigned vars, unsigned bound, unsigned var)
{
    if (var >= vars) throw Error(ErrorKind::ShapeMismatch, "no such variable");
    return monomial(ring, vars, bound, Monomial::power(var, 1), ring.one());
}

TruncPoly TruncPoly::constant(Ring ring, unsigned vars, unsigned bound, const Element& c)
{
    return monomial(ring, vars, bound, Monomial(), c);
}

TruncPoly TruncPoly::monomial(Ring ring, unsigned vars, unsigned bound, Monomial m,
                              const Element& c)
{
    TruncPoly f(ring, vars, bound);
    if (!(c.ring() == ring)) {
        throw Error(ErrorKind::DescriptorMismatch, "coefficient outside the ring");
    }
    if (m.degree() <= bound && !c.is_zero()) f.terms_.push_back(Term{m, c});
    return f;
}

TruncPoly TruncPoly::from_terms(Ring ring, unsigned vars, unsigned bound,
                                std::vector<Term> terms)
{
    TruncPoly f(ring, vars, bound);
    TermAccumulator acc(terms.size());
    for (auto& t : terms) {
        if (!(t.coeff.ring() == ring)) {
            throw Error(ErrorKind::DescriptorMismatch, "coefficient outside the ring");
        }
        for (unsigned i = vars; i < Monomial::kMaxVars; ++i) {
            if (t.mono.exponent(i) != 0) {
                throw Error(ErrorKind::ShapeMismatch, "exponent for a missing variable");
            }
        }
        if (t.mono.degree() <= bound) acc.add(t.mono, std::move(t.coeff));
    }
    acc.finish(f);
    return f;
}

void TruncPoly::check_shape(const TruncPoly& g) const
{
    if (!(ring_ == g.ring_)) {
        throw Error(ErrorKind::DescriptorMismatch,
                    ring_.to_string() + " vs " + g.ring_.to_string());
    }
    if (vars_ != g.vars_ || bound_ != g.bound_) {
        throw Error(ErrorKind::ShapeMismatch,
                    fmt::format("({} vars, bound {}) vs ({} vars, bound {})", vars_,
                                bound_, g.vars_, g.bound_));
    }
}

Element TruncPoly::coefficient(Monomial m) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, Monomial x) { return t.mono < x; });
    if (it != terms_.end() && it->mono == m) return it->coeff;
    return ring_.zero();
}

Element TruncPoly::coefficient(std::span<const unsigned> e) const
{
    if (e.size() != vars_) throw Error(ErrorKind::ShapeMismatch, "exponent length");
    return coefficient(Monomial::from_exponents(e));
}

Element TruncPoly::coefficient(unsigned d) const
{
    if (vars_ != 1) throw Error(ErrorKind::ShapeMismatch, "not a 1-variable series");
    return coefficient(Monomial::power(0, d));
}

unsigned TruncPoly::min_degree() const
{
    return terms_.empty() ? bound_ + 1 : terms_.front().mono.degree();
}

bool TruncPoly::has_zero_constant_term() const { return min_degree() > 0; }

TruncPoly TruncPoly::homogeneous_part(unsigned d) const
{
    if (d > bound_) throw Error(ErrorKind::ShapeMismatch, "degree past the bound");
    TruncPoly out(ring_, vars_, bound_);
    for (const auto& t : terms_) {
        if (t.mono.degree() == d) out.terms_.push_back(t);
    }
    return out;
}

TruncPoly TruncPoly::truncated(unsigned m) const
{
    if (m > bound_) throw Error(ErrorKind::ShapeMismatch, "truncation past the bound");
    TruncPoly out(ring_, vars_, m);
    for (const auto& t : terms_) {
        if (t.mono.degree() <= m) out.terms_.push_back(t);
    }
    return out;
}

TruncPoly TruncPoly::lifted(unsigned m) const
{
    if (m < bound_) throw Error(ErrorKind::ShapeMismatch, "lift below the bound");
    TruncPoly out(ring_, vars_, m);
    out.terms_ = terms_;
    return out;
}

TruncPoly& TruncPoly::operator+=(const TruncPoly& g)
{
    check_shape(g);
    if (g.terms_.empty()) return *this;
    std::vector<Term> out;
    out.reserve(terms_.size() + g.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < g.terms_.size()) {
        if (j == g.terms_.size() ||
            (i < terms_.size() && terms_[i].mono < g.terms_[j].mono)) {
            out.push_back(std::move(terms_[i++]));
        } else if (i == terms_.size() || g.terms_[j].mono < terms_[i].mono) {
            out.push_back(g.terms_[j++]);
        } else {
            Element c = terms_[i].coeff + g.terms_[j].coeff;
            if (!c.is_zero()) out.push_back(Term{terms_[i].mono, std::move(c)});
            ++i;
            ++j;
        }
    }
    terms_ = std::move(out);
    return *this;
}

TruncPoly operator-(TruncPoly f)
{
    for (auto& t : f.terms_) t.coeff = -t.coeff;
    return f;
}

TruncPoly& TruncPoly::operator-=(const TruncPoly& g) { return *this += -g; }

TruncPoly operator*(const TruncPoly& f, const TruncPoly& g)
{
    f.check_shape(g);
    TruncPoly out(f.ring_, f.vars_, f.bound_);
    if (f.terms_.empty() || g.terms_.empty()) return out;
    TermAccumulator acc(f.terms_.size() * 2 + g.terms_.size());
    for (const auto& s : f.terms_) {
        const unsigned room = f.bound_ - s.mono.degree();
        for (const auto& t : g.terms_) {
            if (t.mono.degree() > room) break;  // terms sorted by degree
            acc.add(s.mono * t.mono, s.coeff * t.coeff);
        }
    }
    acc.finish(out);
    return out;
}

TruncPoly& TruncPoly::operator*=(const TruncPoly& g) { return *this = *this * g; }

TruncPoly& TruncPoly::operator*=(const Element& c)
{
    if (!(c.ring() == ring_)) {
        throw Error(ErrorKind::DescriptorMismatch, "scalar outside the ring");
    }
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        Element v = t.coeff * c;
        if (!v.is_zero()) out.push_back(Term{t.mono, std::move(v)});
    }
    terms_ = std::move(out);
    return *this;
}

bool operator==(const TruncPoly& f, const TruncPoly& g)
{
    if (!(f.ring_ == g.ring_) || f.vars_ != g.vars_ || f.bound_ != g.bound_) return false;
    if (f.terms_.size() != g.terms_.size()) return false;
    for (std::size_t i = 0; i < f.terms_.size(); ++i) {
        if (f.terms_[i].mono != g.terms_[i].mono ||
            !(f.terms_[i].coeff == g.terms_[i].coeff)) {
            return false;
        }
    }
    return true;
}

std::string TruncPoly::to_string() const
{
    if (terms_.empty()) return "0";
    // Ascending degree; within a degree, T1 powers first.
    std::vector<const Term*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [](const Term* a, const Term* b) {
        if (a->mono.degree() != b->mono.degree()) return a->mono.degree() < b->mono.degree();
        return b->mono < a->mono;
    });
    std::string s;
    for (const Term* t : order) {
        std::string mono;
        for (unsigned i = 0; i < vars_; ++i) {
            const unsigned e = t->mono.exponent(i);
            if (e == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += vars_ == 1 ? std::string("T") : fmt::format("T{}", i + 1);
            if (e > 1) mono += fmt::format("^{}", e);
        }
        const std::string c = t->coeff.to_string();
        std::string term;
        if (mono.empty()) {
            term = c;
        } else if (c == "1") {
            term = mono;
        } else if (c == "-1") {
            term = "-" + mono;
        } else {
            term = wrap_coeff(c) + "*" + mono;
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

// ---------------------------------------------------------------- free functions

TruncPoly pow(const TruncPoly& f, unsigned e)
{
    TruncPoly r = TruncPoly::constant(f.ring(), f.vars(), f.bound(), f.ring().one());
    TruncPoly b = f;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

namespace {

struct SubstContext {
    const TruncPoly* proto;  // ring / vars / bound of the result
    std::span<const TruncPoly> args;
    std::vector<std::vector<TruncPoly>> powers;  // powers[var][e], lazily grown

    const TruncPoly& power(unsigned var, unsigned e)
    {
        auto& pw = powers[var];
        if (pw.empty()) {
            pw.push_back(TruncPoly::constant(proto->ring(), proto->vars(), proto->bound(),
                                             proto->ring().one()));
        }
        while (pw.size() <= e) pw.push_back(pw.back() * args[var]);
        return pw[e];
    }
};

// Sum over terms of c * prod_{i >= var} args[i]^e_i, grouping by the exponent
// of `var` so each power of args[var] is multiplied in once.
TruncPoly subst_rec(SubstContext& ctx, const std::vector<const Term*>& terms,
                    unsigned var)
{
    const TruncPoly& proto = *ctx.proto;
    TruncPoly out(proto.ring(), proto.vars(), proto.bound());
    if (var == ctx.args.size()) {
        Element c = proto.ring().zero();
        for (const Term* t : terms) c += t->coeff;
        return TruncPoly::constant(proto.ring(), proto.vars(), proto.bound(), c);
    }
    std::map<unsigned, std::vector<const Term*>> groups;
    for (const Term* t : terms) groups[t->mono.exponent(var)].push_back(t);
    const unsigned arg_min = ctx.args[var].min_degree();
    for (const auto& [e, group] : groups) {
        if (e > 0 && static_cast<unsigned long>(e) * arg_min > proto.bound()) continue;
        TruncPoly inner = subst_rec(ctx, group, var + 1);
        if (inner.is_zero()) continue;
        if (e == 0) {
            out += inner;
            continue;
        }
        const TruncPoly& pw = ctx.power(var, e);
        if (inner.terms().size() == 1 && inner.terms()[0].mono.degree() == 0) {
            out += pw * inner.terms()[0].coeff;
        } else {
            out += pw * inner;
        }
    }
    return out;
}

} // namespace

TruncPoly substitute(const TruncPoly& f, std::span<const TruncPoly> args)
{
    if (args.size() != f.vars()) {
        throw Error(ErrorKind::ShapeMismatch,
                    fmt::format("{} arguments for a {}-variable polynomial", args.size(),
                                f.vars()));
    }
    const TruncPoly& proto = args[0];
    for (const auto& a : args) {
        if (!(a.ring() == f.ring()) || !(a.ring() == proto.ring())) {
            throw Error(ErrorKind::DescriptorMismatch, "substitution across rings");
        }
        if (a.vars() != proto.vars() || a.bound() != proto.bound()) {
            throw Error(ErrorKind::ShapeMismatch, "arguments of different shapes");
        }
        if (!a.has_zero_constant_term()) {
            throw Error(ErrorKind::NonzeroConstantTerm,
                        "substituted series must have zero constant term");
        }
    }
    SubstContext ctx{&proto, args, std::vector<std::vector<TruncPoly>>(args.size())};
    std::vector<const Term*> all;
    all.reserve(f.terms().size());
    for (const auto& t : f.terms()) all.push_back(&t);
    return subst_rec(ctx, all, 0);
}

TruncPoly substitute(const TruncPoly& f, std::initializer_list<TruncPoly> args)
{
    return substitute(f, std::span<const TruncPoly>(args.begin(), args.size()));
}

TruncPoly compositional_inverse(const TruncPoly& f)
{
    if (f.vars() != 1) throw Error(ErrorKind::ShapeMismatch, "not a 1-variable series");
    if (!f.has_zero_constant_term()) {
        throw Error(ErrorKind::NonzeroConstantTerm, "series has a constant term");
    }
    const Ring& r = f.ring();
    const unsigned n = f.bound();
    auto a1_inv = inverse(f.coefficient(1u));
    if (!a1_inv) {
        throw Error(ErrorKind::NonUnitLinearTerm,
                    "linear coefficient " + f.coefficient(1u).to_string() + " is not a unit");
    }
    TruncPoly g = TruncPoly::monomial(r, 1, n, Monomial::power(0, 1), *a1_inv);
    for (unsigned m = 2; m <= n; ++m) {
        const TruncPoly fg = substitute(f, {g});
        const Element c = fg.coefficient(m);
        if (!c.is_zero()) {
            g -= TruncPoly::monomial(r, 1, n, Monomial::power(0, m), c * *a1_inv);
        }
    }
    return g;
}

TruncPoly map_coefficients(const TruncPoly& f, const RingHom& phi)
{
    if (!(f.ring() == phi.source())) {
        throw Error(ErrorKind::DescriptorMismatch, "map does not start at the series ring");
    }
    std::vector<Term> terms;
    terms.reserve(f.terms().size());
    for (const auto& t : f.terms()) terms.push_back(Term{t.mono, phi(t.coeff)});
    return TruncPoly::from_terms(phi.target(), f.vars(), f.bound(), std::move(terms));
}

TruncPoly relabel_vars(const TruncPoly& f, unsigned vars, std::span<const unsigned> slots)
{
    if (slots.size() != f.vars()) throw Error(ErrorKind::ShapeMismatch, "slot count");
    std::vector<Term> terms;
    for (const auto& t : f.terms()) {
        std::vector<unsigned> e(vars, 0);
        for (unsigned i = 0; i < f.vars(); ++i) {
            if (slots[i] >= vars) throw Error(ErrorKind::ShapeMismatch, "slot out of range");
            e[slots[i]] += t.mono.exponent(i);
        }
        terms.push_back(Term{Monomial::from_exponents(e), t.coeff});
    }
    return TruncPoly::from_terms(f.ring(), vars, f.bound(), std::move(terms));
}

} // namespace budlaw
