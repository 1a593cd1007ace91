#include "budlaw/isomorphy.hpp"

#include <fmt/format.h>

#include "budlaw/honda.hpp"
#include "budlaw/lazard.hpp"

namespace budlaw {

namespace {

BudLaw over_field(const BudLaw& X, const Ring& field)
{
    if (X.ring() == field) return X;
    return base_change(X, RingHom::canonical(X.ring(), field));
}

class IsoSearch {
public:
    IsoSearch(const BudLaw& X, const BudLaw& Y) : n_(X.n()), p_(X.ring().prime()), r_(X.ring())
    {
        tx_.resize(n_ + 1, X);
        ty_.resize(n_ + 1, Y);
        lambda_inv_.resize(n_ + 1, r_.zero());
        for (unsigned m = 1; m <= n_; ++m) {
            tx_[m] = truncate_law(X, m);
            ty_[m] = truncate_law(Y, m);
            if (!log_p(m, p_)) lambda_inv_[m] = *inverse(r_.from_int(static_cast<long>(lambda_of(m))));
        }
        elems_ = r_.field_elements();
    }

    std::optional<TruncPoly> run() { return dfs(TruncPoly(r_, 1, n_), 1); }

private:
    Element defect_at(const TruncPoly& g, unsigned m) const
    {
        const TruncPoly d = defect(g.truncated(m), tx_[m], ty_[m]).homogeneous_part(m);
        return d.is_zero() ? r_.zero() : spc_multiplier(d, m);
    }

    std::optional<TruncPoly> dfs(TruncPoly g, unsigned m) const
    {
        for (; m <= n_; ++m) {
            const Element a = defect_at(g, m);
            if (log_p(m, p_)) {
                if (!a.is_zero()) return std::nullopt;
                for (const Element& c : elems_) {
                    if (m == 1 && c.is_zero()) continue;
                    TruncPoly next = g;
                    if (!c.is_zero()) next += TruncPoly::monomial(r_, 1, n_, Monomial::power(0, m), c);
                    if (auto f = dfs(std::move(next), m + 1)) return f;
                }
                return std::nullopt;
            }
            if (!a.is_zero()) g += TruncPoly::monomial(r_, 1, n_, Monomial::power(0, m), -(a * lambda_inv_[m]));
        }
        return g;
    }

    unsigned n_;
    std::uint64_t p_;
    Ring r_;
    std::vector<BudLaw> tx_, ty_;
    std::vector<Element> lambda_inv_;
    std::vector<Element> elems_;
};

} // namespace

IsoResult find_iso(const BudLaw& X, const BudLaw& Y, const Ring& field)
{
    if (!field.is_finite_field()) {
        throw Error(ErrorKind::InvalidInput, fmt::format("isomorphism search needs a finite field, got {}", field.to_string()));
    }
    if (X.n() != Y.n()) {
        throw Error(ErrorKind::LawMismatch, fmt::format("orders differ: {} and {}", X.n(), Y.n()));
    }
    const BudLaw x = over_field(X, field), y = over_field(Y, field);
    IsoSearch s(x, y);
    auto f = s.run();
    if (!f) return IsoNotFoundOverBase{};
    return IsoFound{Endo(std::move(*f), x, y), field, 1};
}

IsoResult trivialize_height_h(const BudLaw& X, unsigned h, unsigned max_ext)
{
    const Ring& base = X.ring();
    if (!base.is_finite_field()) {
        throw Error(ErrorKind::InvalidInput, fmt::format("trivialization needs a finite field, got {}", base.to_string()));
    }
    const std::uint64_t p = base.prime();
    const HeightClass cls = height(X, p);
    const auto* ht = std::get_if<Height>(&cls);
    if (!ht || ht->h != h) {
        throw Error(ErrorKind::HeightMismatch, fmt::format("law does not have height {}", h));
    }
    if (max_ext == 0) {
        max_ext = 1;
        for (unsigned i = 0; i < h; ++i) max_ext *= static_cast<unsigned>(p);
    }
    const HondaLaw H = honda_law(p, h, X.n());
    for (unsigned d = 1; d <= max_ext; ++d) {
        const Ring field = Ring::finite_field(p, base.extension_degree() * d);
        IsoResult r = find_iso(X, honda_over(H, field), field);
        if (auto* found = std::get_if<IsoFound>(&r)) {
            found->degree = d;
            return r;
        }
    }
    return IsoFailed{"BoundExceeded"};
}

Endo log_to_additive(const BudLaw& X)
{
    const Ring& r = X.ring();
    if (!r.is_q_algebra()) {
        throw Error(ErrorKind::NotQAlgebra, fmt::format("{} is not a Q-algebra", r.to_string()));
    }
    const unsigned n = X.n();
    const BudLaw A = BudLaw::additive(r, n);
    TruncPoly f = TruncPoly::variable(r, 1, n, 0);
    for (unsigned m = 2; m <= n; ++m) {
        const TruncPoly d = defect(f, X, A).homogeneous_part(m);
        if (d.is_zero()) continue;
        const Element a = spc_multiplier(d, m);
        f -= TruncPoly::monomial(r, 1, n, Monomial::power(0, m),
                                 divide(a, r.from_int(static_cast<long>(lambda_of(m)))));
    }
    return Endo(std::move(f), X, A);
}

} // namespace budlaw
