#include "budlaw/json_io.hpp"

#include <charconv>

#include <fmt/format.h>

namespace budlaw::io {

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw Error(ErrorKind::InvalidInput, what);
}

std::uint64_t to_u64(const std::string& s, const std::string& what)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) bad(fmt::format("bad {}: '{}'", what, s));
    return v;
}

std::uint64_t json_u64(const json& j, const std::string& what)
{
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<std::uint64_t>(j.get<long long>());
    if (j.is_string()) return to_u64(j.get<std::string>(), what);
    bad(fmt::format("{} must be a non-negative integer", what));
}

mpz_class parse_mpz(const std::string& s)
{
    mpz_class v;
    if (s.empty() || v.set_str(s, 10) != 0) bad(fmt::format("bad integer '{}'", s));
    return v;
}

std::string scalar_text(const json& j)
{
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    bad(fmt::format("expected a number string, got {}", j.dump()));
}

Element scalar_from_text(const std::string& s, const Ring& r)
{
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
        const mpz_class v = parse_mpz(s);
        if (r.kind() == RingKind::Rationals) return r.from_rational(mpq_class(v));
        return r.from_int(v);
    }
    const mpz_class num = parse_mpz(s.substr(0, slash)), den = parse_mpz(s.substr(slash + 1));
    if (den == 0) bad(fmt::format("zero denominator in '{}'", s));
    mpq_class q(num, den);
    q.canonicalize();
    return r.from_rational(q);
}

std::string param_monomial(const std::vector<std::uint32_t>& e, const std::vector<std::string>& names)
{
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += '*';
        out += names[i];
        if (e[i] > 1) out += fmt::format("^{}", e[i]);
    }
    return out.empty() ? "1" : out;
}

Element param_monomial_value(const std::string& s, const Ring& r)
{
    Element out = r.one();
    if (s == "1") return out;
    const auto& names = r.params();
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto star = s.find('*', pos);
        const std::string factor = s.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
        const auto caret = factor.find('^');
        const std::string name = factor.substr(0, caret);
        const unsigned long e = caret == std::string::npos ? 1 : to_u64(factor.substr(caret + 1), "exponent");
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) bad(fmt::format("unknown parameter '{}'", name));
        out *= pow(r.param(static_cast<std::size_t>(it - names.begin())), e);
        if (star == std::string::npos) break;
        pos = star + 1;
    }
    return out;
}

} // namespace

json ring_to_json(const Ring& r)
{
    switch (r.kind()) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::ModN: return json{{"mod", r.modulus().get_str()}};
    case RingKind::FiniteField: return json{{"gf", json::array({r.prime(), r.extension_degree()})}};
    case RingKind::ParamPoly:
        return json{{"poly", json{{"base", ring_to_json(r.base())}, {"params", r.params()}}}};
    }
    return nullptr;
}

Ring ring_from_json(const json& j)
{
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "Z") return Ring::integers();
        if (s == "Q") return Ring::rationals();
        return parse_ring_spec(s);
    }
    if (!j.is_object() || j.size() != 1) bad(fmt::format("bad ring descriptor {}", j.dump()));
    if (j.contains("mod")) return Ring::mod_n(parse_mpz(scalar_text(j["mod"])));
    if (j.contains("gf")) {
        const json& g = j["gf"];
        if (!g.is_array() || g.size() != 2) bad("gf descriptor must be [p, k]");
        return Ring::finite_field(json_u64(g[0], "p"), static_cast<unsigned>(json_u64(g[1], "k")));
    }
    if (j.contains("poly")) {
        const json& p = j["poly"];
        if (!p.contains("base") || !p.contains("params")) bad("poly descriptor needs base and params");
        return Ring::param_poly(ring_from_json(p["base"]), p["params"].get<std::vector<std::string>>());
    }
    bad(fmt::format("bad ring descriptor {}", j.dump()));
}

Ring parse_ring_spec(const std::string& spec)
{
    if (spec == "z" || spec == "Z") return Ring::integers();
    if (spec == "q" || spec == "Q") return Ring::rationals();
    if (spec.starts_with("mod:")) return Ring::mod_n(parse_mpz(spec.substr(4)));
    if (spec.starts_with("gf:")) {
        const std::string rest = spec.substr(3);
        const auto caret = rest.find('^');
        const std::uint64_t p = to_u64(rest.substr(0, caret), "prime");
        const unsigned k = caret == std::string::npos ? 1 : static_cast<unsigned>(to_u64(rest.substr(caret + 1), "degree"));
        return Ring::finite_field(p, k);
    }
    if (spec.starts_with("poly:")) {
        const auto open = spec.rfind('[');
        if (open == std::string::npos || spec.back() != ']') bad(fmt::format("bad ring spec '{}'", spec));
        const Ring base = parse_ring_spec(spec.substr(5, open - 5));
        const std::string list = spec.substr(open + 1, spec.size() - open - 2);
        std::vector<std::string> names;
        if (const auto dots = list.find(".."); dots != std::string::npos) {
            // t1..t3
            const std::string a = list.substr(0, dots), b = list.substr(dots + 2);
            std::size_t i = 0;
            while (i < a.size() && i < b.size() && a[i] == b[i] && !std::isdigit(static_cast<unsigned char>(a[i]))) ++i;
            const std::string stem = a.substr(0, i);
            const std::uint64_t lo = to_u64(a.substr(i), "parameter index"), hi = to_u64(b.substr(i), "parameter index");
            for (std::uint64_t k = lo; k <= hi; ++k) names.push_back(fmt::format("{}{}", stem, k));
        } else {
            std::size_t pos = 0;
            while (pos <= list.size()) {
                const auto comma = list.find(',', pos);
                std::string name = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
                if (!name.empty()) names.push_back(std::move(name));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        }
        return Ring::param_poly(base, std::move(names));
    }
    bad(fmt::format("unknown ring spec '{}'", spec));
}

json element_to_json(const Element& x)
{
    const Ring& r = x.ring();
    switch (r.kind()) {
    case RingKind::Integers:
    case RingKind::ModN: return x.integer().get_str();
    case RingKind::Rationals: return x.rational().get_str();
    case RingKind::FiniteField: {
        std::uint64_t idx = x.field_index();
        if (r.extension_degree() == 1) return std::to_string(idx);
        json out = json::object();
        for (unsigned i = 0; idx > 0; ++i, idx /= r.prime()) {
            if (idx % r.prime() != 0) out[std::to_string(i)] = std::to_string(idx % r.prime());
        }
        return out;
    }
    case RingKind::ParamPoly: {
        json out = json::object();
        for (const PolyTerm& t : x.poly_terms()) out[param_monomial(t.exps, r.params())] = element_to_json(t.coeff);
        return out;
    }
    }
    return nullptr;
}

Element element_from_json(const json& j, const Ring& r)
{
    switch (r.kind()) {
    case RingKind::Integers:
    case RingKind::Rationals:
    case RingKind::ModN: return scalar_from_text(scalar_text(j), r);
    case RingKind::FiniteField: {
        if (!j.is_object()) return scalar_from_text(scalar_text(j), r);
        Element out = r.zero();
        const Element x = r.extension_degree() == 1 ? r.one() : r.field_generator();
        for (const auto& [k, v] : j.items()) {
            out += scalar_from_text(scalar_text(v), r) * pow(x, static_cast<unsigned long>(to_u64(k, "power")));
        }
        return out;
    }
    case RingKind::ParamPoly: {
        if (!j.is_object()) return canonical_map(element_from_json(j, r.base()), r);
        Element out = r.zero();
        for (const auto& [k, v] : j.items()) {
            out += canonical_map(element_from_json(v, r.base()), r) * param_monomial_value(k, r);
        }
        return out;
    }
    }
    bad("unknown ring");
}

json series_to_json(const TruncPoly& f)
{
    json terms = json::array();
    for (const Term& t : f.terms()) {
        terms.push_back(json::array({t.mono.exponents(f.vars()), element_to_json(t.coeff)}));
    }
    return json{{"ring", ring_to_json(f.ring())}, {"vars", f.vars()}, {"bound", f.bound()}, {"terms", terms}};
}

TruncPoly series_from_json(const json& j, const Ring* ring)
{
    if (!j.is_object() || !j.contains("terms") || !j.contains("bound")) {
        bad("a series needs \"bound\" and \"terms\"");
    }
    if (!j.contains("ring") && !ring) bad("series without a ring; pass --ring");
    const Ring own = j.contains("ring") ? ring_from_json(j["ring"]) : *ring;
    const unsigned bound = static_cast<unsigned>(json_u64(j["bound"], "bound"));
    unsigned vars = 0;
    if (j.contains("vars")) {
        vars = static_cast<unsigned>(json_u64(j["vars"], "vars"));
    } else if (!j["terms"].empty()) {
        vars = static_cast<unsigned>(j["terms"][0][0].size());
    } else {
        bad("series without terms needs \"vars\"");
    }
    if (vars == 0 || vars > 6) bad(fmt::format("unsupported number of variables {}", vars));
    std::vector<Term> terms;
    for (const json& t : j["terms"]) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_array() || t[0].size() != vars) {
            bad(fmt::format("bad term {}", t.dump()));
        }
        std::vector<unsigned> e;
        unsigned deg = 0;
        for (const json& x : t[0]) {
            e.push_back(static_cast<unsigned>(json_u64(x, "exponent")));
            deg += e.back();
        }
        if (deg > bound) bad(fmt::format("term {} exceeds the bound {}", t.dump(), bound));
        terms.push_back({Monomial::from_exponents(e), element_from_json(t[1], own)});
    }
    TruncPoly f = TruncPoly::from_terms(own, vars, bound, std::move(terms));
    if (ring && !(*ring == own)) f = map_coefficients(f, RingHom::canonical(own, *ring));
    return f;
}

json law_to_json(const BudLaw& X)
{
    return json{{"ring", ring_to_json(X.ring())}, {"n", X.n()}, {"F", series_to_json(X.F())}, {"validated", true}};
}

BudLaw law_from_json(const json& j, const Ring* ring)
{
    if (j.is_object() && j.contains("law")) return law_from_json(j["law"], ring);
    if (j.is_object() && j.contains("F")) {
        json F = j["F"];
        if (!F.contains("ring") && j.contains("ring")) F["ring"] = j["ring"];
        if (!F.contains("bound") && j.contains("n")) F["bound"] = j["n"];
        const TruncPoly f = series_from_json(F, ring);
        if (f.vars() != 2) bad("a law is a series in 2 variables");
        return BudLaw::validate(f);
    }
    const TruncPoly f = series_from_json(j, ring);
    if (f.vars() != 2) bad("a law is a series in 2 variables");
    return BudLaw::validate(f);
}

json endo_to_json(const Endo& f)
{
    return json{{"ring", ring_to_json(f.f().ring())}, {"n", f.f().bound()}, {"f", series_to_json(f.f())}, {"verified", true}};
}

} // namespace budlaw::io
