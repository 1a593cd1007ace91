// Acceptance run: one PASS/FAIL line per criterion. Usage: acceptance <path to budlaw>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <unistd.h>

#include <fmt/format.h>

#include "budlaw/honda.hpp"
#include "budlaw/isomorphy.hpp"
#include "budlaw/lazard.hpp"
#include "oracles.hpp"

using namespace budlaw;
using budlaw::testing::random_element;
using budlaw::testing::random_series;
using budlaw::testing::Rng;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

// Collects failures; the first few are kept for the report.
struct Tally {
    unsigned checks = 0;
    unsigned failed = 0;
    std::string first;
    void check(bool ok, const std::string& what)
    {
        ++checks;
        if (!ok) {
            if (failed == 0) first = what;
            ++failed;
        }
    }
    Outcome outcome(const std::string& summary) const
    {
        if (failed == 0) return {true, fmt::format("{} ({} checks)", summary, checks)};
        return {false, fmt::format("{} of {} checks failed; first: {}", failed, checks, first)};
    }
};

std::uint64_t ipow(std::uint64_t b, unsigned e)
{
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

TruncPoly T(const Ring& r, unsigned n) { return TruncPoly::variable(r, 1, n, 0); }

Element random_unit(const Ring& r, Rng& rng)
{
    for (;;) {
        Element u = random_element(r, rng);
        if (is_unit(u)) return u;
    }
}

TruncPoly random_coordinate(const Ring& r, unsigned n, Rng& rng)
{
    return random_series(r, 1, n, rng, 2) + T(r, n) * random_unit(r, rng);
}

BudLaw random_law(const Ring& r, unsigned n, Rng& rng)
{
    std::vector<Element> tau;
    for (unsigned i = 1; i < n; ++i) tau.push_back(random_element(r, rng));
    return specialize(universal_law(n), tau, r);
}

std::set<std::string> as_strings(const std::vector<TruncPoly>& v)
{
    std::set<std::string> s;
    for (const auto& f : v) s.insert(f.to_string());
    return s;
}

// 1. universal laws n = 1..8
Outcome universal_construction()
{
    Tally t;
    for (unsigned n = 1; n <= 8; ++n) {
        const UniversalLaw& U = universal_law(n);
        t.check(!axiom_violation(U.law.F()).has_value(), fmt::format("U({}) fails the axioms", n));
        // parameters t_1..t_(m-1) only in U^(m)
        for (unsigned m = 1; m <= n; ++m) {
            for (const Term& term : U.law.F().terms()) {
                if (term.mono.degree() > m) continue;
                for (const PolyTerm& pt : term.coeff.poly_terms()) {
                    for (std::size_t i = m - 1; i < pt.exps.size(); ++i) {
                        t.check(pt.exps[i] == 0, fmt::format("t{} appears in U({}) below degree {}", i + 1, n, m + 1));
                    }
                }
            }
        }
        if (n < 2) continue;
        auto names = U.law.ring().params();
        names.push_back("s");
        const Ring big = Ring::param_poly(Ring::integers(), names);
        std::vector<Element> vals;
        for (std::size_t i = 0; i + 1 < n; ++i) vals.push_back(big.param(i));
        vals.back() += big.param(n - 1);
        const TruncPoly base = map_coefficients(U.law.F(), RingHom::canonical(U.law.ring(), big));
        const TruncPoly shifted = map_coefficients(U.law.F(), RingHom::specialization(U.law.ring(), vals, big));
        t.check((shifted - base) == c_poly(n, big, n) * big.param(n - 1), fmt::format("shift identity at n={}", n));
    }
    return t.outcome("n=1..8 validate, parameter support, shift identity");
}

// 2. corepresentability against exhaustive enumeration
Outcome corepresentability()
{
    Tally t;
    std::string counts;
    const std::vector<std::pair<Ring, unsigned>> grid = {
        {Ring::finite_field(2, 1), 2}, {Ring::finite_field(2, 1), 3}, {Ring::finite_field(3, 1), 2}};
    for (const auto& [r, n] : grid) {
        const auto laws = budlaw::testing::all_bud_laws(r, n);
        const std::uint64_t expect = ipow(r.field_size(), n - 1);
        t.check(laws.size() == expect, fmt::format("q={} n={}: {} laws", r.field_size(), n, laws.size()));
        std::set<std::vector<std::uint64_t>> tuples;
        for (const auto& F : laws) {
            const BudLaw X = BudLaw::validate(F);
            const auto tau = classify(X);
            std::vector<std::uint64_t> key;
            for (const auto& x : tau) key.push_back(x.field_index());
            tuples.insert(key);
            t.check(specialize(universal_law(n), tau, r) == X, "classify does not invert specialize");
        }
        t.check(tuples.size() == expect, "classify is not injective");
        counts += fmt::format(" (q={},n={}):{}", r.field_size(), n, laws.size());
    }
    return t.outcome("counts" + counts);
}

// 3. the SPC theorem
Outcome spc_theorem()
{
    Tally t;
    Rng rng(3);
    const std::vector<Ring> rings = {Ring::integers(), Ring::finite_field(2, 1), Ring::finite_field(3, 1),
                                     Ring::mod_n(4)};
    for (const Ring& r : rings) {
        for (unsigned m = 2; m <= 12; ++m) {
            const TruncPoly C = c_poly(m, r);
            t.check(is_spc(C, m), fmt::format("C_{} over {}", m, r.to_string()));
            for (int i = 0; i < 50; ++i) {
                const Element a = random_element(r, rng, 50);
                t.check(spc_multiplier(C * a, m) == a, fmt::format("multiplier of a*C_{} over {}", m, r.to_string()));
            }
            const unsigned e[] = {m, 0};
            const TruncPoly bad = TruncPoly::monomial(r, 2, m, Monomial::from_exponents(e), r.one());
            bool rejected = false;
            try {
                spc_multiplier(bad, m);
            } catch (const Error& err) {
                rejected = err.kind() == ErrorKind::NotMultipleOfC;
            }
            t.check(rejected, fmt::format("T1^{} accepted over {}", m, r.to_string()));
        }
    }
    return t.outcome("m=2..12 over Z, F2, F3, Z/4");
}

// 4. the defect lemmas
Outcome cocycle_lemmas()
{
    Tally t;
    Rng rng(4);
    const std::vector<Ring> rings = {Ring::finite_field(2, 1), Ring::finite_field(3, 1), Ring::mod_n(4)};
    for (int trial = 0; trial < 100; ++trial) {
        const Ring& r = rings[trial % 3];
        const unsigned n = 3 + trial % 6;
        const unsigned m = 2 + (trial / 3) % (n - 1);
        const BudLaw X = random_law(r, n, rng);
        const BudLaw Y = random_law(r, n, rng);

        // perturbation: adding a T^m shifts the degree-m defect by a B_m
        const TruncPoly f = random_series(r, 1, n, rng);
        const Element a = random_element(r, rng);
        const TruncPoly g = f + TruncPoly::monomial(r, 1, n, Monomial::power(0, m), a);
        t.check(defect(g, X, Y).homogeneous_part(m) == defect(f, X, Y).homogeneous_part(m) + b_poly(m, r, n) * a,
                "perturbation");

        // truncation: the defect of the truncations is the truncated defect
        t.check(defect(truncate_series(f, m), truncate_law(X, m), truncate_law(Y, m)) ==
                    truncate_series(defect(f, X, Y), m),
                "truncation");

        // [k] difference
        const unsigned long k = 1 + rng() % 6;
        const BudLaw G = random_law(r, m, rng);
        const Element c = random_element(r, rng);
        const BudLaw F = BudLaw::validate(G.F() + c_poly(m, r) * c);
        mpz_class km;
        mpz_ui_pow_ui(km.get_mpz_t(), k, m);
        const mpz_class coef = (km - k) / lambda_of(m);
        const TruncPoly tm = TruncPoly::monomial(r, 1, m, Monomial::power(0, m), r.one());
        t.check(m_series(F, k).f() == m_series(G, k).f() + tm * scale(c, coef), "[k] difference");

        // [k] commutator
        const BudLaw Xm = truncate_law(X, m);
        const TruncPoly u = random_coordinate(r, m, rng);
        const BudLaw Ym = conjugate(Xm, u);
        const TruncPoly h = u + tm * random_element(r, rng);
        const Element ap = spc_multiplier(defect(h, Xm, Ym), m);
        t.check(substitute(h, {m_series(Xm, k).f()}) == substitute(m_series(Ym, k).f(), {h}) + tm * scale(ap, coef),
                "[k] commutator");
    }
    return t.outcome("100 instances of each of 4 lemmas over F2, F3, Z/4");
}

// 5. Honda laws
Outcome honda_laws()
{
    Tally t;
    const std::tuple<std::uint64_t, unsigned, unsigned> cases[] = {{2, 1, 8}, {2, 2, 8}, {3, 1, 9}, {3, 2, 9}};
    for (auto [p, h, n] : cases) {
        const HondaLaw H = honda_law(p, h, n);
        for (const Term& term : H.rational.F().terms()) {
            t.check(mpz_divisible_ui_p(term.coeff.rational().get_den_mpz_t(), p) == 0,
                    fmt::format("({},{},{}) coefficient not p-integral", p, h, n));
        }
        const std::uint64_t ph = ipow(p, h);
        const Ring Fp = Ring::finite_field(p, 1);
        const TruncPoly want = ph <= n ? TruncPoly::monomial(Fp, 1, n, Monomial::power(0, static_cast<unsigned>(ph)), Fp.one())
                                       : TruncPoly(Fp, 1, n);
        t.check(m_series(H.law, p).f() == want, fmt::format("[{}] at ({},{},{})", p, p, h, n));
    }
    return t.outcome("[p] = T^(p^h) exactly at (2,1,8) (2,2,8) (3,1,9) (3,2,9)");
}

struct GridCase {
    std::uint64_t p;
    unsigned h, n, k;
};
const GridCase grid[] = {{2, 1, 2, 1}, {2, 1, 4, 1}, {2, 1, 4, 2}, {2, 2, 4, 1}, {2, 2, 4, 2}};

// 6. End against brute force
Outcome endomorphisms()
{
    Tally t;
    std::string sizes;
    for (const GridCase& c : grid) {
        const HondaLaw H = honda_law(c.p, c.h, c.n);
        const Ring F = Ring::finite_field(c.p, c.k);
        const AutGroup A = aut_group(H, F);
        const auto brute = budlaw::testing::all_endomorphisms(A.endos.over.F());
        t.check(as_strings(A.endos.elements) == as_strings(brute),
                fmt::format("({},{},{},{}) differs from brute force", c.p, c.h, c.n, ipow(c.p, c.k)));
        sizes += fmt::format(" ({},{},{},{}):{}/{}", c.p, c.h, c.n, ipow(c.p, c.k), A.endos.elements.size(),
                             A.elements.size());
        if (c.n == 2 && c.k == 1 && c.h == 1) t.check(A.endos.elements.size() == 4 && A.elements.size() == 2, "|End|,|Aut| at (2,1,2,2)");
        if (c.n == 4 && c.k == 1 && c.h == 1) t.check(A.endos.elements.size() == 8 && A.elements.size() == 4, "|End|,|Aut| at (2,1,4,2)");
    }
    return t.outcome("|End|/|Aut|" + sizes);
}

// 7. filtration quotients
Outcome filtrations()
{
    Tally t;
    for (const GridCase& c : grid) {
        const AutGroup A = aut_group(honda_law(c.p, c.h, c.n), Ring::finite_field(c.p, c.k));
        for (const auto& lv : A.report.levels) {
            t.check(lv.match, fmt::format("({},{},{},{}) level {}: {} vs predicted {}", c.p, c.h, c.n,
                                          ipow(c.p, c.k), lv.i, lv.quotient, lv.predicted));
        }
        t.check(A.report.normal, "A_i not normal");
        t.check(A.report.bijection, "I_i -> A_i not a bijection");
        if (c.h == 2 && c.k == 2) t.check(A.report.levels[0].quotient == 3, "(2,2,4,4) level 0 is not 3");
    }
    return t.outcome("every level matches on the grid; (2,2,4,4) level 0 = 3");
}

// 8. quotient rings
Outcome quotient_rings()
{
    Tally t;
    struct Q {
        std::uint64_t p;
        unsigned h, n, N1, N2;
    };
    const Q cases[] = {{2, 1, 2, 4, 6}, {2, 1, 4, 8, 10}, {2, 2, 4, 16, 17}};
    std::string sizes;
    for (const Q& c : cases) {
        const Ring F = Ring::finite_field(c.p, c.h);
        const QuotientRing a = quotient_ring(honda_law(c.p, c.h, c.N1), c.n, F);
        const QuotientRing b = quotient_ring(honda_law(c.p, c.h, c.N2), c.n, F);
        const std::uint64_t want = ipow(c.p, c.h * (a.l + 1));
        t.check(a.ring.size() == want && b.ring.size() == want, fmt::format("(p,h,n)=({},{},{})", c.p, c.h, c.n));
        t.check(a.ring.elements == b.ring.elements && a.ring.mul == b.ring.mul,
                fmt::format("N={} and N={} disagree", c.N1, c.N2));
        sizes += fmt::format(" ({},{},{}):{}", c.p, c.h, c.n, a.ring.size());
    }
    return t.outcome("|E_n|" + sizes + ", same for both N");
}

// 9. universal height >= h
Outcome height_universality()
{
    Tally t;
    const std::pair<std::uint64_t, unsigned> cases[] = {{2, 1}, {2, 2}, {3, 1}};
    for (auto [p, h] : cases) {
        const unsigned n = static_cast<unsigned>(ipow(p, h));
        const HeightGeLaw L = universal_height_ge(p, h, n);
        t.check(L.steps.size() == h, "wrong number of steps");
        const Ring Fp = Ring::finite_field(p, 1);
        for (const ShapeStep& s : L.steps) {
            mpz_class e;
            mpz_ui_pow_ui(e.get_mpz_t(), p, ipow(p, s.j) - 1);
            t.check(s.ok, fmt::format("(p,h)=({},{}) step {} shape", p, h, s.j));
            t.check(s.scalar == Fp.from_int(e - 1) && is_unit(s.scalar),
                    fmt::format("(p,h)=({},{}) step {} scalar", p, h, s.j));
        }
        t.check(L.lower_vanish, fmt::format("(p,h)=({},{}) a_1..a_(h-1) do not vanish", p, h));
    }
    return t.outcome("(2,1) (2,2) (3,1) at n = p^h");
}

// 10. isomorphy
Outcome isomorphy()
{
    Tally t;
    for (std::uint64_t p : {2u, 3u}) {
        const Ring Fp = Ring::finite_field(p, 1);
        for (unsigned n = 1; n <= p * p; ++n) {
            const IsoResult r = find_iso(BudLaw::multiplicative(Fp, n), honda_law(p, 1, n).law, Fp);
            t.check(std::holds_alternative<IsoFound>(r), fmt::format("multiplicative vs Honda p={} n={}", p, n));
        }
    }
    Rng rng(10);
    const std::tuple<std::uint64_t, unsigned, unsigned> cases[] = {{2, 1, 4}, {2, 2, 8}, {3, 1, 9}};
    unsigned max_d = 0;
    for (auto [p, h, n] : cases) {
        const Ring F = Ring::finite_field(p, 2);
        const BudLaw H = honda_over(honda_law(p, h, n), F);
        const unsigned bound = static_cast<unsigned>(ipow(p, h));
        for (int trial = 0; trial < 20; ++trial) {
            const BudLaw X = conjugate(H, random_coordinate(F, n, rng));
            const IsoResult r = trivialize_height_h(X, h, bound);
            const auto* f = std::get_if<IsoFound>(&r);
            t.check(f && conjugate(X, f->f.f()) == honda_over(honda_law(p, h, n), f->field),
                    fmt::format("trivialize ({},{}) trial {}", p, h, trial));
            if (f) max_d = std::max(max_d, f->degree);
        }
    }
    const Ring Q = Ring::rationals();
    const TruncPoly f = log_to_additive(BudLaw::multiplicative(Q, 4)).f();
    const long nums[] = {1, -1, 1, -1};
    for (unsigned d = 1; d <= 4; ++d) {
        t.check(f.coefficient(d) == Q.from_rational(mpq_class(nums[d - 1], d)), fmt::format("log coefficient {}", d));
    }
    return t.outcome(fmt::format("find_iso, 60 trivializations (largest extension degree {}), log(1+T)", max_d));
}

// 11. CLI determinism
std::string capture(const std::string& cmd)
{
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return "<popen failed>";
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    return out + fmt::format("<exit {}>", status);
}

Outcome determinism(const std::string& exe)
{
    Tally t;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / fmt::format("budlaw_accept_{}", getpid());
    fs::create_directories(dir);
    auto put = [&](const char* name, const char* text) {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    };
    const std::string mult = put("mult.json", R"({"ring":"Z","vars":2,"bound":4,"terms":[[[1,0],"1"],[[0,1],"1"],[[1,1],"1"]]})");
    const std::string bad = put("bad.json", R"({"ring":"Z","vars":2,"bound":2,"terms":[[[1,0],"1"],[[0,1],"2"]]})");
    const std::string tau = put("tau.json", R"({"ring":{"gf":[3,1]},"n":4,"tau":["1","2","0"]})");
    const std::string frob = put("frob.json", R"({"ring":{"gf":[2,1]},"vars":1,"bound":4,"terms":[[[2],"1"]]})");
    const std::string scale = put("scale.json", R"({"ring":"Q","vars":1,"bound":4,"terms":[[[1],"3"]]})");
    const std::string q = " ";
    const std::vector<std::string> corpus = {
        "validate --in " + mult,
        "validate --in " + bad,
        "extend --ring q --in " + mult,
        "universal --n 5",
        "classify --ring gf:3 --in " + mult,
        "specialize --in " + tau,
        "honda --p 3 --h 2 --n 9",
        "pseries --ring mod:4 --m 3 --in " + mult,
        "height --ring gf:2^1 --p 2 --in " + mult,
        "defect --in " + frob + " --in " + mult + " --ring gf:2",
        "iso --ring gf:3 --in " + mult + " --in " + mult,
        "trivialize --ring gf:2^2 --h 1 --in " + mult,
        "log --ring q --in " + mult,
        "rescale --ring q --in " + mult + " --in " + scale,
    };
    const std::vector<std::string> parallel = {
        "end-enum --p 2 --h 2 --n 8 --q 2^2",
        "aut --p 2 --h 1 --n 8 --q 2^2",
        "aut --p 3 --h 1 --n 9 --q 3^2",
        "quotient-ring --p 2 --h 2 --n 4 --q 2^2",
    };
    for (const std::string& c : corpus) {
        const std::string a = capture(exe + " " + c + " 2>&1"), b = capture(exe + " " + c + " 2>&1");
        t.check(a == b, "two runs differ: " + c);
        t.check(a.find("<exit 0>") != std::string::npos || c.starts_with("validate --in " + bad),
                "unexpected failure: " + c + " -> " + a.substr(0, 200));
    }
    for (const std::string& c : parallel) {
        const std::string a = capture(exe + " " + c + " --jobs 1 2>&1");
        const std::string b = capture(exe + " " + c + " --jobs 1 2>&1");
        const std::string d = capture(exe + " " + c + " --jobs 4 2>&1");
        t.check(a == b, "two runs differ: " + c);
        t.check(a == d, "--jobs 1 and --jobs 4 differ: " + c);
        t.check(a.find("<exit 0>") != std::string::npos, "unexpected failure: " + c);
    }
    fs::remove_all(dir);
    return t.outcome(fmt::format("{} commands twice, {} also at --jobs 4", corpus.size() + parallel.size(),
                                 parallel.size()));
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: acceptance <path to budlaw>\n";
        return 2;
    }
    const std::string exe = argv[1];
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, universal_construction}, {2, corepresentability}, {3, spc_theorem},
        {4, cocycle_lemmas},        {5, honda_laws},         {6, endomorphisms},
        {7, filtrations},           {8, quotient_rings},     {9, height_universality},
        {10, isomorphy},            {11, [&] { return determinism(exe); }},
    };
    int failed = 0;
    for (const auto& [id, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << fmt::format("criterion {:>2}: {}  {}", id, o.pass ? "PASS" : "FAIL", o.detail) << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::cout << fmt::format("{} of {} criteria passed", criteria.size() - failed, criteria.size()) << std::endl;
    return failed == 0 ? 0 : 1;
}
