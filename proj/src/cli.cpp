#include "budlaw/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "budlaw/honda.hpp"
#include "budlaw/isomorphy.hpp"
#include "budlaw/json_io.hpp"
#include "budlaw/lazard.hpp"

namespace budlaw::cli {

namespace {

using io::json;

struct Options {
    std::string ring;
    unsigned n = 0;
    std::uint64_t p = 0;
    unsigned h = 0;
    unsigned long m = 0;
    std::string q;
    std::vector<std::string> in;
    std::string out;
    std::string csv;
    unsigned order = 0;
    unsigned max_ext = 0;
    unsigned jobs = 1;
};

[[noreturn]] void input_error(const std::string& what)
{
    throw Error(ErrorKind::InvalidInput, what);
}

json read_json(const std::string& path)
{
    std::ifstream f(path);
    if (!f) input_error(fmt::format("cannot open {}", path));
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        input_error(fmt::format("{}: {}", path, e.what()));
    }
}

const std::string& input(const Options& o, std::size_t i, const char* what)
{
    if (o.in.size() <= i) input_error(fmt::format("missing --in for {}", what));
    return o.in[i];
}

std::optional<Ring> ring_opt(const Options& o)
{
    if (o.ring.empty()) return std::nullopt;
    return io::parse_ring_spec(o.ring);
}

BudLaw read_law(const Options& o, std::size_t i)
{
    const auto r = ring_opt(o);
    return io::law_from_json(read_json(input(o, i, "the law")), r ? &*r : nullptr);
}

Ring field_opt(const Options& o, std::uint64_t p)
{
    if (o.q.empty()) return Ring::finite_field(p, 1);
    const std::string s = o.q.starts_with("gf:") ? o.q : "gf:" + o.q;
    const Ring F = io::parse_ring_spec(s);
    if (F.prime() != p) {
        throw Error(ErrorKind::CharacteristicMismatch, fmt::format("--q {} is not a power of {}", o.q, p));
    }
    return F;
}

void need(bool ok, const char* flag)
{
    if (!ok) throw CLI::RequiredError(flag);
}

json iso_json(const IsoResult& r)
{
    if (const auto* f = std::get_if<IsoFound>(&r)) {
        return json{{"result", "Found"}, {"field", io::ring_to_json(f->field)}, {"degree", f->degree},
                    {"f", io::series_to_json(f->f.f())}};
    }
    if (std::holds_alternative<IsoNotFoundOverBase>(r)) return json{{"result", "NotFoundOverBase"}};
    return json{{"result", "Failed"}, {"reason", std::get<IsoFailed>(r).reason}};
}

json series_list(const std::vector<TruncPoly>& v)
{
    json a = json::array();
    for (const auto& f : v) a.push_back(io::series_to_json(f));
    return a;
}

json height_json(const HeightClass& c)
{
    if (const auto* h = std::get_if<Height>(&c)) {
        return json{{"height", h->h}, {"leading", io::element_to_json(h->leading)}};
    }
    if (std::holds_alternative<PSeriesZero>(c)) return json{{"height", nullptr}, {"class", "PSeriesZero"}};
    const auto& u = std::get<HeightUndefined>(c);
    return json{{"height", nullptr}, {"class", "Undefined"}, {"lowest_degree", u.lowest_degree},
                {"lowest_coeff", io::element_to_json(u.lowest_coeff)}};
}

std::string table_csv(const std::vector<std::vector<std::size_t>>& t)
{
    std::string s;
    for (const auto& row : t) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(row[i]);
        }
        s += '\n';
    }
    return s;
}

using Handler = std::function<json(const Options&)>;

json cmd_validate(const Options& o) { return io::law_to_json(read_law(o, 0)); }

json cmd_extend(const Options& o) { return io::law_to_json(extend_one_degree(read_law(o, 0))); }

json cmd_universal(const Options& o)
{
    need(o.n >= 1, "--n");
    const UniversalLaw& U = universal_law(o.n);
    json j = io::law_to_json(U.law);
    j["params"] = universal_ring(o.n).params();
    return j;
}

json cmd_classify(const Options& o)
{
    const BudLaw X = read_law(o, 0);
    json tau = json::array();
    for (const Element& t : classify(X)) tau.push_back(io::element_to_json(t));
    return json{{"ring", io::ring_to_json(X.ring())}, {"n", X.n()}, {"tau", tau}};
}

json cmd_specialize(const Options& o)
{
    const json v = read_json(input(o, 0, "the parameter values"));
    const json* list = &v;
    std::optional<Ring> r = ring_opt(o);
    unsigned n = o.n;
    if (v.is_object()) {
        if (!v.contains("tau")) input_error("values must be a list or an object with \"tau\"");
        list = &v["tau"];
        if (!r && v.contains("ring")) r = io::ring_from_json(v["ring"]);
        if (n == 0 && v.contains("n")) n = v["n"].get<unsigned>();
    }
    need(r.has_value(), "--ring");
    if (!list->is_array()) input_error("parameter values must be a list");
    if (n == 0) n = static_cast<unsigned>(list->size()) + 1;
    if (list->size() + 1 != n) {
        input_error(fmt::format("order {} needs {} values, got {}", n, n - 1, list->size()));
    }
    std::vector<Element> values;
    for (const json& x : *list) values.push_back(io::element_from_json(x, *r));
    return io::law_to_json(specialize(universal_law(n), values, *r));
}

json cmd_honda(const Options& o)
{
    need(o.p != 0, "--p");
    need(o.h != 0, "--h");
    need(o.n != 0, "--n");
    const HondaLaw H = honda_law(o.p, o.h, o.n);
    return json{{"p", o.p}, {"h", o.h}, {"n", o.n}, {"law", io::law_to_json(H.law)}, {"log", io::series_to_json(H.log)}};
}

json cmd_pseries(const Options& o)
{
    const unsigned long m = o.m ? o.m : o.p;
    need(m != 0, "--m");
    const BudLaw X = read_law(o, 0);
    json j = io::endo_to_json(m_series(X, m));
    j["m"] = m;
    return j;
}

json cmd_height(const Options& o)
{
    need(o.p != 0, "--p");
    return height_json(height(read_law(o, 0), o.p));
}

json cmd_defect(const Options& o)
{
    const BudLaw X = read_law(o, 1);
    const BudLaw Y = o.in.size() > 2 ? read_law(o, 2) : X;
    const TruncPoly f = io::series_from_json(read_json(input(o, 0, "the series")), &X.ring());
    const TruncPoly d = defect(f, X, Y);
    return json{{"defect", io::series_to_json(d)}, {"homomorphism", d.is_zero()}};
}

json endo_header(const Options& o, const Ring& F)
{
    return json{{"p", o.p}, {"h", o.h}, {"n", o.n}, {"field", io::ring_to_json(F)}};
}

json cmd_end_enum(const Options& o)
{
    need(o.p && o.h && o.n, "--p/--h/--n");
    const Ring F = field_opt(o, o.p);
    const EndoSet E = enumerate_endos(honda_law(o.p, o.h, o.n), F, o.jobs);
    json j = endo_header(o, F);
    j["l"] = E.l;
    j["count"] = E.elements.size();
    j["elements"] = series_list(E.elements);
    return j;
}

json cmd_aut(const Options& o)
{
    need(o.p && o.h && o.n, "--p/--h/--n");
    const Ring F = field_opt(o, o.p);
    const AutGroup A = aut_group(honda_law(o.p, o.h, o.n), F, o.jobs);
    json levels = json::array();
    for (const auto& lv : A.report.levels) {
        levels.push_back(json{{"i", lv.i}, {"order", lv.order}, {"quotient", lv.quotient},
                              {"predicted", lv.predicted}, {"kind", lv.kind}, {"match", lv.match}});
    }
    json j = endo_header(o, F);
    j["l"] = A.endos.l;
    j["end_count"] = A.endos.elements.size();
    j["count"] = A.elements.size();
    j["elements"] = series_list(A.elements);
    j["filtration"] = json{{"levels", levels}, {"mu_count", A.report.mu_count}, {"fix_count", A.report.fix_count},
                           {"normal", A.report.normal}, {"bijection", A.report.bijection},
                           {"all_match", A.report.all_match}};
    return j;
}

json cmd_quotient_ring(const Options& o)
{
    need(o.p && o.h && o.n, "--p/--h/--n");
    const Ring F = field_opt(o, o.p);
    unsigned N = o.order;
    if (N == 0) {
        std::uint64_t need_order = 1;
        for (unsigned i = 0; i < floor_log(o.p, o.n) + o.h; ++i) need_order *= o.p;
        N = static_cast<unsigned>(std::max<std::uint64_t>(need_order, o.n));
    }
    const QuotientRing Q = quotient_ring(honda_law(o.p, o.h, N), o.n, F, o.jobs);
    json uq = json::array();
    for (unsigned i = 1; i <= o.n; ++i) {
        const unsigned j = std::min(2 * i, o.n);
        const UnitQuotientReport r = unit_quotient_check(Q.ring, i, j);
        uq.push_back(json{{"i", i}, {"j", j}, {"square_in_j", r.square_in_j}, {"part1", r.part1},
                          {"part2", r.part2}, {"failures", r.failures}});
    }
    if (!o.csv.empty()) {
        std::ofstream f(o.csv);
        if (!f) input_error(fmt::format("cannot write {}", o.csv));
        f << table_csv(Q.ring.mul);
    }
    json j = endo_header(o, F);
    j["N"] = N;
    j["l"] = Q.l;
    j["size"] = Q.ring.size();
    j["expected"] = Q.expected;
    j["size_ok"] = Q.size_ok;
    j["units"] = Q.units;
    j["elements"] = series_list(Q.ring.elements);
    j["unit_quotients"] = uq;
    return j;
}

json cmd_iso(const Options& o)
{
    const BudLaw X = read_law(o, 0), Y = read_law(o, 1);
    Ring F = X.ring();
    if (!o.q.empty()) {
        if (!F.is_finite_field()) input_error("iso needs laws over a finite field");
        F = field_opt(o, F.prime());
    }
    return iso_json(find_iso(X, Y, F));
}

json cmd_trivialize(const Options& o)
{
    need(o.h != 0, "--h");
    return iso_json(trivialize_height_h(read_law(o, 0), o.h, o.max_ext));
}

json cmd_log(const Options& o) { return io::endo_to_json(log_to_additive(read_law(o, 0))); }

json cmd_rescale(const Options& o)
{
    const BudLaw X = read_law(o, 0);
    const TruncPoly f = io::series_from_json(read_json(input(o, 1, "the coordinate change")), &X.ring());
    return io::law_to_json(conjugate(X, f));
}

struct Command {
    const char* name;
    const char* help;
    std::string flags;  // letters: r n p h m q i o c N x j
    Handler run;
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact computations with formal group laws and n-bud laws", "budlaw"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "show help");  // -h would clash with --h
    Options o;

    const std::vector<Command> commands = {
        {"validate", "check the bud-law axioms", "ri", cmd_validate},
        {"extend", "extend an n-bud law to order n+1", "ri", cmd_extend},
        {"universal", "the universal n-bud law over Z[t1..t(n-1)]", "n", cmd_universal},
        {"classify", "parameters of a law in the universal law", "ri", cmd_classify},
        {"specialize", "the universal law at given parameter values", "rni", cmd_specialize},
        {"honda", "the Honda law of height h over F_p", "phn", cmd_honda},
        {"pseries", "the [m]-series of a law", "rimp", cmd_pseries},
        {"height", "height of a law at p", "rip", cmd_height},
        {"defect", "f(F) - G(f, f) for --in f --in F [--in G]", "ri", cmd_defect},
        {"end-enum", "endomorphisms of the Honda law over F_q", "phnqj", cmd_end_enum},
        {"aut", "automorphisms and their filtration", "phnqj", cmd_aut},
        {"quotient-ring", "the finite ring E_n over F_q", "phnqjNc", cmd_quotient_ring},
        {"iso", "isomorphism search between two laws", "riq", cmd_iso},
        {"trivialize", "isomorphism to the Honda law over an extension", "rihx", cmd_trivialize},
        {"log", "strict isomorphism to the additive law over a Q-algebra", "ri", cmd_log},
        {"rescale", "transport a law along --in f", "ri", cmd_rescale},
    };
    std::map<CLI::App*, const Command*> which;
    for (const Command& s : commands) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        for (char c : s.flags) {
            switch (c) {
            case 'r': sub->add_option("--ring", o.ring, "z | q | mod:M | gf:P^K | poly:RING[t1..tr]"); break;
            case 'n': sub->add_option("--n", o.n, "order"); break;
            case 'p': sub->add_option("--p", o.p, "prime"); break;
            case 'h': sub->add_option("--h", o.h, "height")->check(CLI::PositiveNumber); break;
            case 'm': sub->add_option("--m", o.m, "multiplier (defaults to --p)"); break;
            case 'q': sub->add_option("--q", o.q, "field size as P^K"); break;
            case 'i': sub->add_option("--in", o.in, "input JSON file (repeatable)"); break;
            case 'N': sub->add_option("--order", o.order, "ambient order N"); break;
            case 'c': sub->add_option("--csv", o.csv, "write the multiplication table as CSV"); break;
            case 'x': sub->add_option("--max-ext", o.max_ext, "largest extension degree (default p^h)"); break;
            case 'j': sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber); break;
            }
        }
        sub->add_option("--out", o.out, "write the JSON here instead of standard output");
        which[sub] = &s;
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        err << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return 2;
    }

    const Command* spec = nullptr;
    for (auto& [sub, s] : which) {
        if (sub->parsed()) spec = s;
    }

    json result;
    int code = 0;
    try {
        result = spec->run(o);
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        result = json{{"error", std::string(to_string(e.kind()))}, {"detail", e.detail()}};
        if (!e.witness().empty()) result["witness"] = e.witness();
        if (e.degree()) result["degree"] = *e.degree();
        code = 1;
    } catch (const json::exception& e) {
        result = json{{"error", "InvalidInput"}, {"detail", e.what()}};
        code = 1;
    }

    const std::string text = result.dump(2) + "\n";
    if (!o.out.empty() && code == 0) {
        std::ofstream f(o.out);
        if (!f) {
            out << json{{"error", "InvalidInput"}, {"detail", "cannot write " + o.out}}.dump(2) << '\n';
            return 1;
        }
        f << text;
    } else {
        out << text;
    }
    return code;
}

} // namespace budlaw::cli
