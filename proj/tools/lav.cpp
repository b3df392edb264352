#include <CLI11.hpp>

#include "lav/analytic.hpp"
#include "lav/experiments.hpp"
#include "lav/exprcalc.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace lav;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, sep))
        if (!part.empty()) out.push_back(part);
    return out;
}

std::vector<Rat> parse_grid(const std::string& s) {
    std::vector<Rat> g;
    for (const auto& t : split(s, ',')) g.push_back(rat_parse(t));
    return g;
}

std::vector<long> parse_levels(const std::string& s) {
    std::vector<long> ls;
    for (const auto& t : split(s, ',')) ls.push_back(std::stol(t));
    return ls;
}

// Residue lifted to the representative of least absolute value, so
// small negative coefficients print as such.
Int balanced_lift(const PadicInt& x) {
    Int m = x.modulus();
    Int r = x.residue();
    if (r * 2 > m) r -= m;
    return r;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << body;
}

std::string json_escape(const std::string& s) {
    std::string r;
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c;
    }
    return r;
}

struct GlobalOpts {
    RunConfig cfg;
    std::string cap_str = "64";
    std::string grid_str;
    std::string levels_str;

    void finish() {
        cfg.cap = rat_parse(cap_str);
        if (cfg.cap <= 0) throw DomainError("cap must be positive");
        if (!grid_str.empty()) cfg.lambda_grid = parse_grid(grid_str);
        if (!levels_str.empty()) cfg.levels = parse_levels(levels_str);
        if (cfg.witt_length < 1 || cfg.witt_length > 4)
            throw DomainError("witt length must be between 1 and 4");
        if (cfg.degree < 1) throw DomainError("degree must be positive");
    }

    RingOptions ring() const {
        return RingOptions{cfg.prime, cfg.cap, cfg.witt_length, 64};
    }
};

void emit(const GlobalOpts& g, const std::string& body) {
    if (!g.cfg.out.empty())
        write_text(g.cfg.out, body);
    else
        std::cout << body;
}

int cmd_ring(const GlobalOpts& g, const std::string& expr) {
    RingValue v = ring_eval(expr, g.ring());
    emit(g, ring_value_str(v) + "\n");
    return 0;
}

int cmd_witness(const GlobalOpts& g, const std::string& expr) {
    RingValue v = ring_eval(expr, g.ring());
    std::vector<long> levels =
        g.cfg.levels.empty() ? default_levels() : g.cfg.levels;
    std::vector<Rat> grid =
        g.cfg.lambda_grid.empty() ? default_lambda_grid() : g.cfg.lambda_grid;

    std::optional<LaWitness> hit;
    if (std::holds_alternative<WittElem>(v)) {
        const WittElem& w0 = std::get<WittElem>(v);
        std::vector<PerfLaurent> digs;
        for (const auto& d : w0.digits())
            digs.push_back(d.is_capped() ? d : d.truncate(g.cfg.cap));
        WittElem w{Prime(g.cfg.prime), std::move(digs)};
        WittModule mod{Prime(g.cfg.prime), w.len(), Rat(1)};
        hit = witness_search(mod, w, levels, grid, g.cfg.degree);
    } else {
        PerfLaurent f = PerfLaurent::zero(g.cfg.prime);
        if (std::holds_alternative<PerfLaurent>(v)) {
            f = std::get<PerfLaurent>(v);
        } else {
            Int c = std::get<Int>(v) % static_cast<long>(g.cfg.prime);
            if (c < 0) c += static_cast<long>(g.cfg.prime);
            if (c != 0)
                f = PerfLaurent::from_terms(g.cfg.prime, {{Rat(0), c.get_ui()}},
                                            std::nullopt);
        }
        if (!f.is_capped()) f = f.truncate(g.cfg.cap);
        SeriesModule mod{Prime(g.cfg.prime), f.cap()};
        hit = witness_search(mod, f, levels, grid, g.cfg.degree);
    }

    std::ostringstream os;
    if (g.cfg.format == "text") {
        if (hit)
            os << "level=" << hit->level << " lambda=" << rat_str(hit->w.lambda)
               << " mu=" << rat_str(hit->w.mu) << " N=" << g.cfg.degree << "\n";
        else
            os << "no witness\n";
    } else if (g.cfg.format == "csv") {
        os << "# schema=lav/report/v1 kind=witness\nlevel,lambda,mu,N\n";
        if (hit)
            os << hit->level << "," << rat_str(hit->w.lambda) << ","
               << rat_str(hit->w.mu) << "," << g.cfg.degree << "\n";
    } else {
        os << "{\"schema\":\"lav/report/v1\",\"kind\":\"witness\",\"found\":"
           << (hit ? "true" : "false");
        if (hit)
            os << ",\"level\":" << hit->level << ",\"lambda\":\""
               << rat_str(hit->w.lambda) << "\",\"mu\":\"" << rat_str(hit->w.mu)
               << "\"";
        os << ",\"N\":" << g.cfg.degree << "}\n";
    }
    emit(g, os.str());
    return hit ? 0 : 1;
}

MahlerFn<PadicModule> poly_mahler(const GlobalOpts& g, const std::string& poly,
                                  long prec) {
    PadicModule mod{Prime(g.cfg.prime), prec};
    auto grid = grid_sample(mod, 1, g.cfg.degree, [&](const MultiIndex& n) {
        return poly_eval_at(poly, PadicInt(Prime(g.cfg.prime), Int(n[0]), prec));
    });
    return mahler_coeffs(grid);
}

int cmd_mahler_coeffs(const GlobalOpts& g, const std::string& poly) {
    MahlerFn<PadicModule> f = poly_mahler(g, poly, 16);
    std::ostringstream os;
    os << "a=(";
    for (long n = 0; n <= f.bound; ++n) {
        if (n) os << ",";
        os << balanced_lift(f.at({n})).get_str();
    }
    os << ")\n";
    emit(g, os.str());
    return 0;
}

int cmd_mahler_eval(const GlobalOpts& g, const std::string& poly,
                    const std::string& at) {
    MahlerFn<PadicModule> f = poly_mahler(g, poly, 16);
    std::ostringstream os;
    for (const auto& t : split(at, ',')) {
        Int x(t);
        os << "f(" << t << ") = " << balanced_lift(eval_at_ints(f, {x})).get_str()
           << "\n";
    }
    emit(g, os.str());
    return 0;
}

MahlerFn<SeriesModule> load_mahler(const GlobalOpts& g, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    SeriesModule mod{Prime(g.cfg.prime), g.cfg.cap};
    return mahler_parse_series(mod, buf.str());
}

int cmd_mahler_check(const GlobalOpts& g, const std::string& path,
                     const std::string& lam_s, const std::string& mu_s) {
    MahlerFn<SeriesModule> f = load_mahler(g, path);
    Rat lam = rat_parse(lam_s), mu = rat_parse(mu_s);
    bool c1 = check_cond1(f, lam, mu);
    bool c2 = check_cond2(grid_of(f), lam, mu);
    std::ostringstream os;
    if (g.cfg.format == "text")
        os << "cond1=" << (c1 ? "true" : "false")
           << " cond2=" << (c2 ? "true" : "false") << "\n";
    else
        os << "{\"schema\":\"lav/report/v1\",\"kind\":\"mahler-check\",\"lambda\":\""
           << rat_str(lam) << "\",\"mu\":\"" << rat_str(mu)
           << "\",\"cond1\":" << (c1 ? "true" : "false")
           << ",\"cond2\":" << (c2 ? "true" : "false") << "}\n";
    emit(g, os.str());
    return c1 ? 0 : 1;
}

int cmd_mahler_restrict(const GlobalOpts& g, const std::string& path, long level) {
    MahlerFn<SeriesModule> f = load_mahler(g, path);
    emit(g, mahler_str(restrict_to_level(f, level)));
    return 0;
}

int cmd_mahler_orbit(const GlobalOpts& g, const std::string& expr, long level) {
    RingValue v = ring_eval(expr, g.ring());
    if (!std::holds_alternative<PerfLaurent>(v))
        throw DomainError("orbit tables are built from series expressions");
    PerfLaurent m = std::get<PerfLaurent>(v);
    if (!m.is_capped()) m = m.truncate(g.cfg.cap);
    SeriesModule mod{Prime(g.cfg.prime), m.cap()};
    GroupContext ctx(Prime(g.cfg.prime), level);
    emit(g, mahler_str(orbit_mahler(mod, m, ctx, g.cfg.degree)));
    return 0;
}

int cmd_experiment(const GlobalOpts& g, const std::string& name) {
    ExperimentResult res = run_experiment(name, g.cfg);
    if (!g.cfg.out.empty()) {
        write_text(g.cfg.out + ".json", res.json);
        write_text(g.cfg.out + ".csv", res.csv);
    }
    if (g.cfg.format == "csv")
        std::cout << res.csv;
    else if (g.cfg.format == "text")
        std::cout << "experiment=" << res.name << " ok=" << (res.ok ? "true" : "false")
                  << "\n";
    else
        std::cout << res.json;
    if (!res.ok) {
        std::cerr << "{\"schema\":\"lav/report/v1\",\"experiment\":\""
                  << json_escape(name) << "\",\"ok\":false}\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact calculators and experiments for valued series, Witt "
                 "vectors, and Mahler expansions"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.set_config("--config", "", "key=value config file; flags override");
    app.add_option("--prime", g.cfg.prime, "base prime p")->check(CLI::Range(2ul, 97ul));
    app.add_option("--cap", g.cap_str, "series cap as an exact rational");
    app.add_option("--witt-length", g.cfg.witt_length, "Witt vector length (1..4)");
    app.add_option("--degree", g.cfg.degree, "Mahler box bound N");
    app.add_option("--lambda-grid", g.grid_str,
                   "comma-separated rationals, scanned in order");
    app.add_option("--levels", g.levels_str, "comma-separated subgroup levels");
    app.add_option("--seed", g.cfg.seed, "sample stream seed");
    app.add_option("--format", g.cfg.format, "json|csv|text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--out", g.cfg.out, "output path (experiments: base name)");

    std::string ring_expr;
    auto* ring = app.add_subcommand("ring", "evaluate an expression and print it");
    ring->fallthrough();
    ring->add_option("expr", ring_expr, "expression")->required();

    std::string wit_expr;
    auto* wit = app.add_subcommand("witness", "search analyticity witnesses");
    wit->fallthrough();
    wit->add_option("expr", wit_expr, "expression")->required();

    auto* mahler = app.add_subcommand("mahler", "Mahler expansion tooling");
    mahler->fallthrough();
    mahler->require_subcommand(1);
    std::string poly, at_points = "0,1,2,3", mfile, lam_s = "1", mu_s = "0";
    long level = 0;
    auto* mc = mahler->add_subcommand("coeffs", "coefficients of a polynomial in x");
    mc->fallthrough();
    mc->add_option("poly", poly, "integer polynomial in x")->required();
    auto* me = mahler->add_subcommand("eval", "evaluate the interpolation");
    me->fallthrough();
    me->add_option("poly", poly, "integer polynomial in x")->required();
    me->add_option("--at", at_points, "comma-separated integer points");
    auto* mk = mahler->add_subcommand("check", "valuation-growth conditions");
    mk->fallthrough();
    mk->add_option("file", mfile, "Mahler table file")->required();
    mk->add_option("--lambda", lam_s, "rate lambda");
    mk->add_option("--mu", mu_s, "offset mu");
    auto* mr = mahler->add_subcommand("restrict", "restrict to a subgroup level");
    mr->fallthrough();
    mr->add_option("file", mfile, "Mahler table file")->required();
    mr->add_option("--level", level, "subgroup level");
    auto* mo = mahler->add_subcommand("orbit", "orbit table of a series element");
    mo->fallthrough();
    mo->add_option("expr", poly, "series expression")->required();
    mo->add_option("--level", level, "subgroup level");

    std::string exp_name;
    auto* exp = app.add_subcommand("experiment", "run a named experiment");
    exp->fallthrough();
    exp->add_option("name", exp_name, "experiment name")
        ->required()
        ->check(CLI::IsMember(lav::experiment_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        g.finish();
        if (*ring) return cmd_ring(g, ring_expr);
        if (*wit) return cmd_witness(g, wit_expr);
        if (*mahler) {
            if (*mc) return cmd_mahler_coeffs(g, poly);
            if (*me) return cmd_mahler_eval(g, poly, at_points);
            if (*mk) return cmd_mahler_check(g, mfile, lam_s, mu_s);
            if (*mr) return cmd_mahler_restrict(g, mfile, level);
            if (*mo) return cmd_mahler_orbit(g, poly, level);
        }
        if (*exp) return cmd_experiment(g, exp_name);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lav::cli_exit_code(e);
    }
    return 2;
}
