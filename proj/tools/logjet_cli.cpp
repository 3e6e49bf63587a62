// Command-line surface: jet-differential expression checks, coordinate
// dumps, constraint generation, tower lifts and the deterministic suite.
// Reports are JSON records on stdout (stable key order); diagnostics and
// timings go to stderr.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "logjet/checks.hpp"
#include "logjet/directed.hpp"
#include "logjet/expr.hpp"
#include "logjet/jet.hpp"
#include "logjet/jetdiff.hpp"
#include "logjet/logcoords.hpp"
#include "logjet/report.hpp"
#include "logjet/semple.hpp"
#include "logjet/theta.hpp"

using namespace logjet;
using Q = GaussRational;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

std::uint64_t default_seed()
{
    if (const char* env = std::getenv("LOGJET_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 42;
}

struct GermSpec {
    int order = 0;
    LogChart chart;
    PolyGerm<Q> germ;
};

GermSpec load_germ(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open germ file '" + path + "'");
    json j;
    in >> j;
    GermSpec gs;
    gs.order = j.at("order").get<int>();
    gs.chart = LogChart(j.at("chart").at("n").get<int>(), j.at("chart").at("l").get<int>());
    for (const auto& row : j.at("coords")) {
        std::vector<Q> coeffs;
        for (const auto& c : row)
            coeffs.push_back(Q::parse(c.get<std::string>()));
        gs.germ.taylor.push_back(std::move(coeffs));
    }
    if (gs.germ.n() != gs.chart.n)
        throw ConfigError("germ file: coords count differs from chart.n");
    return gs;
}

DirectedStructure<Q> load_structure(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open structure file '" + path + "'");
    json j;
    in >> j;
    DirectedStructure<Q> ds;
    ds.n = j.at("n").get<int>();
    ds.r = j.at("r").get<int>();
    ds.l = j.value("l", 0);
    for (const auto& i : j.at("A"))
        ds.A.push_back(i.get<int>());
    for (int i = 1; i <= ds.n; ++i)
        if (std::find(ds.A.begin(), ds.A.end(), i) == ds.A.end())
            ds.B.push_back(i);
    for (const auto& [key, val] : j.at("coeffs").items()) {
        std::istringstream ss(key);
        int i = 0, m = 0;
        char comma = 0;
        ss >> i >> comma >> m;
        if (comma != ',')
            throw ConfigError("structure file: coefficient key must be \"i,m\"");
        ds.coeff[{i, m}] = parse_expression(val.get<std::string>()).poly;
    }
    ds.validate();
    return ds;
}

std::string scalar_str(const Q& v) { return v.to_string(); }

int emit_reports(const std::vector<CheckReport>& reports)
{
    long failures = 0;
    for (const auto& r : reports) {
        std::cout << r.to_json_line() << "\n";
        failures += r.failures;
    }
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"logjet: exact jet calculus for logarithmic Demailly-Semple towers"};
    app.require_subcommand(1);

    // --- check-equivariance ---
    auto* eq = app.add_subcommand("check-equivariance", "test eq-invariance of an expression");
    std::string eq_expr;
    int eq_k = 3, eq_n = 0, eq_trials = 100;
    std::uint64_t eq_seed = default_seed();
    eq->add_option("--expr", eq_expr, "jet polynomial expression")->required();
    eq->add_option("--k", eq_k, "jet order");
    eq->add_option("--n", eq_n, "coordinate count (default: inferred)");
    eq->add_option("--trials", eq_trials, "number of random trials");
    eq->add_option("--seed", eq_seed, "root seed");

    // --- logcoords ---
    auto* lc = app.add_subcommand("logcoords", "log-frame trivialization of a germ jet");
    std::string lc_germ, lc_chart;
    lc->add_option("--germ", lc_germ, "germ file")->required();
    lc->add_option("--chart", lc_chart, "override chart as n,l");

    // --- gpoly ---
    auto* gp = app.add_subcommand("gpoly", "universal frame-change polynomials g_j");
    int gp_k = 3;
    gp->add_option("--k", gp_k, "max order")->required();

    // --- constraints ---
    auto* cons = app.add_subcommand("constraints", "directed-jet constraint polynomials");
    std::string cons_file;
    int cons_k = 2;
    bool cons_log = false;
    cons->add_option("--structure", cons_file, "structure file")->required();
    cons->add_option("--k", cons_k, "jet order")->required();
    cons->add_flag("--log", cons_log, "use the logarithmic frame");

    // --- lift ---
    auto* lf = app.add_subcommand("lift", "Demailly-Semple chart coordinates of a lifted germ");
    std::string lf_germ, lf_t = "0";
    int lf_k = 2;
    lf->add_option("--germ", lf_germ, "germ file")->required();
    lf->add_option("--k", lf_k, "tower level")->required();
    lf->add_option("--t", lf_t, "evaluation parameter (exact scalar)");

    // --- wronskian ---
    auto* wr = app.add_subcommand("wronskian", "Wronskian of the germ coordinates");
    std::string wr_germ;
    int wr_k = 0;
    wr->add_option("--germ", wr_germ, "germ file")->required();
    wr->add_option("--k", wr_k, "jet order (default: coordinate count)");

    // --- theta-check ---
    auto* tc = app.add_subcommand("theta-check", "numeric theta-function suite");
    std::string tc_tau = "0,1", tc_gamma = "0,1";
    long tc_n = 30, tc_prec = 256;
    double tc_tol = 1e-10;
    std::uint64_t tc_seed = default_seed();
    tc->add_option("--tau", tc_tau, "lattice parameter re,im");
    tc->add_option("--N", tc_n, "truncation range");
    tc->add_option("--prec", tc_prec, "mantissa bits");
    tc->add_option("--gamma", tc_gamma, "lattice vector p,q");
    tc->add_option("--tol", tc_tol, "tolerance");
    tc->add_option("--seed", tc_seed, "sampling seed");

    // --- suite ---
    auto* su = app.add_subcommand("suite", "run the full deterministic check battery");
    bool su_all = false;
    std::uint64_t su_seed = default_seed();
    su->add_flag("--all", su_all, "run every check");
    su->add_option("--seed", su_seed, "root seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    auto t0 = std::chrono::steady_clock::now();
    int rc = 0;
    try {
        if (eq->parsed()) {
            ParseResult pr = parse_expression(eq_expr);
            for (const auto& w : pr.warnings)
                std::cerr << "warning: " << w << "\n";
            if (!pr.weight) {
                std::cerr << "error: equivariance needs a weighted-homogeneous expression\n";
                return 2;
            }
            int n = eq_n;
            if (n == 0) {
                for (const auto& [m, c] : pr.poly.terms())
                    for (const auto& [key, e] : m)
                        n = std::max(n, Var{key}.i());
                n = std::max(n, 1);
            }
            int k = std::max(eq_k, pr.poly.max_derivative_order());
            EquivarianceReport er = check_equivariance(pr.poly, *pr.weight, eq_trials, eq_seed, k, n);
            CheckReport rep;
            rep.name = "check-equivariance";
            rep.params = {{"expr", eq_expr},
                          {"m", std::to_string(*pr.weight)},
                          {"k", std::to_string(k)},
                          {"n", std::to_string(n)}};
            rep.trials = er.trials;
            rep.failures = er.failures;
            rep.max_residual = format_residual(er.max_residual);
            rep.seed = eq_seed;
            rep.witness = er.witness;
            rc = emit_reports({rep});
        } else if (lc->parsed()) {
            GermSpec gs = load_germ(lc_germ);
            if (!lc_chart.empty()) {
                int n = 0, l = 0;
                char comma = 0;
                std::istringstream ss(lc_chart);
                ss >> n >> comma >> l;
                gs.chart = LogChart(n, l);
            }
            LogJetCoords<Q> c = to_log_coords(gs.germ.jet_at(Q::zero(), gs.order), gs.chart);
            ojson out;
            out["chart"] = {{"n", gs.chart.n}, {"l", gs.chart.l}};
            out["order"] = c.k;
            ojson zz = ojson::array();
            for (int i = 1; i <= gs.chart.n; ++i) {
                ojson row = ojson::array();
                for (int j = 1; j <= c.k; ++j)
                    row.push_back(scalar_str(c.z(i, j)));
                zz.push_back(row);
            }
            out["Z"] = zz;
            ojson bb = ojson::array();
            for (int i = 1; i <= gs.chart.n; ++i)
                bb.push_back(scalar_str(c.base_at(i)));
            out["base"] = bb;
            std::cout << out.dump() << "\n";
        } else if (gp->parsed()) {
            const auto& g = g_polynomials<Q>(gp_k);
            for (int j = 1; j <= gp_k; ++j)
                std::cout << "g_" << j << "="
                          << to_canonical_string(g[static_cast<std::size_t>(j - 1)]) << "\n";
        } else if (cons->parsed()) {
            DirectedStructure<Q> ds = load_structure(cons_file);
            ConstraintSet<Q> cs = cons_log ? log_constraint_polynomials(ds, ds.chart(), cons_k)
                                           : constraint_polynomials(ds, cons_k);
            for (const auto& [hi, poly] : cs.polys)
                std::cout << (cons_log ? "Q" : "P") << "_" << hi.first << "^" << hi.second << "="
                          << to_canonical_string(poly) << "\n";
        } else if (lf->parsed()) {
            GermSpec gs = load_germ(lf_germ);
            std::vector<int> A;
            for (int i = 1; i <= gs.chart.n; ++i)
                A.push_back(i);
            SemplePoint<Q> p = lift_curve(gs.germ, gs.chart, A, lf_k, Q::parse(lf_t));
            ojson out;
            out["level"] = p.level;
            out["rho"] = p.rho;
            out["branch"] = p.log_saturated ? "log-saturated" : "plain";
            ojson bb = ojson::array();
            for (const Q& b : p.base)
                bb.push_back(scalar_str(b));
            out["base"] = bb;
            ojson blocks = ojson::array();
            for (const auto& blk : p.blocks) {
                ojson row = ojson::array();
                for (const Q& v : blk)
                    row.push_back(scalar_str(v));
                blocks.push_back(row);
            }
            out["blocks"] = blocks;
            out["taut"] = scalar_str(p.taut);
            std::cout << out.dump() << "\n";
        } else if (wr->parsed()) {
            GermSpec gs = load_germ(wr_germ);
            int r = gs.chart.n;
            int k = wr_k > 0 ? wr_k : r;
            if (k < r)
                throw ConfigError("wronskian: k must be at least the coordinate count");
            CurveJet<Q> jet = gs.germ.jet_at(Q::zero(), k);
            std::vector<std::vector<Q>> rows;
            for (int i = 1; i <= r; ++i) {
                std::vector<Q> row;
                for (int j = 1; j <= r; ++j)
                    row.push_back(jet.coord(i)[j]);
                rows.push_back(std::move(row));
            }
            std::vector<int> coords;
            for (int i = 1; i <= r; ++i)
                coords.push_back(i);
            ojson out;
            out["value"] = scalar_str(wronskian(rows));
            out["weight"] = r * (r + 1) / 2;
            out["symbolic"] = to_canonical_string(wronskian_symbolic<Q>(coords));
            std::cout << out.dump() << "\n";
        } else if (tc->parsed()) {
            checks::ThetaConfig cfg;
            {
                std::istringstream ss(tc_tau);
                char comma = 0;
                ss >> cfg.tau_re >> comma >> cfg.tau_im;
            }
            cfg.trunc = tc_n;
            cfg.prec = tc_prec;
            cfg.tol = tc_tol;
            std::vector<CheckReport> reports = checks::theta_suite(cfg, tc_seed);
            {
                // requested gamma multiplier fit
                long p = 0, q = 0;
                char comma = 0;
                std::istringstream ss(tc_gamma);
                ss >> p >> comma >> q;
                mpfr_prec_t prec = static_cast<mpfr_prec_t>(cfg.prec);
                ThetaSeries th(BigComplex(cfg.tau_re, cfg.tau_im, prec), cfg.trunc, prec);
                SplitMix64 g(tc_seed);
                std::vector<BigComplex> samples;
                while (samples.size() < 5) {
                    double re = static_cast<double>(g.range(-300, 300)) / 1000.0;
                    double im = static_cast<double>(g.range(-300, 300)) / 1000.0;
                    BigComplex z(re, im, prec);
                    if (th.eval(z).abs_approx() > 1e-3)
                        samples.push_back(z);
                }
                QuasiPeriodicityFit fit = quasi_periodicity_check(th, LatticeVector{p, q}, samples);
                CheckReport rep;
                rep.name = "theta-gamma-multiplier";
                rep.params = {{"gamma", tc_gamma}};
                rep.trials = static_cast<long>(samples.size());
                BigComplex ea = th.multiplier_alpha(LatticeVector{p, q});
                BigComplex eb = th.multiplier_beta(LatticeVector{p, q});
                double worst = std::max({fit.max_residual, (fit.alpha - ea).abs_approx(),
                                         (fit.beta - eb).abs_approx()});
                rep.max_residual = format_residual(worst);
                rep.seed = tc_seed;
                if (worst > cfg.tol)
                    rep.failures = 1;
                reports.push_back(rep);
            }
            std::sort(reports.begin(), reports.end(),
                      [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
            rc = emit_reports(reports);
        } else if (su->parsed()) {
            if (!su_all) {
                std::cerr << "error: suite requires --all\n";
                return 2;
            }
            rc = emit_reports(checks::run_suite(su_seed));
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    auto t1 = std::chrono::steady_clock::now();
    std::cerr << "elapsed: "
              << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() << " ms\n";
    return rc;
}
