// Command-line surface: fixture validation, graph enumeration, weight
// evaluation, Hodge diagnostics, effective actions, chart invariants, and the
// metric-independence / horizontality experiments.
//
// Exit codes: 0 pass, 1 numerical failure, 2 invalid input.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>

#include "csmoduli/chart.hpp"
#include "csmoduli/fixtures.hpp"
#include "csmoduli/horizontality.hpp"
#include "csmoduli/io.hpp"

using namespace csm;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Output {
    std::string path;
    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(path);
            f << text;
        }
    }
};

CyclicDgla<double> named_fixture(const std::string& name, Metric<double>* g_out = nullptr) {
    if (g_out) g_out->g = Mat<double>();
    if (name == "mexhat") return mexhat<double>();
    if (name == "mexhat-torus") return mexhat_torus<double>();
    if (name == "f-zero") return f_zero<double>();
    if (name == "f-sym") return f_sym<double>();
    if (name == "two-term") return two_term<double>();
    if (name == "su2-lambda3") return tensor_frobenius(su2<double>(), false);
    if (name == "su2-lambda3-d") return tensor_frobenius(su2<double>(), true);
    if (!name.empty() && name[0] == '@') {
        std::ifstream f(name.substr(1));
        if (!f) throw ParseError("cannot open fixture file " + name.substr(1));
        Metric<double> m;
        auto L = load_dgla_fixture<double>(f, &m);
        if (g_out && m.g.rows() > 0) *g_out = m;
        return L;
    }
    throw ParseError("unknown fixture '" + name + "'");
}

Mat<double> named_metric(const CyclicDgla<double>& L, const std::string& spec, double t) {
    auto toks = io_detail::tokenize(spec);
    const std::string& name = toks.at(0);
    Mat<double> g = Mat<double>::identity(L.total);
    double c = std::cos(2 * kPi * t), s = std::sin(2 * kPi * t);
    if (name == "identity") return g;
    if (name == "base" || name == "conformal") {
        if (L.total >= 6) {
            g(0, 0) += 0.3 * c * c;
            g(1, 1) += 0.2 * s * s;
            g(0, 1) = g(1, 0) = 0.15 * s * c;
            g(3, 3) = 1.2;
            g(4, 5) = g(5, 4) = 0.2 * s;
        }
        if (name == "conformal") {
            double a1 = toks.size() > 1 ? std::stod(toks[1]) : 0.4;
            double a2 = toks.size() > 2 ? std::stod(toks[2]) : 0.3;
            double f1 = 1.0 + a1 * s * s, f2 = std::exp(a2 * c);
            for (int i = 0; i < L.dims[1]; ++i)
                for (int j = 0; j < L.dims[1]; ++j) g(L.offset[1] + i, L.offset[1] + j) *= f1;
            for (int i = 0; i < L.dims[2]; ++i)
                for (int j = 0; j < L.dims[2]; ++j) g(L.offset[2] + i, L.offset[2] + j) *= f2;
        }
        return g;
    }
    throw ParseError("unknown metric profile '" + name + "'");
}

struct ChartSpec {
    std::string fixture = "mexhat";
    int grid = 64;
    std::string family = "circle";
    std::string metric = "base";
    int orientation = 1;
};

ChartSpec load_chart_spec(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open chart file " + path);
    io_detail::Reader r(f);
    if (r.next() != "chart") throw ParseError("chart file must start with 'chart'");
    ChartSpec cs;
    while (!r.done()) {
        auto l = r.next();
        auto col = l.find(':');
        if (col == std::string::npos) throw ParseError("bad chart line: " + l);
        auto key = l.substr(0, col);
        auto val = l.substr(col + 1);
        size_t b = val.find_first_not_of(' ');
        val = b == std::string::npos ? "" : val.substr(b);
        if (key == "fixture") cs.fixture = val;
        else if (key == "grid") cs.grid = std::stoi(val);
        else if (key == "family") cs.family = val;
        else if (key == "metric") cs.metric = val;
        else if (key == "orientation") cs.orientation = std::stoi(val);
        else throw ParseError("unknown chart key: " + key);
    }
    return cs;
}

ModuliChart chart_from_spec(const ChartSpec& cs, const CyclicDgla<double>& L,
                            const std::string& metric_override = "") {
    ChartOptions opt;
    opt.grid_n = cs.grid;
    opt.orientation = cs.orientation;
    std::string metric = metric_override.empty() ? cs.metric : metric_override;
    std::function<std::vector<double>(double)> A_of;
    if (cs.family.rfind("circle", 0) == 0) {
        MexhatParams P;
        A_of = [P](double t) { return mexhat_circle_point(P, 2 * kPi * t); };
    } else {
        throw ParseError("unknown chart family '" + cs.family + "'");
    }
    return build_chart(L, A_of, [&L, metric](double t) { return named_metric(L, metric, t); },
                       opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-dimensional perturbative Chern-Simons engine"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string report_path;
    app.add_option("--report", report_path, "write the report to a file");
    double tolerance = 1e-10;
    app.add_option("--tolerance", tolerance, "numerical tolerance");
    int grid = 0;
    app.add_option("--grid", grid, "override chart grid size");
    unsigned seed = 1;
    app.add_option("--seed", seed, "random seed for randomized checks");
    bool exact = false, use_float = false;
    app.add_flag("--exact", exact, "use exact rational arithmetic where supported");
    app.add_flag("--float", use_float, "use floating point arithmetic");
    int threads = 1;
    app.add_option("--threads", threads, "worker threads for chart sweeps");

    // validate
    auto* vcmd = app.add_subcommand("validate", "validate a dgla fixture");
    std::string vfix;
    vcmd->add_option("fixture", vfix)->required();

    // enumerate-graphs
    auto* ecmd = app.add_subcommand("enumerate-graphs", "list trivalent graph classes");
    int ev = 0, el = 0;
    ecmd->add_option("--vertices", ev)->required();
    ecmd->add_option("--leaves", el)->required();

    // weights
    auto* wcmd = app.add_subcommand("weights", "evaluate a Lie graph weight");
    std::string wlie = "su2", wgraph;
    wcmd->add_option("--lie", wlie, "su2 | su3 | @file");
    wcmd->add_option("--graph", wgraph, "canonical encoding, e.g. V2:3,4,5,0,1,2")->required();

    // hodge
    auto* hcmd = app.add_subcommand("hodge", "hodge package diagnostics");
    std::string hfix, hmetric;
    hcmd->add_option("fixture", hfix)->required();
    hcmd->add_option("--metric", hmetric, "metric fixture file");

    // effective
    auto* fcmd = app.add_subcommand("effective", "effective action at a flat point");
    std::string ffix = "mexhat";
    int feps = 2;
    fcmd->add_option("fixture", ffix);
    fcmd->add_option("--eps-order", feps);

    // invariant
    auto* icmd = app.add_subcommand("invariant", "chart invariant report");
    std::string ichart, imetric_b, icounter;
    icmd->add_option("chart", ichart)->required();
    icmd->add_option("--metric-b", imetric_b, "second metric profile for comparison");
    icmd->add_option("--counterterm", icounter, "c1,S pair");

    // check-horizontality
    auto* ccmd = app.add_subcommand("check-horizontality", "Gauss-Manin residual convergence");
    std::string cfam = "torus-moduli";
    double cstep = 1e-2;
    ccmd->add_option("family", cfam);
    ccmd->add_option("--step", cstep, "base finite-difference step");

    // check-metric-independence
    auto* mcmd = app.add_subcommand("check-metric-independence", "Lambda under two metrics");
    std::string mchart;
    mcmd->add_option("chart", mchart)->required();

    // as-only
    auto* acmd = app.add_subcommand("as-only", "Axelrod-Singer-only control experiment");
    std::string achart;
    acmd->add_option("chart", achart)->required();

    CLI11_PARSE(app, argc, argv);
    Output out{report_path};

    try {
        if (*vcmd) {
            Metric<double> g;
            auto L = named_fixture(vfix, &g);
            auto rep = validate_dgla(L);
            std::string text = rep.to_string();
            bool pass = rep.pass(tolerance > 0 ? tolerance : 1e-12);
            text += std::string("result: ") + (pass ? "pass" : "fail") + "\n";
            out.write(text);
            return pass ? 0 : 1;
        }
        if (*ecmd) {
            auto gs = enumerate_trivalent_graphs(ev, el);
            out.write(encode_graph_list(gs));
            return 0;
        }
        if (*wcmd) {
            LieAlgebraData<Rational> L;
            if (wlie == "su2") L = su2<Rational>();
            else if (wlie == "su3") L = su3<Rational>();
            else if (!wlie.empty() && wlie[0] == '@') {
                std::ifstream f(wlie.substr(1));
                if (!f) throw ParseError("cannot open lie file");
                L = load_lie_fixture<Rational>(f);
            } else {
                throw ParseError("unknown lie algebra");
            }
            // parse encoding "V2:3,4,5,0,1,2" or "E"
            TrivalentGraph g;
            if (wgraph == "E") {
                g.single_edge = true;
                g.pairing = {1, 0};
                g.aut_order = 2;
            } else {
                if (wgraph.size() < 2 || wgraph[0] != 'V') throw ParseError("bad graph encoding");
                auto colon = wgraph.find(':');
                g.n_vertices = std::stoi(wgraph.substr(1, colon - 1));
                std::string rest = wgraph.substr(colon + 1);
                std::istringstream is(rest);
                std::string tok;
                while (std::getline(is, tok, ',')) g.pairing.push_back(std::stoi(tok));
                if (static_cast<int>(g.pairing.size()) != 3 * g.n_vertices)
                    throw ParseError("graph encoding size mismatch");
                g.aut_order = automorphism_order(g);
                g.loop_number = g.n_edges() - g.n_vertices + 1;
            }
            Mat<Rational> kinv = inverse(L.killing);
            std::vector<Mat<Rational>> edges(g.n_edges(), kinv);
            std::vector<std::vector<Rational>> leaves(
                g.n_leaves(), std::vector<Rational>(L.dim, Rational(1)));
            auto wgt = graph_pairing(g, L, edges, leaves);
            out.write("weight: " + wgt.to_string() + "\naut: " + std::to_string(g.aut_order) +
                      "\n");
            return 0;
        }
        if (*hcmd) {
            Metric<double> g;
            auto L = named_fixture(hfix, &g);
            if (g.g.rows() == 0) g = Metric<double>::identity(L);
            std::vector<double> A(L.total, 0.0);
            if (hfix == "mexhat") A = mexhat_circle_point(MexhatParams{}, 0.0);
            if (hfix == "mexhat-torus") A = mexhat_torus_point(0.0, 0.0);
            auto H = hodge_data(L, A, g);
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "hdims: %d %d %d %d\ncontraction_residual: %.3e\n", H.hdims[0],
                          H.hdims[1], H.hdims[2], H.hdims[3], contraction_residual(H));
            out.write(buf);
            return contraction_residual(H) <= 1e-10 ? 0 : 1;
        }
        if (*fcmd) {
            Metric<double> g;
            auto L = named_fixture(ffix, &g);
            if (g.g.rows() == 0) g = Metric<double>::identity(L);
            std::vector<double> A(L.total, 0.0);
            if (ffix == "mexhat") A = mexhat_circle_point(MexhatParams{}, 0.0);
            if (ffix == "mexhat-torus") A = mexhat_torus_point(0.0, 0.0);
            if (mc_residual(L, A) > tolerance) throw ParseError("base point is not flat");
            auto H = hodge_data(L, A, g);
            auto ctx = make_hatted_context(L, H, g, feps);
            auto W = effective_w(L, H, ctx);
            out.write("W terms (eps, odd monomial, even monomial, coefficient):\n" +
                      W.serialize());
            return 0;
        }
        if (*icmd || *mcmd || *acmd) {
            std::string path = *icmd ? ichart : (*mcmd ? mchart : achart);
            auto cs = load_chart_spec(path);
            if (grid > 0) cs.grid = grid;
            auto L = named_fixture(cs.fixture);
            auto ch = chart_from_spec(cs, L);
            if (*icmd) {
                double c1 = 0, sgrav = 0;
                if (!icounter.empty()) {
                    auto comma = icounter.find(',');
                    c1 = std::stod(icounter.substr(0, comma));
                    sgrav = std::stod(icounter.substr(comma + 1));
                }
                auto rep = full_invariant(ch, c1, sgrav, threads);
                std::string text = rep.to_text();
                if (!imetric_b.empty()) {
                    auto chb = chart_from_spec(cs, L, imetric_b);
                    auto repb = full_invariant(chb, c1, sgrav);
                    char buf[128];
                    for (size_t p = 0; p < rep.lambda.size(); ++p) {
                        std::snprintf(buf, sizeof buf, "metric_b_delta[%zu]: %.3e\n", p,
                                      std::fabs(rep.lambda[p] - repb.lambda[p]));
                        text += buf;
                    }
                }
                out.write(text);
                return 0;
            }
            if (*mcmd) {
                auto chb = chart_from_spec(cs, L, "conformal 0.7 0.45");
                auto ra = full_invariant(ch), rb = full_invariant(chb);
                char buf[160];
                std::string text;
                bool pass = true;
                for (size_t p = 0; p < std::min<size_t>(2, ra.lambda.size()); ++p) {
                    double diff = std::fabs(ra.lambda[p] - rb.lambda[p]);
                    double tol = 10 * std::max(ra.quad_error[p], rb.quad_error[p]);
                    pass = pass && diff <= tol;
                    std::snprintf(buf, sizeof buf,
                                  "order %zu: |delta| = %.3e  bound = %.3e  %s\n", p, diff, tol,
                                  diff <= tol ? "pass" : "FAIL");
                    text += buf;
                }
                out.write(text);
                return pass ? 0 : 1;
            }
            auto chb = chart_from_spec(cs, L, "conformal 0.7 0.45");
            auto rep = axelrod_singer_only(ch, chb);
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "as_difference: %.6e\nfull_difference: %.6e\nquad_error: %.3e\n",
                          rep.as_difference(), rep.full_difference(), rep.quad_error);
            out.write(buf);
            return 0;
        }
        if (*ccmd) {
            CyclicDgla<double> L;
            FamilyMaps<double> fam;
            if (cfam == "torus-moduli") {
                L = mexhat_torus<double>();
                fam.A = [](double t1, double t2) {
                    return mexhat_torus_point(0.4 + t1 + 0.3 * t2, 1.3 + t2);
                };
                int n = L.total;
                fam.g = [n](double, double) { return Mat<double>::identity(n); };
            } else {
                throw ParseError("unknown family '" + cfam + "'");
            }
            HorizontalityOptions opt;
            opt.h = cstep;
            auto r1 = horizontality_residual(L, fam, opt);
            opt.h = cstep / 2;
            auto r2 = horizontality_residual(L, fam, opt);
            double order = std::log2(std::max(r1.residual(), 1e-300) /
                                     std::max(r2.residual(), 1e-300));
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "residual(h): %.6e\nresidual(h/2): %.6e\nmeasured_order: %.3f\n",
                          r1.residual(), r2.residual(), order);
            out.write(buf);
            return order >= 1.9 ? 0 : 1;
        }
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ChartError& e) {
        std::cerr << "chart error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
