// Python bindings for the main operations: graph combinatorics, weight
// systems, fixture validation, Hodge diagnostics, transfer, effective
// actions, Berezin volume forms, chart invariants, and the horizontality
// residual.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "csmoduli/chart.hpp"
#include "csmoduli/fixtures.hpp"
#include "csmoduli/horizontality.hpp"
#include "csmoduli/io.hpp"

namespace py = pybind11;
using namespace csm;

namespace {

constexpr double kPi = 3.14159265358979323846;

CyclicDgla<double> fixture_by_name(const std::string& name) {
    if (name == "mexhat") return mexhat<double>();
    if (name == "mexhat-torus") return mexhat_torus<double>();
    if (name == "f-zero") return f_zero<double>();
    if (name == "f-sym") return f_sym<double>();
    if (name == "two-term") return two_term<double>();
    if (name == "su2-lambda3") return tensor_frobenius(su2<double>(), false);
    if (name == "su2-lambda3-d") return tensor_frobenius(su2<double>(), true);
    std::ifstream f(name);
    if (!f) throw std::invalid_argument("unknown fixture " + name);
    return load_dgla_fixture<double>(f);
}

std::vector<double> base_point(const std::string& name, double t) {
    if (name == "mexhat") return mexhat_circle_point(MexhatParams{}, 2 * kPi * t);
    if (name == "mexhat-torus") return mexhat_torus_point(2 * kPi * t, 1.3);
    auto L = fixture_by_name(name);
    return std::vector<double>(L.total, 0.0);
}

Mat<double> base_metric_profile(const CyclicDgla<double>& L, double t) {
    Mat<double> g = Mat<double>::identity(L.total);
    if (L.total >= 6) {
        double c = std::cos(2 * kPi * t), s = std::sin(2 * kPi * t);
        g(0, 0) += 0.3 * c * c;
        g(1, 1) += 0.2 * s * s;
        g(0, 1) = g(1, 0) = 0.15 * s * c;
        g(3, 3) = 1.2;
        g(4, 5) = g(5, 4) = 0.2 * s;
    }
    return g;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite-dimensional perturbative Chern-Simons engine";

    m.def("trivalent_graphs", [](int v, int l) {
        py::list out;
        for (const auto& g : enumerate_trivalent_graphs(v, l)) {
            py::dict d;
            d["encoding"] = g.encode();
            d["aut_order"] = g.aut_order;
            d["loop_number"] = g.loop_number;
            d["edges"] = g.n_edges();
            d["leaves"] = g.n_leaves();
            out.append(d);
        }
        return out;
    });

    m.def("binary_tree_counts", [](int n_max) {
        std::vector<std::pair<size_t, long long>> out;
        for (int n = 1; n <= n_max; ++n) {
            auto ts = enumerate_binary_trees(n);
            long long auts = 0;
            for (const auto& t : ts) auts += t.aut_order;
            out.emplace_back(ts.size(), auts);
        }
        return out;
    });

    m.def("theta_weight_su2", []() {
        auto L = su2<Rational>();
        auto gs = enumerate_trivalent_graphs(2, 0);
        const TrivalentGraph& theta = gs[0].aut_order == 12 ? gs[0] : gs[1];
        Mat<Rational> kinv = inverse(L.killing);
        return graph_pairing(theta, L, {kinv, kinv, kinv}, {}).to_double();
    });

    m.def("ihx_residual", [](const std::string& which) {
        if (which == "su2") return check_ihx(su2<Rational>());
        if (which == "su3") return check_ihx(su3<Rational>());
        throw std::invalid_argument("expected su2 or su3");
    });

    m.def("c_leading", [](const std::string& which) {
        if (which == "su2") return c_leading(su2<Rational>());
        if (which == "su3") return c_leading(su3<Rational>());
        throw std::invalid_argument("expected su2 or su3");
    });

    m.def("validate_fixture", [](const std::string& name) {
        auto L = fixture_by_name(name);
        auto rep = validate_dgla(L);
        py::dict d;
        d["worst_residual"] = rep.worst();
        d["nondegenerate"] = rep.pairing_nondegenerate;
        d["pass"] = rep.pass();
        return d;
    });

    m.def("mc_residual", [](const std::string& name, double t) {
        auto L = fixture_by_name(name);
        return mc_residual(L, base_point(name, t));
    });

    m.def("hodge_summary", [](const std::string& name, double t) {
        auto L = fixture_by_name(name);
        Metric<double> g = Metric<double>::identity(L);
        auto H = hodge_data(L, base_point(name, t), g);
        py::dict d;
        d["hdims"] = std::vector<int>(H.hdims.begin(), H.hdims.end());
        d["contraction_residual"] = contraction_residual(H);
        return d;
    });

    m.def("torsion_value", [](const std::string& name, double t) {
        auto L = fixture_by_name(name);
        Metric<double> g = Metric<double>::identity(L);
        auto H = hodge_data(L, base_point(name, t), g);
        std::vector<std::vector<double>> frames;
        for (int j = 0; j < H.h_total; ++j) {
            std::vector<double> col(L.total);
            for (int i = 0; i < L.total; ++i) col[i] = H.incl(i, j);
            frames.push_back(col);
        }
        return torsion(L, H, g, frames).tau;
    });

    m.def("effective_action", [](const std::string& name, double t, int eps_order) {
        auto L = fixture_by_name(name);
        Metric<double> g = Metric<double>::identity(L);
        auto A = base_point(name, t);
        auto H = hodge_data(L, A, g);
        auto ctx = make_hatted_context(L, H, g, eps_order);
        return effective_w(L, H, ctx).serialize();
    });

    m.def("volume_form", [](const std::string& name, double t, int eps_order) {
        auto L = fixture_by_name(name);
        Metric<double> g = Metric<double>::identity(L);
        auto A = base_point(name, t);
        auto H = hodge_data(L, A, g);
        auto ctx = make_hatted_context(L, H, g, eps_order);
        auto W = effective_w(L, H, ctx);
        return volume_form_y(L, ctx, W, 1.0);
    });

    m.def(
        "chart_invariant",
        [](const std::string& fixture, int grid, const std::string& metric) {
            auto L = fixture_by_name(fixture);
            ChartOptions opt;
            opt.grid_n = grid;
            MexhatParams P;
            auto ch = build_chart(
                L, [&](double t) { return mexhat_circle_point(P, 2 * kPi * t); },
                [&](double t) {
                    auto g = base_metric_profile(L, t);
                    if (metric == "conformal") {
                        double s = std::sin(2 * kPi * t), c = std::cos(2 * kPi * t);
                        double f1 = 1 + 0.4 * s * s, f2 = std::exp(0.3 * c);
                        for (int i = 0; i < 3; ++i)
                            for (int j = 0; j < 3; ++j) g(i, j) *= f1;
                        for (int i = 3; i < 6; ++i)
                            for (int j = 3; j < 6; ++j) g(i, j) *= f2;
                    }
                    return g;
                },
                opt);
            auto rep = full_invariant(ch);
            py::dict d;
            d["lambda"] = rep.lambda;
            d["quad_error"] = rep.quad_error;
            d["report"] = rep.to_text();
            return d;
        },
        py::arg("fixture") = "mexhat", py::arg("grid") = 32, py::arg("metric") = "base");

    m.def("horizontality", [](double h, double theta_scale) {
        auto L = mexhat_torus<double>();
        FamilyMaps<double> fam;
        fam.A = [](double t1, double t2) {
            return mexhat_torus_point(0.4 + t1 + 0.3 * t2, 1.3 + t2);
        };
        int n = L.total;
        fam.g = [n](double, double) { return Mat<double>::identity(n); };
        HorizontalityOptions opt;
        opt.h = h;
        opt.theta_scale = theta_scale;
        auto r = horizontality_residual(L, fam, opt);
        py::dict d;
        d["residual_1form"] = r.residual_1form;
        d["residual_2form"] = r.residual_2form;
        d["eps_minus_one"] = r.eps_minus_one;
        return d;
    }, py::arg("h") = 1e-2, py::arg("theta_scale") = 1.0);
}
