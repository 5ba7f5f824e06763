#pragma once

// Moduli charts: sampled closed families of smooth irreducible flat elements
// with metric families, tangent harmonic frames, the torsion density branch,
// and the quadrature-level invariants Lambda_0, Lambda_1, the Phi terms, the
// Xi 1-form, and the Axelrod-Singer-only control experiment.
//
// Densities: the chart carries rho(t), the half-density-covariant branch;
// in terms of the torsion value tau of torsion() it is tau^{-1/4} (the chart
// field tau_density = rho^2 is what "tau^{1/2}" integrates as).

#include <functional>
#include <string>
#include <atomic>
#include <thread>

#include "csmoduli/berezin.hpp"
#include "csmoduli/transfer.hpp"

namespace csm {

struct ChartOptions {
    int grid_n = 64;
    double mc_tol = 1e-10;
    double smooth_tol = 1e-8;
    int n_max = 4;
    int eps_max = 2;
    int orientation = +1;
    bool classify_points = true;  // smoothness scan can be skipped for speed
};

struct ChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ModuliChart {
  public:
    const CyclicDgla<double>* L = nullptr;
    ChartOptions opt;
    std::vector<std::vector<double>> A;
    std::vector<Metric<double>> g;
    std::vector<HodgeData<double>> hodge;
    std::vector<Mat<double>> h1, h2;  // tangent frames and pairing duals
    std::vector<double> rho;          // density branch
    std::vector<double> tau;          // torsion values (spec normalization)
    int m = 0, k = 0;

    int n() const { return opt.grid_n; }
    double dt() const { return 1.0 / opt.grid_n; }
};

// Tabulate and validate a circle chart. The family maps take t in [0, 1).
inline ModuliChart build_chart(const CyclicDgla<double>& L,
                               const std::function<std::vector<double>(double)>& A_of,
                               const std::function<Mat<double>(double)>& g_of,
                               const ChartOptions& opt) {
    ModuliChart ch;
    ch.L = &L;
    ch.opt = opt;
    int N = opt.grid_n;
    const double fd = 1e-6;
    for (int i = 0; i < N; ++i) {
        double t = static_cast<double>(i) / N;
        auto At = A_of(t);
        double mc = mc_residual(L, At);
        if (mc > opt.mc_tol)
            throw ChartError("chart point " + std::to_string(i) +
                             ": MC residual " + std::to_string(mc));
        Metric<double> gt;
        gt.g = g_of(t);
        if (!gt.validate(L)) throw ChartError("chart metric invalid at point " + std::to_string(i));
        auto H = hodge_data(L, At, gt);
        if (H.hdims[0] != 0)
            throw ChartError("chart point reducible: H^0 != 0");
        if (H.hdims[1] != H.hdims[2])
            throw ChartError("chart point with dim H^1 != dim H^2");
        if (opt.classify_points) {
            for (int nn = 2; nn <= opt.n_max; ++nn)
                if (l_op_norm(L, H, nn) > opt.smooth_tol)
                    throw ChartError("chart point not smooth: l'_" + std::to_string(nn));
        }
        // tangent frame: harmonic projection of dA/dt
        auto Ap = A_of(t + fd), Am = A_of(t - fd);
        std::vector<double> dA(L.total);
        for (int b = 0; b < L.total; ++b) dA[b] = (Ap[b] - Am[b]) / (2 * fd);
        auto chi = H.P.apply(dA);
        double nrm = 0;
        for (double x : chi) nrm += x * x;
        if (nrm < 1e-16) throw ChartError("degenerate tangent frame");
        Mat<double> h1(L.total, H.hdims[1]);
        if (H.hdims[1] == 1) {
            for (int b = 0; b < L.total; ++b) h1(b, 0) = chi[b];
        } else {
            throw ChartError("circle charts require dim H^1 = 1");
        }
        auto h2 = dual_h2_frame(L, H, h1);
        std::vector<std::vector<double>> frames;
        {
            std::vector<double> c1(L.total), c2(L.total);
            for (int b = 0; b < L.total; ++b) {
                c1[b] = h1(b, 0);
                c2[b] = h2(b, 0);
            }
            frames.push_back(c1);
            frames.push_back(c2);
        }
        auto tv = torsion(L, H, gt, frames);
        ch.A.push_back(std::move(At));
        ch.g.push_back(std::move(gt));
        ch.hodge.push_back(std::move(H));
        ch.h1.push_back(std::move(h1));
        ch.h2.push_back(std::move(h2));
        ch.tau.push_back(tv.tau);
        ch.rho.push_back(std::exp(-0.25 * tv.log_tau));
    }
    ch.m = ch.hodge[0].hdims[1];
    ch.k = ch.hodge[0].hdims[2];
    // frame continuity: overlaps of neighboring tangent frames stay positive
    for (int i = 0; i < N; ++i) {
        int j = (i + 1) % N;
        double dot = 0;
        for (int b = 0; b < L.total; ++b) dot += ch.h1[i](b, 0) * ch.h1[j](b, 0);
        if (dot <= 0) throw ChartError("frame continuation failed between grid points");
    }
    return ch;
}

// Periodic trapezoid of tabulated values, oriented.
inline double chart_quadrature(const ModuliChart& ch, const std::vector<double>& values) {
    double s = 0;
    for (double v : values) s += v;
    return ch.opt.orientation * s * ch.dt();
}

inline double lambda0(const ModuliChart& ch) { return chart_quadrature(ch, ch.rho); }

struct PhiTerms {
    double phi1 = 0, phi2 = 0, phi3 = 0, phi4 = 0, phi5 = 0, phi6 = 0;
    double sum() const { return phi1 + phi2 + phi3 + phi4 + phi5 + phi6; }
};

// The six Lambda_1 graph terms at one chart point. Signs follow the Berezin
// extraction of Y (the displayed formulas fix them only up to the graph
// orientation conventions); phi1+..+phi6 equals the eps^1 coefficient of the
// normalized volume form exactly.
inline PhiTerms phi_terms(const ModuliChart& ch, int i) {
    const auto& L = *ch.L;
    const auto& H = ch.hodge[i];
    const auto& g = ch.g[i];
    PhiTerms out;
    auto vt = VertexTensor<double>::build(L);
    Mat<double> pinv = inverse(L.pairing);
    GrAlgebra triv = GrAlgebra::make(0, 0, 0, 0, 0);
    auto weight = [&](const TrivalentGraph& gr, const std::vector<Mat<double>>& kers,
                      const std::vector<std::vector<double>>& lvs) {
        GraphDecorations<double> dec;
        dec.vertex = &vt;
        for (const auto& km : kers)
            dec.edge_kernels.push_back(OpSeries<double>::constant(&triv, km));
        for (const auto& lv : lvs) {
            VecSeries<double> v(&triv, L.total);
            v.add(GrKey{}, lv);
            dec.leaves.push_back(v);
        }
        return graph_weight_finite(L, gr, dec, &triv).coeff(GrKey{});
    };
    auto two = enumerate_trivalent_graphs(2, 0);
    const TrivalentGraph& theta_g = two[0].aut_order == 12 ? two[0] : two[1];
    const TrivalentGraph& dumb_g = two[0].aut_order == 8 ? two[0] : two[1];
    const TrivalentGraph loop_g = enumerate_trivalent_graphs(1, 1)[0];
    Mat<double> kK = H.K * pinv;
    out.phi1 = weight(theta_g, {kK, kK, kK}, {}) / 12.0;
    out.phi2 = weight(dumb_g, {kK, kK, kK}, {}) / 8.0;
    int m = ch.m;
    for (int a = 0; a < m; ++a) {
        std::vector<double> chi(L.total), chib(L.total);
        for (int b = 0; b < L.total; ++b) {
            chi[b] = ch.h1[i](b, a);
            chib[b] = ch.h2[i](b, a);
        }
        auto adw = adjoint_ad(L, g, chi);
        Mat<double> kdress = (H.K * adw * H.G) * pinv;
        out.phi3 += -0.5 * weight(loop_g, {kdress}, {chib});
        out.phi4 += -0.5 * weight(loop_g, {kK}, {H.G.apply(adw.apply(chib))});
    }
    // phi5, phi6 from the self-Wick of Theta: the fermionic pairings carry
    // opposite signs, so the diagonal a = b drops out
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            std::vector<double> chia(L.total), chib_(L.total), dua(L.total), dub(L.total);
            for (int c = 0; c < L.total; ++c) {
                chia[c] = ch.h1[i](c, a);
                chib_[c] = ch.h1[i](c, b);
                dua[c] = ch.h2[i](c, a);
                dub[c] = ch.h2[i](c, b);
            }
            auto ada = adjoint_ad(L, g, chia);
            auto adb = adjoint_ad(L, g, chib_);
            Mat<double> core = adb * H.G * H.d * H.G * ada;
            double m_ab_ba = L.pair(dub, core.apply(dua));  // <chi^b, ad_b G d G ad_a chi^a>
            double m_ab_ab = L.pair(dua, core.apply(dub));  // <chi^a, ad_b G d G ad_a chi^b>
            out.phi5 += -0.5 * m_ab_ab;
            out.phi6 += 0.5 * m_ab_ba;
        }
    return out;
}

// Per-point normalized volume-form coefficients rho * Y(eps).
inline std::vector<double> chart_y_point(const ModuliChart& ch, int i) {
    const auto& L = *ch.L;
    auto ctx = make_hatted_context(L, ch.hodge[i], ch.g[i], ch.opt.eps_max, &ch.h1[i]);
    auto W = effective_w(L, ch.hodge[i], ctx);
    auto y = volume_form_y(L, ctx, W, 1.0);
    for (auto& v : y) v *= ch.rho[i];
    return y;
}

// Scalar part only (theta and dumbbell sector): the Axelrod-Singer diagrams.
inline double chart_as_point(const ModuliChart& ch, int i) {
    auto p = phi_terms(ch, i);
    return ch.rho[i] * (p.phi1 + p.phi2);
}

struct InvariantReport {
    std::vector<double> lambda;      // eps coefficients
    std::vector<double> quad_error;  // per coefficient estimate
    double lambda0 = 0;
    double lambda1_phi_sum = 0;      // quadrature of rho * sum Phi_i
    double counterterm_c1 = 0, s_grav = 0;
    int grid_n = 0;

    std::string to_text() const {
        std::string s;
        char buf[160];
        std::snprintf(buf, sizeof buf, "grid_n: %d\n", grid_n);
        s += buf;
        for (size_t p = 0; p < lambda.size(); ++p) {
            std::snprintf(buf, sizeof buf, "lambda[%zu]: %.17g\nquad_error[%zu]: %.3e\n", p,
                          lambda[p], p, quad_error[p]);
            s += buf;
        }
        std::snprintf(buf, sizeof buf, "lambda0: %.17g\nlambda1_phi_sum: %.17g\n", lambda0,
                      lambda1_phi_sum);
        s += buf;
        std::snprintf(buf, sizeof buf, "counterterm_c1: %.17g\ns_grav: %.17g\n", counterterm_c1,
                      s_grav);
        s += buf;
        return s;
    }
};

inline InvariantReport full_invariant(const ModuliChart& ch, double counterterm_c1 = 0,
                                      double s_grav = 0, int threads = 1) {
    InvariantReport rep;
    rep.grid_n = ch.n();
    int ne = ch.opt.eps_max;
    std::vector<std::vector<double>> y_all(ch.n());
    if (threads <= 1) {
        for (int i = 0; i < ch.n(); ++i) y_all[i] = chart_y_point(ch, i);
    } else {
        // grid points are independent; accumulation below stays in index order
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < ch.n(); i = next.fetch_add(1))
                    y_all[i] = chart_y_point(ch, i);
            });
        for (auto& th : pool) th.join();
    }
    rep.lambda.assign(ne + 1, 0.0);
    std::vector<double> half(ne + 1, 0.0);
    for (int i = 0; i < ch.n(); ++i)
        for (int p = 0; p <= ne; ++p) {
            rep.lambda[p] += ch.opt.orientation * y_all[i][p] * ch.dt();
            if (i % 2 == 0) half[p] += ch.opt.orientation * y_all[i][p] * 2 * ch.dt();
        }
    rep.quad_error.assign(ne + 1, 0.0);
    for (int p = 0; p <= ne; ++p)
        rep.quad_error[p] = std::fabs(rep.lambda[p] - half[p]) + 1e-13;
    // counterterm bookkeeping: multiply by exp(c(eps) S_grav), c = c1 eps
    if (counterterm_c1 != 0 && s_grav != 0) {
        double cs = counterterm_c1 * s_grav;
        std::vector<double> shifted = rep.lambda;
        for (int p = 0; p <= ne; ++p) {
            double acc = 0, fact = 1;
            for (int q = 0; q <= p; ++q) {
                if (q > 0) fact *= cs / q;
                acc += fact * rep.lambda[p - q];
            }
            shifted[p] = acc;
        }
        rep.lambda = shifted;
    }
    rep.counterterm_c1 = counterterm_c1;
    rep.s_grav = s_grav;
    rep.lambda0 = lambda0(ch);
    std::vector<double> phis(ch.n());
    for (int i = 0; i < ch.n(); ++i) phis[i] = ch.rho[i] * phi_terms(ch, i).sum();
    rep.lambda1_phi_sum = chart_quadrature(ch, phis);
    return rep;
}

inline double lambda1(const ModuliChart& ch, double counterterm = 0) {
    std::vector<double> phis(ch.n());
    for (int i = 0; i < ch.n(); ++i) phis[i] = ch.rho[i] * phi_terms(ch, i).sum();
    return chart_quadrature(ch, phis) + counterterm * lambda0(ch);
}

struct AsOnlyReport {
    double as_a = 0, as_b = 0;       // Phi1+Phi2 quadratures under both metrics
    double full_a = 0, full_b = 0;   // full eps^1 invariant under both metrics
    double quad_error = 0;
    double as_difference() const { return std::fabs(as_a - as_b); }
    double full_difference() const { return std::fabs(full_a - full_b); }
};

inline AsOnlyReport axelrod_singer_only(const ModuliChart& a, const ModuliChart& b) {
    AsOnlyReport rep;
    std::vector<double> va(a.n()), vb(b.n());
    for (int i = 0; i < a.n(); ++i) va[i] = chart_as_point(a, i);
    for (int i = 0; i < b.n(); ++i) vb[i] = chart_as_point(b, i);
    rep.as_a = chart_quadrature(a, va);
    rep.as_b = chart_quadrature(b, vb);
    auto ra = full_invariant(a), rb = full_invariant(b);
    rep.full_a = ra.lambda[1];
    rep.full_b = rb.lambda[1];
    rep.quad_error = std::max(ra.quad_error[1], rb.quad_error[1]);
    return rep;
}

// The Xi 1-form coefficient at a chart point for a metric variation. The four
// displayed terms with iota_chi of the density; signs follow the same Wick
// conventions as phi_terms.
inline double xi_form(const ModuliChart& ch, int i, const Mat<double>& dg) {
    const auto& L = *ch.L;
    const auto& H = ch.hodge[i];
    const auto& g = ch.g[i];
    Mat<double> lam = inverse(g.g) * dg;
    auto vt = VertexTensor<double>::build(L);
    Mat<double> pinv = inverse(L.pairing);
    GrAlgebra triv = GrAlgebra::make(0, 0, 0, 0, 0);
    auto weight = [&](const TrivalentGraph& gr, const std::vector<Mat<double>>& kers,
                      const std::vector<std::vector<double>>& lvs) {
        GraphDecorations<double> dec;
        dec.vertex = &vt;
        for (const auto& km : kers)
            dec.edge_kernels.push_back(OpSeries<double>::constant(&triv, km));
        for (const auto& lv : lvs) {
            VecSeries<double> v(&triv, L.total);
            v.add(GrKey{}, lv);
            dec.leaves.push_back(v);
        }
        return graph_weight_finite(L, gr, dec, &triv).coeff(GrKey{});
    };
    const TrivalentGraph loop_g = enumerate_trivalent_graphs(1, 1)[0];
    Mat<double> kK = H.K * pinv;
    double total = 0;
    for (int a = 0; a < ch.m; ++a) {
        std::vector<double> chi(L.total), chib(L.total);
        for (int b = 0; b < L.total; ++b) {
            chi[b] = ch.h1[i](b, a);
            chib[b] = ch.h2[i](b, a);
        }
        double term = 0;
        // (1/2) < eta^Delta ^ K lambda chi^a, f >
        term += 0.5 * weight(loop_g, {kK}, {H.K.apply(lam.apply(chib))});
        // (1/2) < [K lambda K]^Delta ^ chi^a, f >
        term += 0.5 * weight(loop_g, {(H.K * lam * H.K) * pinv}, {chib});
        for (int b = 0; b < ch.m; ++b) {
            std::vector<double> chib2(L.total), chbv(L.total);
            for (int c = 0; c < L.total; ++c) {
                chib2[c] = ch.h2[i](c, b);
                chbv[c] = ch.h1[i](c, b);
            }
            auto adb = adjoint_ad(L, g, chbv);
            term += L.pair(chib2, lam.apply(H.G.apply(adb.apply(chib))));
            term += L.pair(chib2, adb.apply(H.G.apply(lam.apply(chib))));
        }
        // iota_{chi_a} of the density: for circle charts the tangent frame
        // contraction is the density value itself
        total += ch.rho[i] * term;
    }
    return total;
}

}  // namespace csm
