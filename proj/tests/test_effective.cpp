#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csmoduli/berezin.hpp"
#include "csmoduli/checked.hpp"
#include "csmoduli/fixtures.hpp"

using namespace csm;
using R = Rational;

namespace {
std::vector<R> rational_circle_point() {
    // (1,1,1) lies on the mexhat circle: u^2+v^2 = 2, w = 1
    return {R(1), R(1), R(1), R(0), R(0), R(0)};
}
}  // namespace

TEST_CASE("extended operators: zeta-degree-0 parts and bracket-0 degeneration") {
    auto L = mexhat<R>();
    Metric<R> g = Metric<R>::identity(L);
    auto A = rational_circle_point();
    auto H = hodge_data(L, A, g);
    auto ctx = make_hatted_context(L, H, g, 2);
    const Mat<R>* k0 = ctx.Khat.coeff(GrKey{});
    REQUIRE(k0 != nullptr);
    CHECK((*k0 - H.K).is_zero_exact());
    const Mat<R>* i0 = ctx.ihat.coeff(GrKey{});
    REQUIRE(i0 != nullptr);
    CHECK((*i0 - H.incl).is_zero_exact());

    // bracket = 0: Khat = K, ihat = i, theta = 0, W = 0
    auto LZ = f_zero<R>();
    std::vector<R> AZ(LZ.total, R(0));
    auto gz = Metric<R>::identity(LZ);
    auto HZ = hodge_data(LZ, AZ, gz);
    auto cz = make_hatted_context(LZ, HZ, gz, 2);
    CHECK(cz.Khat.terms.size() <= 1);  // only the constant (zero) part
    CHECK(cz.theta.empty());
    CHECK(effective_w(LZ, HZ, cz).empty());
}

TEST_CASE("theta: both displayed forms agree exactly") {
    // vacuous when dim H^1 = 1 (zeta^2 = 0), so use the su(2) frobenius
    // fixture with differential where dim H^1 = 6
    auto L = tensor_frobenius(su2<R>(), true);
    Metric<R> g = Metric<R>::identity(L);
    std::vector<R> A(L.total, R(0));
    auto H = hodge_data(L, A, g);
    auto ctx = make_hatted_context(L, H, g, 2);
    CHECK(!ctx.theta.empty());
    auto th1 = theta_first_form(L, H, ctx);
    CHECK((ctx.theta - th1).empty());
}

TEST_CASE("graph weights: relabeling invariance and decoration multilinearity") {
    auto L = mexhat<R>();
    Metric<R> g = Metric<R>::identity(L);
    auto A = rational_circle_point();
    auto H = hodge_data(L, A, g);
    auto ctx = make_hatted_context(L, H, g, 2);
    auto kernel = kernel_of(L, ctx.Khat, ctx.pairing_inv);
    auto leaf = ihat_leaf(L, ctx);
    for (auto [v, p] : std::vector<std::pair<int, int>>{{2, 0}, {1, 1}, {3, 1}, {4, 0}}) {
        for (const auto& gr : enumerate_trivalent_graphs(v, p)) {
            GraphDecorations<R> dec;
            dec.vertex = &ctx.vertex;
            dec.edge_kernels.assign(gr.n_edges(), kernel);
            dec.leaves.assign(gr.n_leaves(), leaf);
            auto base = graph_weight_finite(L, gr, dec, &ctx.alg);
            int count = 0, checked = 0;
            detail::for_each_dart_perm(gr.n_vertices, [&](const std::vector<int>& perm) {
                if (count++ % 23 != 0 || checked > 12) return;
                ++checked;
                TrivalentGraph h = gr;
                h.pairing = detail::relabel(gr.pairing, perm);
                CHECK((graph_weight_finite(L, h, dec, &ctx.alg) - base).empty());
            });
            // multilinearity in one edge kernel
            if (!base.empty() && gr.n_edges() > 0) {
                auto dec2 = dec;
                dec2.edge_kernels[0] = R(7) * dec2.edge_kernels[0];
                CHECK((graph_weight_finite(L, gr, dec2, &ctx.alg) - R(7) * base).empty());
            }
        }
    }
}

TEST_CASE("eps bookkeeping: every W monomial sits at l - 1 + zeta degree") {
    auto L = mexhat<R>();
    Metric<R> g = Metric<R>::identity(L);
    auto A = rational_circle_point();
    auto H = hodge_data(L, A, g);
    auto ctx = make_hatted_context(L, H, g, 2);
    auto kernel = kernel_of(L, ctx.Khat, ctx.pairing_inv);
    auto leaf = ihat_leaf(L, ctx);
    for (auto [v, p] : w_graph_classes(2, ctx.k)) {
        for (const auto& gr : enumerate_trivalent_graphs(v, p)) {
            GraphDecorations<R> dec;
            dec.vertex = &ctx.vertex;
            dec.edge_kernels.assign(gr.n_edges(), kernel);
            dec.leaves.assign(gr.n_leaves(), leaf);
            auto w = graph_weight_finite(L, gr, dec, &ctx.alg);
            for (const auto& [key, val] : w.terms()) {
                int zdeg = 0;
                for (int i = 0; i < ctx.m; ++i)
                    if (key.odd & (1u << i)) ++zdeg;
                CHECK(key.eps == zdeg);  // before the eps^{l-1} shift
            }
        }
    }
}

TEST_CASE("W on the rational circle point: structure and W0 = 0") {
    auto L = mexhat<R>();
    Metric<R> g = Metric<R>::identity(L);
    auto A = rational_circle_point();
    auto H = hodge_data(L, A, g);
    auto ctx = make_hatted_context(L, H, g, 2);
    auto W = effective_w(L, H, ctx);
    CHECK(!W.empty());
    for (const auto& [key, val] : W.terms()) CHECK(key.eps >= 1);  // W0 vanishes
}

TEST_CASE("orientation flip: pairing negation equals eps -> -eps on W") {
    auto L = mexhat<R>();
    Metric<R> g = Metric<R>::identity(L);
    auto A = rational_circle_point();
    auto H = hodge_data(L, A, g);
    auto ctx = make_hatted_context(L, H, g, 2);
    auto W = effective_w(L, H, ctx);

    CyclicDgla<R> Lneg = L;
    Lneg.pairing = -L.pairing;
    auto Hn = hodge_data(Lneg, A, g);  // metric data identical; pairing unused here
    auto ctxn = make_hatted_context(Lneg, Hn, g, 2);
    auto Wn = effective_w(Lneg, Hn, ctxn);

    // W_neg(eps) = W(-eps): compare coefficient-wise with the sign (-1)^eps
    for (const auto& [key, val] : W.terms()) {
        R expect = (key.eps % 2) ? -val : val;
        CHECK(Wn.coeff(key) == expect);
    }
    size_t n1 = W.n_terms(), n2 = Wn.n_terms();
    CHECK(n1 == n2);
}

TEST_CASE("volume form Y equals the wick oracle exactly at eps orders 0..2") {
    // dim H^1 = 1 rational point; a non-identity rational metric keeps the
    // eps^1 coefficient away from the symmetric zero of the identity metric
    {
        auto L = mexhat<R>();
        Metric<R> g = Metric<R>::identity(L);
        g.g(0, 1) = g.g(1, 0) = R(1, 4);
        g.g(2, 2) = R(3, 2);
        g.g(4, 4) = R(2);
        auto A = rational_circle_point();
        auto H = hodge_data(L, A, g);
        auto ctx = make_hatted_context(L, H, g, 2);
        auto W = effective_w(L, H, ctx);
        auto y = volume_form_y(L, ctx, W, R(1));
        auto w = wick_oracle(L, ctx, W, R(1));
        for (int p = 0; p <= 2; ++p) CHECK(y[p] == w[p]);
        CHECK(y[0] == R(1));
        CHECK(y[1] == R(95, 1152));
        CHECK(!y[2].is_zero());
    }
    // dim H^1 = 2 rational torus point (1,1,1) x (1,1,1)
    {
        auto L = mexhat_torus<R>();
        Metric<R> g = Metric<R>::identity(L);
        std::vector<R> A(L.total, R(0));
        A[0] = R(1);
        A[1] = R(1);
        A[2] = R(1);
        A[3] = R(1);
        A[4] = R(1);
        A[5] = R(1);
        // r^2 = 3/2: scale the circle radii rationally: (u,v) = (1, sqrt(1/2))
        // is irrational, so use the valid rational point u^2+v^2 = 3/2:
        // (1/2, 1/2)? 1/4+1/4 = 1/2 no. (1, 1/sqrt2) no. Use (3/2 = 9/4 + ...):
        // u = 1/2, v^2 = 5/4 no. Take u = 3/5, v = ... need rational point on
        // x^2 + y^2 = 3/2: scale by 2: X^2+Y^2 = 6 with X=2u: no rational
        // points (6 not a sum of two rational squares? 6 = not expressible:
        // by Fermat, since 3 | 6 with odd exponent). Fall back to doubles.
        auto Ld = mexhat_torus<double>();
        Metric<double> gd = Metric<double>::identity(Ld);
        auto Ad = mexhat_torus_point(0.7, 2.1);
        auto Hd = hodge_data(Ld, Ad, gd);
        auto cd = make_hatted_context(Ld, Hd, gd, 2);
        auto Wd = effective_w(Ld, Hd, cd);
        auto yd = volume_form_y(Ld, cd, Wd, 1.0);
        auto wd = wick_oracle(Ld, cd, Wd, 1.0);
        for (int p = 0; p <= 2; ++p) CHECK(yd[p] == doctest::Approx(wd[p]).epsilon(1e-12));
        CHECK(yd[0] == doctest::Approx(1.0));
    }
}

TEST_CASE("random quadratic series: Y equals wick oracle") {
    // exercise the integrators on synthetic W with m = k = 2, exact rationals
    GrAlgebra alg = GrAlgebra::make(4, 0, 2, 0, -1);
    HattedContext<R> ctx;
    ctx.alg = alg;
    ctx.m = 2;
    ctx.k = 2;
    CyclicDgla<R> dummy = f_zero<R>();
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> coe(-3, 3);
    for (int t = 0; t < 30; ++t) {
        SuperSeries<R> W(&ctx.alg);
        for (int tries = 0; tries < 8; ++tries) {
            GrKey k;
            k.eps = 1 + static_cast<int>(rng() % 2);
            k.odd = static_cast<std::uint32_t>(rng() & 0xf);
            W.add_term(k, R(coe(rng)));
        }
        // drop scalar parts so exp is defined
        SuperSeries<R> Wc(&ctx.alg);
        for (const auto& [key, v] : W.terms())
            if (!(key.odd == 0 && key.eps == 0)) Wc.add_term(key, v);
        auto y = volume_form_y(dummy, ctx, Wc, R(1));
        auto w = wick_oracle(dummy, ctx, Wc, R(1));
        for (int p = 0; p <= 2; ++p) CHECK(y[p] == w[p]);
    }
}

TEST_CASE("diagonal restriction: W-check minus pairing term equals W exactly") {
    auto L = mexhat<R>();
    Metric<R> g = Metric<R>::identity(L);
    auto A = rational_circle_point();
    auto H = hodge_data(L, A, g);
    auto hat = make_hatted_context(L, H, g, 2);
    auto W = effective_w(L, H, hat);

    std::vector<Direction<R>> dirs;
    for (int a = 0; a < hat.m; ++a) {
        Direction<R> d;
        d.dA.assign(L.total, R(0));
        for (int i = 0; i < L.total; ++i) d.dA[i] = hat.h1_frame(i, a);
        d.dAprime = d.dA;
        d.dg = Mat<R>(L.total, L.total);
        dirs.push_back(d);
    }
    auto ctx = make_checked_context(L, H, g, dirs, hat.h1_frame, 2, 0);
    auto Wc = wcheck(L, H, ctx);
    CHECK(eps_minus_one_residual(Wc) == 0.0);
    auto diff = Wc - ctx.pairing_term - W;  // theta and zeta ids coincide (r == m)
    CHECK(diff.empty());
}

TEST_CASE("checked objects with zero directions reduce to undressed data") {
    auto L = mexhat<R>();
    Metric<R> g = Metric<R>::identity(L);
    auto A = rational_circle_point();
    auto H = hodge_data(L, A, g);
    Mat<R> h1(L.total, 1);
    for (int i = 0; i < L.total; ++i) h1(i, 0) = H.incl(i, H.h_offset(1));
    Direction<R> zero;
    zero.dA.assign(L.total, R(0));
    zero.dAprime = zero.dA;
    zero.dg = Mat<R>(L.total, L.total);
    auto ctx = make_checked_context(L, H, g, {zero}, h1, 2, 0);
    CHECK(ctx.pairing_term.empty());
    // Kcheck reduces to K
    for (const auto& [key, mat] : ctx.Kcheck.terms)
        if (!(key == GrKey{})) CHECK(mat.max_abs() == 0.0);
    auto Wc = wcheck(L, H, ctx);
    // no theta-dependent terms survive
    for (const auto& [key, v] : Wc.terms()) CHECK((key.odd & 1u) == 0);
}
