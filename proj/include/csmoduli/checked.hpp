#pragma once

// Desynchronized ("checked") effective action on zero-modes a = a1 + a2 with
// gauge-fixing 1-form directions, the Grothendieck connection data R, and the
// finite-difference horizontality residual of the Gauss-Manin superconnection.

#include "csmoduli/berezin.hpp"
#include "csmoduli/effective.hpp"
#include "csmoduli/transfer.hpp"

namespace csm {

template <class T>
struct Direction {
    std::vector<T> dA, dAprime;  // degree-1 elements
    Mat<T> dg;                   // symmetric block variation of the metric
};

// Family derivatives of the contraction data along each direction: the
// honest homological-perturbation dressings are built from these rather
// than from the displayed connection 1-forms.
template <class T>
struct DressingData {
    std::vector<Mat<T>> Kdot;   // one per direction, total x total
    std::vector<Mat<T>> Xdot;   // one per direction, total x (m + k): frame derivatives
};

template <class T>
struct CheckedContext {
    GrAlgebra alg;  // odd: theta_1..theta_r then a2_1..a2_k; even: a1_1..a1_m
    int r = 0, m = 0, k = 0;
    int eps_requested = 0;  // the algebra holds one extra order of headroom
    Mat<T> h1_frame, h2_frame;  // harmonic frames (h2 pairing-dual to h1)
    std::vector<Mat<T>> Hop;    // total connection 1-form per direction
    OpSeries<T> Kcheck;         // dressed propagator
    OpSeries<T> icheck_dress;   // 1 - eps K H + eps^2 K H K H
    VecSeries<T> leaf;          // icheck applied to a1 + a2, plus eps K dA
    SuperSeries<T> pairing_term;  // < [dA], a2 >
    SuperSeries<T> theta_check;   // (eps/2) < a2, p H K H i a2 >
    VertexTensor<T> vertex;
    Mat<T> pairing_inv;

    int theta_id(int j) const { return j; }
    int a2_id(int b) const { return r + b; }
};

template <class T>
CheckedContext<T> make_checked_context(const CyclicDgla<T>& L, const HodgeData<T>& H,
                                       const Metric<T>& g,
                                       const std::vector<Direction<T>>& dirs,
                                       const Mat<T>& h1_frame, int eps_max, int even_max,
                                       const DressingData<T>* family = nullptr) {
    CheckedContext<T> ctx;
    ctx.r = static_cast<int>(dirs.size());
    ctx.m = H.hdims[1];
    ctx.k = H.hdims[2];
    // one order of eps headroom for the single-edge term's 1/(2 eps) shift
    ctx.eps_requested = eps_max;
    ctx.alg = GrAlgebra::make(ctx.r + ctx.k, ctx.m, eps_max + 1, even_max, -1);
    for (int j = 0; j < ctx.r; ++j) ctx.alg.odd_names[j] = "th" + std::to_string(j);
    for (int b = 0; b < ctx.k; ++b) ctx.alg.odd_names[ctx.r + b] = "a2_" + std::to_string(b);
    for (int a = 0; a < ctx.m; ++a) ctx.alg.even_names[a] = "a1_" + std::to_string(a);
    ctx.vertex = VertexTensor<T>::build(L);
    ctx.pairing_inv = inverse(L.pairing);
    ctx.h1_frame = h1_frame;
    ctx.h2_frame = dual_h2_frame(L, H, h1_frame);

    OpSeries<T> K = OpSeries<T>::constant(&ctx.alg, H.K);
    OpSeries<T> one = OpSeries<T>::constant(&ctx.alg, Mat<T>::identity(L.total));
    OpSeries<T> eps = OpSeries<T>::monomial(&ctx.alg, [] {
        GrKey kk;
        kk.eps = 1;
        return kk;
    }(), Mat<T>::identity(L.total));

    // a = a1 + a2 as a vector series of harmonic representatives
    VecSeries<T> a_series(&ctx.alg, L.total);
    for (int a = 0; a < ctx.m; ++a) {
        std::vector<T> col(L.total);
        for (int i = 0; i < L.total; ++i) col[i] = ctx.h1_frame(i, a);
        GrKey kk;
        kk.even = 1ull << (8 * a);
        a_series.add(kk, col);
    }
    for (int b = 0; b < ctx.k; ++b) {
        std::vector<T> col(L.total);
        for (int i = 0; i < L.total; ++i) col[i] = ctx.h2_frame(i, b);
        GrKey kk;
        kk.odd = 1u << ctx.a2_id(b);
        a_series.add(kk, col);
    }

    if (!family) {
        // Dressing 1-form from the displayed connection formulas. The
        // homotopy-transfer dressings carry the connection with the sign
        // opposite to the transport convention of connection_forms (pinned
        // by the parallel-transport oracle for R and by the restriction to
        // the hatted objects on the diagonal).
        OpSeries<T> Hs(&ctx.alg, L.total, L.total);
        for (int j = 0; j < ctx.r; ++j) {
            auto C = connection_forms(L, H, g, dirs[j].dA, dirs[j].dAprime, dirs[j].dg);
            ctx.Hop.push_back(C.total());
            GrKey kk;
            kk.odd = 1u << ctx.theta_id(j);
            Hs.add(kk, -ctx.Hop.back());
        }
        ctx.Kcheck = K - (eps * (K * Hs * K)) + (eps * eps * (K * Hs * K * Hs * K));
        ctx.icheck_dress = one - (eps * (K * Hs)) + (eps * eps * (K * Hs * K * Hs));
        ctx.leaf = apply(ctx.icheck_dress, a_series);
    } else {
        // Honest family dressings from the derivatives of the contraction:
        //   Kcheck   = K + eps K Kdot_j theta_j
        //              + eps^2 sum_{j<k} theta_j theta_k K (Kdot_j Kdot_k - Kdot_k Kdot_j)
        //   leaf     = i(a) + eps theta_j K Xdot_j(a)
        //              + eps^2 sum_{j<k} theta_j theta_k K (Kdot_j Xdot_k - Kdot_k Xdot_j)(a)
        ctx.Kcheck = K;
        for (int j = 0; j < ctx.r; ++j) {
            GrKey kk;
            kk.eps = 1;
            kk.odd = 1u << ctx.theta_id(j);
            ctx.Kcheck.add(kk, H.K * family->Kdot[j]);
        }
        for (int j = 0; j < ctx.r; ++j)
            for (int k2 = j + 1; k2 < ctx.r; ++k2) {
                GrKey kk;
                kk.eps = 2;
                kk.odd = (1u << ctx.theta_id(j)) | (1u << ctx.theta_id(k2));
                ctx.Kcheck.add(kk, H.K * (family->Kdot[j] * family->Kdot[k2] -
                                          family->Kdot[k2] * family->Kdot[j]));
            }
        ctx.icheck_dress = one;  // leaf holds the dressings directly in this mode
        ctx.leaf = a_series;
        auto coords_of = [&](const std::vector<T>& harm_vec) {
            // a-series coordinates: the frame columns are exactly h1/h2
            return harm_vec;
        };
        (void)coords_of;
        for (int j = 0; j < ctx.r; ++j) {
            // K Xdot_j applied to each frame generator
            for (int a = 0; a < ctx.m; ++a) {
                std::vector<T> xd(L.total);
                for (int i = 0; i < L.total; ++i) xd[i] = family->Xdot[j](i, a);
                auto kxd = H.K.apply(xd);
                GrKey kk;
                kk.eps = 1;
                kk.odd = 1u << ctx.theta_id(j);
                kk.even = 1ull << (8 * a);
                ctx.leaf.add(kk, kxd);
            }
            for (int b = 0; b < ctx.k; ++b) {
                std::vector<T> xd(L.total);
                for (int i = 0; i < L.total; ++i) xd[i] = family->Xdot[j](i, ctx.m + b);
                auto kxd = H.K.apply(xd);
                GrKey kk;
                kk.eps = 1;
                kk.odd = (1u << ctx.theta_id(j)) | (1u << ctx.a2_id(b));
                ctx.leaf.add(kk, kxd);
            }
        }
        for (int j = 0; j < ctx.r; ++j)
            for (int k2 = j + 1; k2 < ctx.r; ++k2) {
                Mat<T> mixed = family->Kdot[j] * family->Xdot[k2] -
                               family->Kdot[k2] * family->Xdot[j];
                for (int c = 0; c < ctx.m + ctx.k; ++c) {
                    std::vector<T> xd(L.total);
                    for (int i = 0; i < L.total; ++i) xd[i] = mixed(i, c);
                    auto kxd = H.K.apply(xd);
                    GrKey kk;
                    kk.eps = 2;
                    kk.odd = (1u << ctx.theta_id(j)) | (1u << ctx.theta_id(k2));
                    if (c < ctx.m)
                        kk.even = 1ull << (8 * c);
                    else
                        kk.odd |= 1u << ctx.a2_id(c - ctx.m);
                    ctx.leaf.add(kk, kxd);
                }
            }
    }
    for (int j = 0; j < ctx.r; ++j) {
        auto kda = H.K.apply(dirs[j].dA);
        GrKey kk;
        kk.eps = 1;
        kk.odd = 1u << ctx.theta_id(j);
        ctx.leaf.add(kk, kda);
    }

    // < [dA], a2 >: theta_j a2^b ordered with theta first
    ctx.pairing_term = SuperSeries<T>(&ctx.alg);
    for (int j = 0; j < ctx.r; ++j)
        for (int b = 0; b < ctx.k; ++b) {
            std::vector<T> chib(L.total);
            for (int i = 0; i < L.total; ++i) chib[i] = ctx.h2_frame(i, b);
            T val = L.pair(dirs[j].dA, chib);
            if (scalar_traits<T>::is_zero(val)) continue;
            GrKey kk;
            kk.odd = (1u << ctx.theta_id(j)) | (1u << ctx.a2_id(b));
            ctx.pairing_term.add_term(kk, val);
        }

    // Full single-edge contribution (1/(2 eps)) < icheck(a), d icheck(a) >.
    // Its theta-theta a2-quadratic block is the displayed Theta-check term
    // p H K H i; the mixed a1-a2 one-form block carries the rest of the
    // induced quadratic action (it vanishes for orthogonal frames but not in
    // general).
    {
        OpSeries<T> D = OpSeries<T>::constant(&ctx.alg, H.d);
        auto dleaf = apply(D, ctx.leaf);
        auto q = pair_series(L, ctx.leaf, dleaf);
        ctx.theta_check = (scalar_traits<T>::one() / T(2)) * q.eps_shift(-1);
    }
    return ctx;
}

// Graph classes that can contribute to W-check at the truncation. A class
// (V, P) enters iff some split P = P1 + P2 + PdA with P1 <= even_max,
// P2 <= k, PdA <= min(P2, r) satisfies (V - P)/2 + P2 <= eps_max.
inline std::vector<std::pair<int, int>> wcheck_graph_classes(int eps_max, int even_max, int k,
                                                             int r) {
    std::vector<std::pair<int, int>> out;
    int pmax = even_max + k + std::min(k, r);
    for (int v = 1; v <= 2 * eps_max + 2 * even_max + 2 * k + 2; ++v)
        for (int p = 0; p <= std::min(pmax, 3 * v); ++p) {
            if ((v + p) % 2) continue;
            bool ok = false;
            for (int p1 = 0; p1 <= std::min(p, even_max) && !ok; ++p1)
                for (int p2 = 0; p2 <= std::min(p - p1, k) && !ok; ++p2) {
                    int pda = p - p1 - p2;
                    if (pda > std::min(p2, r)) continue;
                    if ((v - p) / 2 + p2 <= eps_max) ok = true;
                }
            if (ok) out.push_back({v, p});
        }
    return out;
}

// Full W-check: pairing term + theta-check + graph sum with dressed
// decorations. The eps^{-1} tree sector must cancel at smooth points; it is
// kept in the series and reported through w0_residual.
template <class T>
SuperSeries<T> wcheck(const CyclicDgla<T>& L, const HodgeData<T>& H,
                      const CheckedContext<T>& ctx) {
    (void)H;
    SuperSeries<T> W = ctx.pairing_term + ctx.theta_check;
    auto kernel = kernel_of(L, ctx.Kcheck, ctx.pairing_inv);
    for (auto [v, p] :
         wcheck_graph_classes(ctx.eps_requested, ctx.alg.even_deg_max, ctx.k, ctx.r)) {
        for (const auto& g : enumerate_trivalent_graphs(v, p)) {
            GraphDecorations<T> dec;
            dec.vertex = &ctx.vertex;
            dec.edge_kernels.assign(g.n_edges(), kernel);
            dec.leaves.assign(g.n_leaves(), ctx.leaf);
            auto phi = graph_weight_finite(L, g, dec, &ctx.alg);
            if (phi.empty()) continue;
            T w = scalar_traits<T>::one() / T(g.aut_order);
            W += (w * phi).eps_shift(g.loop_number - 1);
        }
    }
    return W.eps_at_most(ctx.eps_requested);
}

// Max |coefficient| of the eps^{-1} sector (vanishes at smooth points).
template <class T>
double eps_minus_one_residual(const SuperSeries<T>& W) {
    double worst = 0;
    for (const auto& [kk, v] : W.terms())
        if (kk.eps < 0) worst = std::max(worst, std::fabs(scalar_traits<T>::to_double(v)));
    return worst;
}

// Grothendieck connection data: R_j(a1) expanded in the h1 frame, extracted
// from the eps^0, theta_j, a2-linear part of W-check. The sign makes the
// polynomial order-0 part equal to minus the harmonic part of deltaA.
template <class T>
struct GrothendieckR {
    // component[j](b, a1-multi-exponent) -> coefficient of chi_b
    std::vector<std::map<std::uint64_t, std::vector<T>>> comp;
};

template <class T>
GrothendieckR<T> grothendieck_r(const CheckedContext<T>& ctx, const SuperSeries<T>& W) {
    GrothendieckR<T> R;
    R.comp.resize(ctx.r);
    for (const auto& [kk, v] : W.terms()) {
        if (kk.eps != 0) continue;
        int deg_th = 0, jdir = -1, bslot = -1;
        int a2_count = 0;
        for (int j = 0; j < ctx.r; ++j)
            if (kk.odd & (1u << j)) {
                ++deg_th;
                jdir = j;
            }
        for (int b = 0; b < ctx.k; ++b)
            if (kk.odd & (1u << (ctx.r + b))) {
                ++a2_count;
                bslot = b;
            }
        if (deg_th != 1 || a2_count != 1) continue;
        auto& slot = R.comp[jdir][kk.even];
        if (slot.empty()) slot.assign(ctx.m, scalar_traits<T>::zero());
        // dual frames: a2^b coefficient pairs with the chi_b direction
        slot[bslot] += -v;
    }
    return R;
}

}  // namespace csm
