#pragma once

// Berezin integration of the Chern-Simons volume-form integrand
//   Y = tau_half * integral Dzeta Da2 exp(<zeta,a2> + W - W0)
// plus an independent Wick-pairing oracle with its own sign bookkeeping.

#include <algorithm>

#include "csmoduli/effective.hpp"

namespace csm {

// Interleaved measure (z0, a2_0, z1, a2_1, ...) padded with the leftovers,
// normalized so that exp of the dual pairing integrates to +1.
inline std::vector<int> dual_measure_order(int m, int k) {
    std::vector<int> gens;
    int common = std::min(m, k);
    for (int i = 0; i < common; ++i) {
        gens.push_back(i);
        gens.push_back(m + i);
    }
    for (int i = common; i < m; ++i) gens.push_back(i);
    for (int i = common; i < k; ++i) gens.push_back(m + i);
    return gens;
}

// The Gaussian pairing term sum_{ab} B_{ab} zeta^a a2^b; with pairing-dual
// frames B is the identity.
template <class T>
SuperSeries<T> zeta_a2_pairing(const HattedContext<T>& ctx, const Mat<T>& B) {
    SuperSeries<T> s(&ctx.alg);
    for (int a = 0; a < ctx.m; ++a)
        for (int b = 0; b < ctx.k; ++b) {
            if (scalar_traits<T>::is_zero(B(a, b))) continue;
            GrKey k;
            k.odd = (1u << a) | (1u << (ctx.m + b));
            s.add_term(k, B(a, b));  // zeta^a a2^b ascending: no sorting sign
        }
    return s;
}

// Scalar eps-series coefficients indexed by power (0..eps_max).
template <class T>
std::vector<T> volume_form_y(const CyclicDgla<T>&, const HattedContext<T>& ctx,
                             const SuperSeries<T>& W, const T& tau_half) {
    // frame pairing <chi_a, chi^b> = delta by construction of the context
    Mat<T> B = Mat<T>::identity(std::max(ctx.m, ctx.k));
    if (ctx.m != ctx.k) throw std::invalid_argument("volume_form_y: dim H^1 != dim H^2");
    SuperSeries<T> expo = zeta_a2_pairing(ctx, B);
    // W0 (the eps-constant term) vanishes in the finite surrogate; drop it if
    // numerical noise produced one.
    SuperSeries<T> w = W;
    expo += w;
    GrKey unit{};
    if (expo.terms().count(unit)) expo -= SuperSeries<T>::scalar(&ctx.alg, expo.coeff(unit));
    auto integ = expo.exp_series().berezin(dual_measure_order(ctx.m, ctx.k));
    std::vector<T> out(ctx.alg.eps_max + 1, scalar_traits<T>::zero());
    for (const auto& [k, v] : integ.terms()) {
        if (k.odd != 0 || k.even != 0)
            throw std::runtime_error("volume_form_y: integral left odd generators");
        if (k.eps < 0) throw std::runtime_error("volume_form_y: negative eps power");
        out[k.eps] = tau_half * v;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Independent Wick oracle. Monomials are explicit ascending generator lists;
// products sort symbol lists and count swaps; the Gaussian integral is an
// explicit sum over pairings of the complement generators. Shares nothing
// with SuperSeries multiplication or Berezin extraction.

namespace wick {

struct Mono {
    int eps = 0;
    std::vector<int> gens;  // strictly ascending odd generator ids
};

// concatenate-and-sort sign; returns 0 on repeated generator
inline int sorted_sign(std::vector<int>& gens) {
    int swaps = 0;
    for (size_t i = 1; i < gens.size(); ++i)
        for (size_t j = i; j > 0 && gens[j - 1] >= gens[j]; --j) {
            if (gens[j - 1] == gens[j]) return 0;
            std::swap(gens[j - 1], gens[j]);
            ++swaps;
        }
    return swaps % 2 ? -1 : 1;
}

template <class T>
struct Poly {
    std::vector<std::pair<Mono, T>> terms;

    void add(const Mono& m, const T& v) {
        for (auto& [mm, vv] : terms)
            if (mm.eps == m.eps && mm.gens == m.gens) {
                vv += v;
                return;
            }
        terms.push_back({m, v});
    }
};

template <class T>
Poly<T> poly_mul(const Poly<T>& x, const Poly<T>& y, int eps_max) {
    Poly<T> r;
    for (const auto& [mx, vx] : x.terms)
        for (const auto& [my, vy] : y.terms) {
            if (mx.eps + my.eps > eps_max) continue;
            Mono m;
            m.eps = mx.eps + my.eps;
            m.gens = mx.gens;
            m.gens.insert(m.gens.end(), my.gens.begin(), my.gens.end());
            int s = sorted_sign(m.gens);
            if (s == 0) continue;
            r.add(m, s > 0 ? vx * vy : -(vx * vy));
        }
    return r;
}

}  // namespace wick

// Evaluates tau_half * integral exp(<zeta, B a2> + W) by expanding exp(W)
// with explicit symbol lists and Wick-pairing the complement generators.
// Practical for small generator sets only.
template <class T>
std::vector<T> wick_oracle(const CyclicDgla<T>&, const HattedContext<T>& ctx,
                           const SuperSeries<T>& W, const T& tau_half) {
    if (ctx.m > 6 || ctx.k > 6) throw std::invalid_argument("wick_oracle: generator count exceeded");
    if (ctx.m != ctx.k) throw std::invalid_argument("wick_oracle: dim H^1 != dim H^2");
    int m = ctx.m;
    int eps_max = ctx.alg.eps_max;

    // transcribe W (dropping any scalar part, mirroring W - W0)
    wick::Poly<T> w;
    for (const auto& [k, v] : W.terms()) {
        if (k.odd == 0 && k.eps == 0) continue;
        if (k.even != 0) throw std::invalid_argument("wick_oracle: even variables unsupported");
        wick::Mono mo;
        mo.eps = k.eps;
        for (int i = 0; i < ctx.m + ctx.k; ++i)
            if (k.odd & (1u << i)) mo.gens.push_back(i);
        w.add(mo, v);
    }
    // exp by explicit powers
    wick::Poly<T> expw;
    expw.add(wick::Mono{}, scalar_traits<T>::one());
    wick::Poly<T> power = expw;
    T fact = scalar_traits<T>::one();
    for (int n = 1; n <= 2 * (m + ctx.k) + eps_max + 2; ++n) {
        power = wick::poly_mul(power, w, eps_max);
        if (power.terms.empty()) break;
        fact *= T(n);
        for (const auto& [mo, v] : power.terms) expw.add(mo, v / fact);
    }

    // Gaussian value of each residual monomial: the complement of the zetas
    // must match the complement of the a2's through the identity pairing; the
    // sign comes from explicitly building the full ascending word
    // zeta^{S} a2^{T} * prod_{c in complement} (zeta^c a2^c) and sorting it.
    auto gaussian = [&](const wick::Mono& mo) -> T {
        std::vector<int> zs, as;
        for (int gid : mo.gens)
            (gid < m ? zs : as).push_back(gid < m ? gid : gid - m);
        std::vector<int> zc, ac;
        for (int i = 0; i < m; ++i) {
            if (std::find(zs.begin(), zs.end(), i) == zs.end()) zc.push_back(i);
            if (std::find(as.begin(), as.end(), i) == as.end()) ac.push_back(i);
        }
        if (zc != ac) return scalar_traits<T>::zero();
        // word: the monomial's own generators, then (zeta^c, a2^c) pairs
        std::vector<int> word = mo.gens;
        for (int c : zc) {
            word.push_back(c);
            word.push_back(m + c);
        }
        int s = wick::sorted_sign(word);
        if (s == 0) return scalar_traits<T>::zero();
        if (static_cast<int>(word.size()) != 2 * m) return scalar_traits<T>::zero();
        // value of the fully sorted top monomial under the interleaved
        // measure: integral of z0 a0 z1 a1 ... = +1 means the ascending word
        // z0 z1 .. a0 a1 .. integrates to the interleaving parity
        int inter = (m * (m - 1) / 2) % 2 ? -1 : 1;
        return T(s * inter);
    };

    std::vector<T> out(eps_max + 1, scalar_traits<T>::zero());
    for (const auto& [mo, v] : expw.terms) {
        T gv = gaussian(mo);
        if (scalar_traits<T>::is_zero(gv)) continue;
        if (mo.eps >= 0 && mo.eps <= eps_max) out[mo.eps] += tau_half * (v * gv);
    }
    return out;
}

}  // namespace csm
