#pragma once

// Twisted (and desynchronized) Hodge package: chain contraction (i, p, K),
// projector P, Green operator G for a flat pair (A, A') and a metric.
// hodge_data(A) is the diagonal case desync_hodge(A, A).

#include <optional>
#include <stdexcept>

#include "csmoduli/dgla.hpp"

namespace csm {

struct DecompositionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T>
struct HodgeData {
    Mat<T> d;        // twisted differential d_A
    Mat<T> dstar;    // g-adjoint of d_{A'}
    Mat<T> K, P, G;  // contraction, projector to harmonics, Green operator
    Mat<T> incl;     // total x h: harmonic representatives of the H basis
    Mat<T> proj;     // h x total: projection to cohomology coordinates
    std::array<int, 4> hdims{0, 0, 0, 0};
    std::vector<int> hdegree;  // degree of each cohomology basis vector
    int h_total = 0;

    int h_offset(int k) const {
        int o = 0;
        for (int j = 0; j < k; ++j) o += hdims[j];
        return o;
    }
};

namespace detail {

// Columns of m restricted to basis indices of one degree block, as vectors in
// the full space; returns an independent spanning set of the column space.
template <class T>
std::vector<std::vector<T>> column_space(const CyclicDgla<T>& L, const Mat<T>& m, int deg_from,
                                         double tol) {
    std::vector<std::vector<T>> cols;
    std::vector<std::vector<T>> rows;  // echelon rows normalized at their pivot
    std::vector<int> pivcol;
    int n = L.total;
    for (int j = L.offset[deg_from]; j < L.offset[deg_from] + L.dims[deg_from]; ++j) {
        std::vector<T> v(n, scalar_traits<T>::zero());
        double vmax = 0;
        for (int i = 0; i < n; ++i) {
            v[i] = m(i, j);
            vmax = std::max(vmax, std::fabs(scalar_traits<T>::to_double(v[i])));
        }
        if (vmax == 0) continue;
        std::vector<T> w = v;
        for (size_t r = 0; r < rows.size(); ++r) {
            T f = w[pivcol[r]];
            if (scalar_traits<T>::is_zero(f)) continue;
            for (int i = 0; i < n; ++i) w[i] -= f * rows[r][i];
        }
        int piv = -1;
        double wmax = 0;
        for (int i = 0; i < n; ++i) {
            double x = std::fabs(scalar_traits<T>::to_double(w[i]));
            if (x > wmax) {
                wmax = x;
                piv = i;
            }
        }
        bool zero = scalar_traits<T>::exact ? wmax == 0 : wmax <= tol * vmax;
        if (!zero) {
            T d = w[piv];
            for (int i = 0; i < n; ++i) w[i] /= d;
            rows.push_back(w);
            pivcol.push_back(piv);
            cols.push_back(v);
        }
    }
    return cols;
}

}  // namespace detail

// Desynchronized Hodge decomposition for the pair (A, A'): harmonics are
// ker d_A  \cap  ker d*_{A'}, complements im d_A and im d*_{A'}. Throws
// DecompositionFailure when the sum is not direct (A' too far from A).
template <class T>
HodgeData<T> desync_hodge(const CyclicDgla<T>& L, const std::vector<T>& A,
                          const std::vector<T>& Aprime, const Metric<T>& g,
                          double tol = 1e-9) {
    HodgeData<T> H;
    int n = L.total;
    H.d = L.twisted_d(A);
    Mat<T> dprime = L.twisted_d(Aprime);
    H.dstar = g.adjoint(dprime);

    // harmonics: kernel of stacked [d; dstar]
    Mat<T> stacked(2 * n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            stacked(i, j) = H.d(i, j);
            stacked(n + i, j) = H.dstar(i, j);
        }
    Mat<T> harm = kernel_basis(stacked, tol);

    // group harmonic basis by degree; kernel vectors of the block operator
    // stay inside one degree because d and dstar are pure degree +-1
    std::vector<std::vector<T>> hcols;
    H.hdims = {0, 0, 0, 0};
    for (int deg = 0; deg < 4; ++deg) {
        for (size_t c = 0; c < harm.cols(); ++c) {
            std::vector<T> v(n, scalar_traits<T>::zero());
            bool in_deg = false, out_deg = false;
            for (int i = 0; i < n; ++i) {
                v[i] = harm(i, c);
                if (!scalar_traits<T>::is_zero(v[i])) {
                    if (L.degree[i] == deg)
                        in_deg = true;
                    else
                        out_deg = true;
                }
            }
            if (in_deg && out_deg)
                throw DecompositionFailure("harmonic kernel vector mixes degrees");
            if (in_deg) {
                hcols.push_back(v);
                H.hdims[deg]++;
                H.hdegree.push_back(deg);
            }
        }
    }
    H.h_total = static_cast<int>(hcols.size());

    // complement bases: im d_A (from one degree down) and im d*_{A'}
    // (from one degree up), assembled degreewise with the harmonics
    std::vector<std::vector<T>> all_cols = hcols;
    for (int deg = 0; deg < 4; ++deg) {
        if (deg > 0)
            for (auto& v : detail::column_space(L, H.d, deg - 1, tol)) all_cols.push_back(v);
        if (deg < 3)
            for (auto& v : detail::column_space(L, H.dstar, deg + 1, tol)) all_cols.push_back(v);
    }
    if (static_cast<int>(all_cols.size()) != n)
        throw DecompositionFailure("decomposition failure: harmonics + images do not fill");
    Mat<T> M(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) M(i, j) = all_cols[j][i];
    Mat<T> Minv;
    try {
        Minv = inverse(M);
    } catch (const std::exception&) {
        throw DecompositionFailure("decomposition failure: sum not direct");
    }

    H.incl = Mat<T>(n, H.h_total);
    for (int j = 0; j < H.h_total; ++j)
        for (int i = 0; i < n; ++i) H.incl(i, j) = hcols[j][i];
    H.proj = Mat<T>(H.h_total, n);
    for (int i = 0; i < H.h_total; ++i)
        for (int j = 0; j < n; ++j) H.proj(i, j) = Minv(i, j);
    H.P = H.incl * H.proj;

    Mat<T> laplace = H.d * H.dstar + H.dstar * H.d;
    try {
        H.G = inverse(laplace + H.P);
    } catch (const std::exception&) {
        throw DecompositionFailure("decomposition failure: Green operator singular");
    }
    H.K = H.dstar * H.G;
    return H;
}

template <class T>
HodgeData<T> hodge_data(const CyclicDgla<T>& L, const std::vector<T>& A, const Metric<T>& g,
                        double tol = 1e-9) {
    return desync_hodge(L, A, A, g, tol);
}

// Max residual over the five contraction identities plus p i = 1.
template <class T>
double contraction_residual(const HodgeData<T>& H) {
    int n = static_cast<int>(H.d.rows());
    Mat<T> one = Mat<T>::identity(n);
    Mat<T> hone = Mat<T>::identity(H.h_total);
    double r = 0;
    r = std::max(r, (H.d * H.K + H.K * H.d - (one - H.P)).max_abs());
    r = std::max(r, (H.K * H.K).max_abs());
    r = std::max(r, (H.proj * H.K).max_abs());
    r = std::max(r, (H.K * H.incl).max_abs());
    r = std::max(r, (H.proj * H.incl - hone).max_abs());
    r = std::max(r, (H.P * H.P - H.P).max_abs());
    return r;
}

// Metric adjoint of ad_x.
template <class T>
Mat<T> adjoint_ad(const CyclicDgla<T>& L, const Metric<T>& g, const std::vector<T>& x) {
    return g.adjoint(L.ad(x));
}

template <class T>
struct ConnectionForms {
    Mat<T> H_dA, H_dAprime, H_dg;  // operator-valued 1-forms on the given directions
    Mat<T> lambda;                 // g^{-1} delta_g

    Mat<T> total() const { return H_dA + H_dAprime + H_dg; }
};

// The natural Hodge connection 1-form evaluated on a tangent direction
// (deltaA, deltaAprime, deltag) at a desynchronized point.
template <class T>
ConnectionForms<T> connection_forms(const CyclicDgla<T>& L, const HodgeData<T>& H,
                                    const Metric<T>& g, const std::vector<T>& deltaA,
                                    const std::vector<T>& deltaAprime, const Mat<T>& deltag) {
    ConnectionForms<T> C;
    int n = L.total;
    Mat<T> adA = L.ad(deltaA);
    Mat<T> adApStar = g.adjoint(L.ad(deltaAprime));
    C.lambda = inverse(g.g) * deltag;

    const Mat<T>&d = H.d, &K = H.K, &P = H.P, &G = H.G;
    C.H_dA = -(K * adA * (d * K) + K * adA * P + P * adA * K);
    C.H_dAprime = -((d * G) * adApStar * (K * d) + (d * G) * adApStar * P + P * adApStar * (G * d));
    C.H_dg = (d * K) * C.lambda * (K * d) + (d * K) * C.lambda * P + P * C.lambda * (K * d);
    (void)n;
    return C;
}

}  // namespace csm
