#pragma once

// Finite-dimensional cyclic dg Lie algebra surrogates: graded components in
// degrees 0..3, differential, bracket, and a nondegenerate degree -3 pairing.
//
// Grading conventions (used everywhere downstream):
//   [x,y] = -(-1)^{|x||y|} [y,x]
//   d[x,y] = [dx,y] + (-1)^{|x|} [x,dy]
//   [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
//   <x,y> = (-1)^{|x||y|} <y,x>,  <dx,y> + (-1)^{|x|} <x,dy> = 0
//   <[x,y],z> = <x,[y,z]>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "csmoduli/linalg.hpp"

namespace csm {

template <class T>
struct CyclicDgla {
    std::array<int, 4> dims{0, 0, 0, 0};
    int total = 0;
    std::array<int, 4> offset{0, 0, 0, 0};
    std::vector<int> degree;  // degree of each global basis index

    Mat<T> d;           // total x total, degree +1 blocks
    std::vector<T> bracket;  // b(k,i,j): [e_i,e_j] = sum_k b(k,i,j) e_k
    Mat<T> pairing;     // <e_i,e_j>, nonzero only when degrees sum to 3

    void init_dims(const std::array<int, 4>& ds) {
        dims = ds;
        total = ds[0] + ds[1] + ds[2] + ds[3];
        offset = {0, ds[0], ds[0] + ds[1], ds[0] + ds[1] + ds[2]};
        degree.assign(total, 0);
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < ds[k]; ++i) degree[offset[k] + i] = k;
        d = Mat<T>(total, total);
        bracket.assign(static_cast<size_t>(total) * total * total, scalar_traits<T>::zero());
        pairing = Mat<T>(total, total);
    }

    const T& b_at(int k, int i, int j) const {
        return bracket[(static_cast<size_t>(k) * total + i) * total + j];
    }
    T& b_at(int k, int i, int j) {
        return bracket[(static_cast<size_t>(k) * total + i) * total + j];
    }

    std::vector<T> bracket_of(const std::vector<T>& x, const std::vector<T>& y) const {
        std::vector<T> r(total, scalar_traits<T>::zero());
        for (int i = 0; i < total; ++i) {
            if (scalar_traits<T>::is_zero(x[i])) continue;
            for (int j = 0; j < total; ++j) {
                if (scalar_traits<T>::is_zero(y[j])) continue;
                T xy = x[i] * y[j];
                for (int k = 0; k < total; ++k) {
                    const T& b = b_at(k, i, j);
                    if (!scalar_traits<T>::is_zero(b)) r[k] += b * xy;
                }
            }
        }
        return r;
    }

    // Matrix of ad_x = [x, -].
    Mat<T> ad(const std::vector<T>& x) const {
        Mat<T> m(total, total);
        for (int i = 0; i < total; ++i) {
            if (scalar_traits<T>::is_zero(x[i])) continue;
            for (int j = 0; j < total; ++j)
                for (int k = 0; k < total; ++k) {
                    const T& b = b_at(k, i, j);
                    if (!scalar_traits<T>::is_zero(b)) m(k, j) += x[i] * b;
                }
        }
        return m;
    }

    T pair(const std::vector<T>& x, const std::vector<T>& y) const {
        T s = scalar_traits<T>::zero();
        for (int i = 0; i < total; ++i) {
            if (scalar_traits<T>::is_zero(x[i])) continue;
            for (int j = 0; j < total; ++j) s += x[i] * pairing(i, j) * y[j];
        }
        return s;
    }

    Mat<T> twisted_d(const std::vector<T>& a) const { return d + ad(a); }
};

// Block positive-definite inner product per degree, stored as one matrix.
template <class T>
struct Metric {
    Mat<T> g;

    static Metric identity(const CyclicDgla<T>& L) {
        Metric m;
        m.g = Mat<T>::identity(L.total);
        return m;
    }

    bool validate(const CyclicDgla<T>& L) const {
        if (static_cast<int>(g.rows()) != L.total || static_cast<int>(g.cols()) != L.total)
            return false;
        for (int i = 0; i < L.total; ++i)
            for (int j = 0; j < L.total; ++j) {
                if (!scalar_traits<T>::is_zero(g(i, j)) && L.degree[i] != L.degree[j])
                    return false;
                double asym = std::fabs(scalar_traits<T>::to_double(g(i, j) - g(j, i)));
                if (asym > 0) return false;
            }
        return positive_definite(g);
    }

    // Adjoint of an operator w.r.t. this inner product: g^{-1} m^T g.
    Mat<T> adjoint(const Mat<T>& m) const { return inverse(g) * m.transpose() * g; }
};

struct ValidationReport {
    double d_squared = 0;
    double antisymmetry = 0;
    double leibniz = 0;
    double jacobi = 0;
    double pairing_symmetry = 0;
    double pairing_d_invariance = 0;
    double pairing_ad_invariance = 0;
    double pairing_degree = 0;
    bool pairing_nondegenerate = false;

    double worst() const {
        double w = d_squared;
        for (double v : {antisymmetry, leibniz, jacobi, pairing_symmetry, pairing_d_invariance,
                         pairing_ad_invariance, pairing_degree})
            if (v > w) w = v;
        return w;
    }
    bool pass(double tol = 1e-12) const { return pairing_nondegenerate && worst() <= tol; }

    std::string to_string() const {
        auto line = [](const char* k, double v) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s: %.3e\n", k, v);
            return std::string(buf);
        };
        std::string s;
        s += line("d_squared", d_squared);
        s += line("antisymmetry", antisymmetry);
        s += line("leibniz", leibniz);
        s += line("jacobi", jacobi);
        s += line("pairing_symmetry", pairing_symmetry);
        s += line("pairing_d_invariance", pairing_d_invariance);
        s += line("pairing_ad_invariance", pairing_ad_invariance);
        s += line("pairing_degree", pairing_degree);
        s += std::string("pairing_nondegenerate: ") + (pairing_nondegenerate ? "yes" : "no") + "\n";
        return s;
    }
};

template <class T>
ValidationReport validate_dgla(const CyclicDgla<T>& L) {
    ValidationReport rep;
    int n = L.total;
    auto upd = [](double& slot, const T& v) {
        double x = std::fabs(scalar_traits<T>::to_double(v));
        if (x > slot) slot = x;
    };

    // degree structure of d is implied by block layout; check d^2 = 0
    Mat<T> d2 = L.d * L.d;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) upd(rep.d_squared, d2(i, j));

    auto basis = [&](int i) {
        std::vector<T> e(n, scalar_traits<T>::zero());
        e[i] = scalar_traits<T>::one();
        return e;
    };
    auto sgn = [](int p) { return p % 2 ? -1 : 1; };

    for (int i = 0; i < n; ++i) {
        auto ei = basis(i);
        for (int j = 0; j < n; ++j) {
            auto ej = basis(j);
            auto bij = L.bracket_of(ei, ej);
            auto bji = L.bracket_of(ej, ei);
            int s = sgn(L.degree[i] * L.degree[j]);
            for (int k = 0; k < n; ++k) {
                T r = bij[k] + (s > 0 ? bji[k] : -bji[k]);
                upd(rep.antisymmetry, r);
                // bracket must have degree 0
                if (!scalar_traits<T>::is_zero(bij[k]) &&
                    L.degree[k] != L.degree[i] + L.degree[j])
                    rep.antisymmetry = 1e300;
            }
            // Leibniz
            auto lhs = L.d.apply(bij);
            auto r1 = L.bracket_of(L.d.apply(ei), ej);
            auto r2 = L.bracket_of(ei, L.d.apply(ej));
            int s2 = sgn(L.degree[i]);
            for (int k = 0; k < n; ++k)
                upd(rep.leibniz, lhs[k] - r1[k] - (s2 > 0 ? r2[k] : -r2[k]));
            // pairing symmetry / degree structure
            T psym = L.pairing(i, j) - (s > 0 ? L.pairing(j, i) : -L.pairing(j, i));
            upd(rep.pairing_symmetry, psym);
            if (!scalar_traits<T>::is_zero(L.pairing(i, j)) &&
                L.degree[i] + L.degree[j] != 3)
                upd(rep.pairing_degree, L.pairing(i, j));
            // d-invariance
            T dinv = L.pair(L.d.apply(ei), ej);
            T dinv2 = L.pair(ei, L.d.apply(ej));
            upd(rep.pairing_d_invariance, dinv + (s2 > 0 ? dinv2 : -dinv2));
            for (int k = 0; k < n; ++k) {
                auto ek = basis(k);
                // Jacobi
                auto j1 = L.bracket_of(ei, L.bracket_of(ej, ek));
                auto j2 = L.bracket_of(L.bracket_of(ei, ej), ek);
                auto j3 = L.bracket_of(ej, L.bracket_of(ei, ek));
                int s3 = sgn(L.degree[i] * L.degree[j]);
                for (int m = 0; m < n; ++m)
                    upd(rep.jacobi, j1[m] - j2[m] - (s3 > 0 ? j3[m] : -j3[m]));
                // cyclic invariance
                upd(rep.pairing_ad_invariance,
                    L.pair(L.bracket_of(ei, ej), ek) - L.pair(ei, L.bracket_of(ej, ek)));
            }
        }
    }
    // nondegeneracy
    try {
        (void)inverse(L.pairing);
        rep.pairing_nondegenerate = true;
    } catch (const std::exception&) {
        rep.pairing_nondegenerate = false;
    }
    return rep;
}

template <class T>
std::vector<T> mc_defect(const CyclicDgla<T>& L, const std::vector<T>& a) {
    auto r = L.d.apply(a);
    auto br = L.bracket_of(a, a);
    for (int k = 0; k < L.total; ++k) r[k] += br[k] / T(2);
    return r;
}

template <class T>
double mc_residual(const CyclicDgla<T>& L, const std::vector<T>& a) {
    auto r = mc_defect(L, a);
    double s = 0;
    for (const auto& v : r) {
        double x = scalar_traits<T>::to_double(v);
        s += x * x;
    }
    return std::sqrt(s);
}

// Element supported in a single degree?
template <class T>
bool homogeneous_of_degree(const CyclicDgla<T>& L, const std::vector<T>& x, int deg) {
    for (int i = 0; i < L.total; ++i)
        if (!scalar_traits<T>::is_zero(x[i]) && L.degree[i] != deg) return false;
    return true;
}

}  // namespace csm
