#pragma once

// Built-in cyclic dgla fixtures:
//  - f_zero, f_sym, two_term: small abstract complexes in degrees 1,2;
//  - tensor_frobenius: g (x) Lambda(t1,t2,t3) with optional d(t1) = t2 t3;
//  - mexhat: cubic-potential fixture whose Maurer-Cartan set contains a
//    round circle of smooth irreducible points (the designed chart family);
//  - random degree-(1,2) fixtures from a potential, valid by construction.

#include <cmath>
#include <random>

#include "csmoduli/dgla.hpp"
#include "csmoduli/lie.hpp"

namespace csm {

template <class T>
CyclicDgla<T> f_zero() {
    CyclicDgla<T> L;
    L.init_dims({0, 3, 3, 0});
    for (int i = 0; i < 3; ++i) {
        L.pairing(i, 3 + i) = scalar_traits<T>::one();
        L.pairing(3 + i, i) = scalar_traits<T>::one();
    }
    return L;
}

// [x_i, x_j] = sum_k |eps_{ijk}| y_k: symmetric on the odd-degree pair as the
// grading requires, zero on equal inputs, l2' = it on cohomology.
template <class T>
CyclicDgla<T> f_sym() {
    CyclicDgla<T> L = f_zero<T>();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                if (detail::epsilon3(i, j, k) != 0) L.b_at(3 + k, i, j) = scalar_traits<T>::one();
    return L;
}

template <class T>
CyclicDgla<T> two_term() {
    CyclicDgla<T> L;
    L.init_dims({0, 1, 1, 0});
    L.d(1, 0) = T(2);
    L.pairing(0, 1) = scalar_traits<T>::one();
    L.pairing(1, 0) = scalar_traits<T>::one();
    return L;
}

// g (x) Lambda(t1,t2,t3). with_d turns on d(t1) = t2 t3 (a Frobenius dg
// algebra; the trace picks the t1 t2 t3 coefficient).
template <class T>
CyclicDgla<T> tensor_frobenius(const LieAlgebraData<T>& lie, bool with_d) {
    // model basis: index by subset mask m of {0,1,2}; degree = popcount
    int gdim = lie.dim;
    std::array<int, 4> dims{};
    std::vector<int> mask_of;  // model index -> subset mask, grouped by degree
    std::vector<int> model_index(8, -1);
    for (int deg = 0; deg < 4; ++deg)
        for (int m = 0; m < 8; ++m)
            if (__builtin_popcount(m) == deg) {
                model_index[m] = static_cast<int>(mask_of.size());
                mask_of.push_back(m);
                dims[deg] += gdim;
            }
    CyclicDgla<T> L;
    L.init_dims(dims);
    int n_model = 8;
    // global index of (lie a, model m)
    auto gi = [&](int a, int m) {
        int deg = __builtin_popcount(m);
        // position within the degree block: models of this degree in mask
        // order, gdim lie indices each
        int pos = 0;
        for (int mm = 0; mm < m; ++mm)
            if (__builtin_popcount(mm) == deg) ++pos;
        return L.offset[deg] + pos * gdim + a;
    };
    // wedge sign of m1 * m2 (0 if overlapping)
    auto wedge = [&](int m1, int m2, int& sign) -> int {
        if (m1 & m2) return -1;
        int s = 0;
        for (int b = 0; b < 3; ++b)
            if (m2 & (1 << b)) s += __builtin_popcount(m1 >> (b + 1));
        sign = (s % 2) ? -1 : 1;
        return m1 | m2;
    };
    Mat<T> kinv = inverse(lie.killing);
    // bracket: [a (x) m1, b (x) m2] = [a,b] (x) m1 m2 -- lie bracket via
    // raised structure constants f^c_{ab} = f_{abd} kappa^{dc}
    for (int a = 0; a < gdim; ++a)
        for (int b = 0; b < gdim; ++b) {
            std::vector<T> fab(gdim, scalar_traits<T>::zero());
            bool nz = false;
            for (int c = 0; c < gdim; ++c) {
                T s = scalar_traits<T>::zero();
                for (int dd = 0; dd < gdim; ++dd) s += lie.f_at(a, b, dd) * kinv(dd, c);
                fab[c] = s;
                if (!scalar_traits<T>::is_zero(s)) nz = true;
            }
            if (!nz) continue;
            for (int m1 = 0; m1 < n_model; ++m1)
                for (int m2 = 0; m2 < n_model; ++m2) {
                    int sign = 1;
                    int mw = wedge(m1, m2, sign);
                    if (mw < 0) continue;
                    for (int c = 0; c < gdim; ++c)
                        if (!scalar_traits<T>::is_zero(fab[c]))
                            L.b_at(gi(c, mw), gi(a, m1), gi(b, m2)) +=
                                sign > 0 ? fab[c] : -fab[c];
                }
        }
    // pairing: kappa(a,b) * trace(m1 m2)
    for (int a = 0; a < gdim; ++a)
        for (int b = 0; b < gdim; ++b) {
            if (scalar_traits<T>::is_zero(lie.killing(a, b))) continue;
            for (int m1 = 0; m1 < n_model; ++m1)
                for (int m2 = 0; m2 < n_model; ++m2) {
                    int sign = 1;
                    int mw = wedge(m1, m2, sign);
                    if (mw != 7) continue;
                    L.pairing(gi(a, m1), gi(b, m2)) +=
                        sign > 0 ? lie.killing(a, b) : -lie.killing(a, b);
                }
        }
    // d(t1) = t2 t3, extended as a graded derivation: d(m) for each subset
    if (with_d) {
        // d on generators: t(bit0) -> {bit1,bit2}; t(bit1), t(bit2) -> 0
        for (int m = 0; m < n_model; ++m) {
            if (!(m & 1)) continue;
            // remove t1 (position 0, so no sign to reach the front), insert t2 t3
            int rest = m & ~1;
            if (rest & 0b110) continue;  // t2 or t3 already present -> wedge is 0
            int sign = 1;
            int target = wedge(0b110, rest, sign);
            if (target < 0) continue;
            for (int a = 0; a < gdim; ++a)
                L.d(gi(a, target), gi(a, m)) = sign > 0 ? scalar_traits<T>::one() : T(-1);
        }
    }
    return L;
}

// Rotationally invariant cubic potential fixture on degrees (1,2), dim 3+3:
//   S(u,v,w) = q1 (u^2+v^2) + q2 w^2 + c1 (u^2+v^2) w + c2 w^3.
// Critical set of S contains the circle u^2+v^2 = r^2, w = w* with
// w* = -q1/c1 and r^2 = -(2 q2 w* + 3 c2 w*^2)/c1; along it the Hessian has
// corank exactly 1, so every circle point is smooth and irreducible.
struct MexhatParams {
    Rational q1 = Rational(-1);
    Rational q2 = Rational(1, 2);
    Rational c1 = Rational(1);
    Rational c2 = Rational(-1);

    double w_star() const { return -(q1 / c1).to_double(); }
    double r2() const {
        Rational ws = -(q1 / c1);
        return (-(Rational(2) * q2 * ws + Rational(3) * c2 * ws * ws) / c1).to_double();
    }
};

template <class T>
CyclicDgla<T> mexhat(const MexhatParams& p = MexhatParams{}) {
    CyclicDgla<T> L;
    L.init_dims({0, 3, 3, 0});
    auto cv = [](const Rational& r) {
        if constexpr (scalar_traits<T>::exact)
            return r;
        else
            return r.to_double();
    };
    // pairing: dual frames
    for (int i = 0; i < 3; ++i) {
        L.pairing(i, 3 + i) = scalar_traits<T>::one();
        L.pairing(3 + i, i) = scalar_traits<T>::one();
    }
    // d = Hessian of the quadratic part: diag(2q1, 2q1, 2q2)
    L.d(3, 0) = cv(Rational(2) * p.q1);
    L.d(4, 1) = cv(Rational(2) * p.q1);
    L.d(5, 2) = cv(Rational(2) * p.q2);
    // symmetric cubic tensor from the potential: T_uuw = T_vvw = 2 c1,
    // T_www = 6 c2, fully symmetric placements
    auto setT = [&](int i, int j, int k, const Rational& val) {
        int idx[3] = {i, j, k};
        std::sort(idx, idx + 3);
        int perms[6][3] = {{idx[0], idx[1], idx[2]}, {idx[0], idx[2], idx[1]},
                           {idx[1], idx[0], idx[2]}, {idx[1], idx[2], idx[0]},
                           {idx[2], idx[0], idx[1]}, {idx[2], idx[1], idx[0]}};
        for (auto& q : perms) L.b_at(3 + q[2], q[0], q[1]) = cv(val);
    };
    setT(0, 0, 2, Rational(2) * p.c1);
    setT(1, 1, 2, Rational(2) * p.c1);
    setT(2, 2, 2, Rational(6) * p.c2);
    return L;
}

// Point on the mexhat circle at angle theta (degree-1 coefficients).
inline std::vector<double> mexhat_circle_point(const MexhatParams& p, double theta) {
    double r = std::sqrt(p.r2());
    return {r * std::cos(theta), r * std::sin(theta), p.w_star(), 0, 0, 0};
}

// Coupled two-plane potential fixture: coordinates (u1,v1,u2,v2,w1,w2) with
//   S = q (rho1^2 + rho2^2) + c (rho1^2 w1 + rho2^2 w2)
//       + alpha (w1^3 + w2^3) + beta (w1^2 w2 + w1 w2^2).
// The critical set contains the torus rho_i^2 = r^2, w_i = w* with
// w* = -q/c and r^2 = -(3 alpha + 3 beta) w*^2 / c (for the defaults below
// r^2 = 3/2); the beta coupling makes the two rotation planes interact
// through the bracket, so the two-direction dressings do not factorize.
template <class T>
CyclicDgla<T> mexhat_torus() {
    CyclicDgla<T> L;
    L.init_dims({0, 6, 6, 0});
    const Rational q(-1), c(1), alpha(-1), beta(1, 2);
    auto cv = [](const Rational& r) {
        if constexpr (scalar_traits<T>::exact)
            return r;
        else
            return r.to_double();
    };
    for (int i = 0; i < 6; ++i) {
        L.pairing(i, 6 + i) = scalar_traits<T>::one();
        L.pairing(6 + i, i) = scalar_traits<T>::one();
    }
    // coordinates: 0=u1 1=v1 2=u2 3=v2 4=w1 5=w2
    L.d(6, 0) = cv(Rational(2) * q);
    L.d(7, 1) = cv(Rational(2) * q);
    L.d(8, 2) = cv(Rational(2) * q);
    L.d(9, 3) = cv(Rational(2) * q);
    // d on w1, w2 vanishes (no quadratic w terms)
    auto setT = [&](int i, int j, int k, const Rational& val) {
        int idx[3] = {i, j, k};
        std::sort(idx, idx + 3);
        int perms[6][3] = {{idx[0], idx[1], idx[2]}, {idx[0], idx[2], idx[1]},
                           {idx[1], idx[0], idx[2]}, {idx[1], idx[2], idx[0]},
                           {idx[2], idx[0], idx[1]}, {idx[2], idx[1], idx[0]}};
        for (auto& p : perms) L.b_at(6 + p[2], p[0], p[1]) = cv(val);
    };
    setT(0, 0, 4, Rational(2) * c);
    setT(1, 1, 4, Rational(2) * c);
    setT(2, 2, 5, Rational(2) * c);
    setT(3, 3, 5, Rational(2) * c);
    setT(4, 4, 4, Rational(6) * alpha);
    setT(5, 5, 5, Rational(6) * alpha);
    setT(4, 4, 5, Rational(2) * beta);
    setT(4, 5, 5, Rational(2) * beta);
    return L;
}

inline std::vector<double> mexhat_torus_point(double th1, double th2) {
    double r = std::sqrt(1.5);
    std::vector<double> A(12, 0.0);
    A[0] = r * std::cos(th1);
    A[1] = r * std::sin(th1);
    A[2] = r * std::cos(th2);
    A[3] = r * std::sin(th2);
    A[4] = 1.0;
    A[5] = 1.0;
    return A;
}

// Random valid fixture on degrees (1,2): symmetric quadratic + cubic
// potential data, dual-frame pairing. Valid for any draw.
template <class T>
CyclicDgla<T> random_potential_fixture(std::mt19937_64& rng, int n = 3) {
    CyclicDgla<T> L;
    L.init_dims({0, n, n, 0});
    std::uniform_int_distribution<int> coe(-3, 3);
    for (int i = 0; i < n; ++i) {
        L.pairing(i, n + i) = scalar_traits<T>::one();
        L.pairing(n + i, i) = scalar_traits<T>::one();
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            T v = T(coe(rng));
            L.d(n + j, i) = v;
            L.d(n + i, j) = v;
        }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                T v = T(coe(rng));
                if (scalar_traits<T>::is_zero(v)) continue;
                int idx[3] = {i, j, k};
                int perms[6][3] = {{idx[0], idx[1], idx[2]}, {idx[0], idx[2], idx[1]},
                                   {idx[1], idx[0], idx[2]}, {idx[1], idx[2], idx[0]},
                                   {idx[2], idx[0], idx[1]}, {idx[2], idx[1], idx[0]}};
                for (auto& q : perms) L.b_at(n + q[2], q[0], q[1]) = v;
            }
    return L;
}

// Random block positive-definite metric: per degree M^T M + n * id.
template <class T>
Metric<T> random_metric(const CyclicDgla<T>& L, std::mt19937_64& rng, int spread = 2) {
    Metric<T> g;
    g.g = Mat<T>(L.total, L.total);
    std::uniform_int_distribution<int> coe(-spread, spread);
    for (int deg = 0; deg < 4; ++deg) {
        int n = L.dims[deg], o = L.offset[deg];
        if (n == 0) continue;
        Mat<T> m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = T(coe(rng));
        Mat<T> spd = m.transpose() * m;
        for (int i = 0; i < n; ++i) spd(i, i) += T(n * spread * spread + 1);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g.g(o + i, o + j) = spd(i, j);
    }
    return g;
}

template <class T>
CyclicDgla<T> direct_sum(const CyclicDgla<T>& a, const CyclicDgla<T>& b) {
    CyclicDgla<T> L;
    std::array<int, 4> dims;
    for (int k = 0; k < 4; ++k) dims[k] = a.dims[k] + b.dims[k];
    L.init_dims(dims);
    // embed per degree: a's block first, then b's
    auto map_a = [&](int i) {
        int deg = a.degree[i];
        return L.offset[deg] + (i - a.offset[deg]);
    };
    auto map_b = [&](int i) {
        int deg = b.degree[i];
        return L.offset[deg] + a.dims[deg] + (i - b.offset[deg]);
    };
    for (int i = 0; i < a.total; ++i)
        for (int j = 0; j < a.total; ++j) {
            L.d(map_a(i), map_a(j)) = a.d(i, j);
            L.pairing(map_a(i), map_a(j)) = a.pairing(i, j);
            for (int k = 0; k < a.total; ++k)
                L.b_at(map_a(k), map_a(i), map_a(j)) = a.b_at(k, i, j);
        }
    for (int i = 0; i < b.total; ++i)
        for (int j = 0; j < b.total; ++j) {
            L.d(map_b(i), map_b(j)) = b.d(i, j);
            L.pairing(map_b(i), map_b(j)) = b.pairing(i, j);
            for (int k = 0; k < b.total; ++k)
                L.b_at(map_b(k), map_b(i), map_b(j)) = b.b_at(k, i, j);
        }
    return L;
}

}  // namespace csm
