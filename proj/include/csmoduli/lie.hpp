#pragma once

// Lie algebra data for weight systems: structure tensor lowered with the
// honest Killing form tr(ad∘ad), plus the graph pairing <-,->_Gamma and the
// IHX/Jacobi residual. Built-in su(2) and su(3) use rational bases.
//
// Normalization (documented): with f fully lowered by the Killing form of a
// compact algebra, sum_{cd} f_{acd} f_{bcd} = -2 h_vee kappa_{ab}.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csmoduli/graphs.hpp"
#include "csmoduli/linalg.hpp"
#include "csmoduli/rational.hpp"

namespace csm {

template <class T>
struct LieAlgebraData {
    int dim = 0;
    std::vector<T> f;    // lowered f_{abc}, index a*dim*dim + b*dim + c
    Mat<T> killing;      // kappa_{ab}
    Rational dual_coxeter;

    const T& f_at(int a, int b, int c) const { return f[(a * dim + b) * dim + c]; }
    T& f_at(int a, int b, int c) { return f[(a * dim + b) * dim + c]; }
};

namespace detail {

// Builds kappa = tr(ad ad) and lowered f from upper structure constants
// f^c_{ab} (index a*dim*dim + b*dim + c).
template <class T>
LieAlgebraData<T> from_upper_structure(int dim, const std::vector<T>& fu, Rational h_vee) {
    LieAlgebraData<T> L;
    L.dim = dim;
    L.dual_coxeter = h_vee;
    L.killing = Mat<T>(dim, dim);
    auto up = [&](int a, int b, int c) -> const T& { return fu[(a * dim + b) * dim + c]; };
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            T s = scalar_traits<T>::zero();
            for (int c = 0; c < dim; ++c)
                for (int d = 0; d < dim; ++d) s += up(a, d, c) * up(b, c, d);
            L.killing(a, b) = s;
        }
    L.f.assign(static_cast<size_t>(dim) * dim * dim, scalar_traits<T>::zero());
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c) {
                T s = scalar_traits<T>::zero();
                for (int d = 0; d < dim; ++d) s += up(a, b, d) * L.killing(d, c);
                L.f_at(a, b, c) = s;
            }
    return L;
}

inline int epsilon3(int a, int b, int c) {
    if (a == b || b == c || a == c) return 0;
    return ((b - a + 3) % 3 == 1) ? 1 : -1;  // valid for {a,b,c} = {0,1,2}
}

}  // namespace detail

template <class T>
LieAlgebraData<T> su2() {
    std::vector<T> fu(27, scalar_traits<T>::zero());
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                int e = detail::epsilon3(a, b, c);
                if (e) fu[(a * 3 + b) * 3 + c] = T(e);
            }
    return detail::from_upper_structure<T>(3, fu, Rational(2));
}

// su(3) in the rational basis E_{jk}-E_{kj}, i(E_{jk}+E_{kj}), i(E_{jj}-E_{j+1,j+1}).
template <class T>
LieAlgebraData<T> su3() {
    struct CQ {
        Rational re, im;
    };
    using CMat = std::array<std::array<CQ, 3>, 3>;
    auto zero_mat = [] {
        CMat m{};
        for (auto& row : m)
            for (auto& e : row) e = {Rational(0), Rational(0)};
        return m;
    };
    std::vector<CMat> basis(8, zero_mat());
    int idx = 0;
    for (int j = 0; j < 3; ++j)
        for (int k = j + 1; k < 3; ++k) {
            basis[idx][j][k].re = Rational(1);
            basis[idx][k][j].re = Rational(-1);
            ++idx;
        }
    for (int j = 0; j < 3; ++j)
        for (int k = j + 1; k < 3; ++k) {
            basis[idx][j][k].im = Rational(1);
            basis[idx][k][j].im = Rational(1);
            ++idx;
        }
    basis[6][0][0].im = Rational(1);
    basis[6][1][1].im = Rational(-1);
    basis[7][1][1].im = Rational(1);
    basis[7][2][2].im = Rational(-1);

    auto mul = [&](const CMat& x, const CMat& y) {
        CMat r = zero_mat();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    r[i][j].re += x[i][k].re * y[k][j].re - x[i][k].im * y[k][j].im;
                    r[i][j].im += x[i][k].re * y[k][j].im + x[i][k].im * y[k][j].re;
                }
        return r;
    };
    auto commutator = [&](const CMat& x, const CMat& y) {
        CMat a = mul(x, y), b = mul(y, x), r = zero_mat();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                r[i][j].re = a[i][j].re - b[i][j].re;
                r[i][j].im = a[i][j].im - b[i][j].im;
            }
        return r;
    };
    // Coordinates of an anti-hermitian traceless matrix in the basis above.
    auto expand = [&](const CMat& z) {
        std::vector<Rational> c(8, Rational(0));
        int p = 0;
        for (int j = 0; j < 3; ++j)
            for (int k = j + 1; k < 3; ++k) c[p++] = z[j][k].re;
        for (int j = 0; j < 3; ++j)
            for (int k = j + 1; k < 3; ++k) c[p++] = z[j][k].im;
        c[6] = z[0][0].im;
        c[7] = Rational(0) - z[2][2].im;
        return c;
    };

    std::vector<T> fu(8 * 8 * 8, scalar_traits<T>::zero());
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            auto c = expand(commutator(basis[a], basis[b]));
            for (int k = 0; k < 8; ++k) {
                if (c[k].is_zero()) continue;
                if constexpr (scalar_traits<T>::exact)
                    fu[(a * 8 + b) * 8 + k] = c[k];
                else
                    fu[(a * 8 + b) * 8 + k] = c[k].to_double();
            }
        }
    return detail::from_upper_structure<T>(8, fu, Rational(3));
}

// Structural validation; returns max |residual| (0 means all identities hold).
template <class T>
double validate_lie(const LieAlgebraData<T>& L) {
    double worst = 0;
    auto upd = [&](const T& v) {
        double x = std::fabs(scalar_traits<T>::to_double(v));
        if (x > worst) worst = x;
    };
    int n = L.dim;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) upd(L.killing(a, b) - L.killing(b, a));
    // total antisymmetry of lowered f
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                upd(L.f_at(a, b, c) + L.f_at(b, a, c));
                upd(L.f_at(a, b, c) + L.f_at(a, c, b));
            }
    // Jacobi with one index raised through kappa^{-1}
    Mat<T> kinv = inverse(L.killing);
    auto up = [&](int a, int b, int c) {
        T s = scalar_traits<T>::zero();
        for (int d = 0; d < n; ++d) s += L.f_at(a, b, d) * kinv(d, c);
        return s;
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int e = 0; e < n; ++e) {
                    T s = scalar_traits<T>::zero();
                    for (int d = 0; d < n; ++d)
                        s += up(a, b, d) * up(d, c, e) + up(b, c, d) * up(d, a, e) +
                             up(c, a, d) * up(d, b, e);
                    upd(s);
                }
    // Casimir identity in the honest Killing normalization:
    // f_{acd} f_{bc'd'} kappa^{cc'} kappa^{dd'} = -kappa_{ab}. In a basis with
    // kappa = lambda * id this reduces to sum f_{acd} f_{bcd} = -2 h_vee c_k
    // kappa_{ab} with lambda = 2 h_vee c_k, the documented normalization.
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            T s = scalar_traits<T>::zero();
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    for (int c2 = 0; c2 < n; ++c2)
                        for (int d2 = 0; d2 < n; ++d2)
                            s += L.f_at(a, c, d) * L.f_at(b, c2, d2) * kinv(c, c2) * kinv(d, d2);
            upd(s + L.killing(a, b));
        }
    return worst;
}

// Koszul parity of the tensor word against ascending dart order, with every
// leg treated as odd. Edge blocks contribute their legs sink-first; leaves
// follow in dart order. This is the documented half-edge sign rule: it makes
// weights with antisymmetric vertex tensors independent of the labeling.
inline int word_sign(const TrivalentGraph& g) {
    if (g.single_edge) return 1;
    std::vector<int> word;
    for (const auto& [d1, d2] : g.edges()) {
        word.push_back(d2);
        word.push_back(d1);
    }
    for (int d : g.leaves()) word.push_back(d);
    int inv = 0;
    for (size_t i = 0; i < word.size(); ++i)
        for (size_t j = i + 1; j < word.size(); ++j)
            if (word[i] > word[j]) ++inv;
    return inv % 2 ? -1 : 1;
}

// Full contraction of the tensor network over a trivalent graph: one
// dim x dim tensor per edge (short loops included), one vector per leaf, a
// rank-3 vertex tensor (defaults to f), evaluated in (vertex, slot) order
// and multiplied by the word sign above.
template <class T>
T graph_pairing(const TrivalentGraph& g, const LieAlgebraData<T>& lie,
                const std::vector<Mat<T>>& edge_tensors,
                const std::vector<std::vector<T>>& leaf_tensors,
                const std::vector<T>* vertex_tensor = nullptr) {
    int n = lie.dim;
    const std::vector<T>& vt = vertex_tensor ? *vertex_tensor : lie.f;
    if (static_cast<int>(vt.size()) != n * n * n)
        throw std::invalid_argument("graph_pairing: vertex tensor size mismatch");
    for (const auto& e : edge_tensors)
        if (static_cast<int>(e.rows()) != n || static_cast<int>(e.cols()) != n)
            throw std::invalid_argument("graph_pairing: edge tensor dimension mismatch");
    for (const auto& l : leaf_tensors)
        if (static_cast<int>(l.size()) != n)
            throw std::invalid_argument("graph_pairing: leaf tensor dimension mismatch");

    if (g.single_edge) {
        if (edge_tensors.size() != 1 || leaf_tensors.size() != 2)
            throw std::invalid_argument("graph_pairing: single edge needs 1 kernel, 2 leaves");
        T s = scalar_traits<T>::zero();
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                s += edge_tensors[0](a, b) * leaf_tensors[0][a] * leaf_tensors[1][b];
        return s;
    }
    auto edges = g.edges();
    auto leaves = g.leaves();
    if (edge_tensors.size() != edges.size() || leaf_tensors.size() != leaves.size())
        throw std::invalid_argument("graph_pairing: decoration count mismatch");

    // dart -> (edge index, which leg) / (leaf index)
    int nd = g.n_darts();
    std::vector<int> edge_of(nd, -1), leg_of(nd, 0), leaf_of(nd, -1);
    for (size_t e = 0; e < edges.size(); ++e) {
        edge_of[edges[e].first] = static_cast<int>(e);
        leg_of[edges[e].first] = 0;
        edge_of[edges[e].second] = static_cast<int>(e);
        leg_of[edges[e].second] = 1;
    }
    for (size_t l = 0; l < leaves.size(); ++l) leaf_of[leaves[l]] = static_cast<int>(l);

    // sparse vertex tensor support
    struct Entry {
        int a, b, c;
        T v;
    };
    std::vector<Entry> support;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const T& v = vt[(a * n + b) * n + c];
                if (!scalar_traits<T>::is_zero(v)) support.push_back({a, b, c, v});
            }

    std::vector<int> assign(nd, -1);
    T total = scalar_traits<T>::zero();
    auto rec = [&](auto&& self, int v, T acc) -> void {
        if (v == g.n_vertices) {
            // multiply edge kernels and leaf vectors
            for (const auto& [d1, d2] : edges) acc *= edge_tensors[edge_of[d1]](assign[d1], assign[d2]);
            for (int d : leaves) acc *= leaf_tensors[leaf_of[d]][assign[d]];
            total += acc;
            return;
        }
        for (const auto& ent : support) {
            assign[3 * v] = ent.a;
            assign[3 * v + 1] = ent.b;
            assign[3 * v + 2] = ent.c;
            self(self, v + 1, acc * ent.v);
        }
    };
    rec(rec, 0, scalar_traits<T>::one());
    if (word_sign(g) < 0) total = -total;
    return total;
}

// Max |cyclic Jacobi contraction| over a deterministic pseudo-random set of
// boundary vectors; zero exactly when f satisfies Jacobi.
template <class T>
double check_ihx(const LieAlgebraData<T>& L, int trials = 16) {
    int n = L.dim;
    Mat<T> kinv = inverse(L.killing);
    unsigned long long state = 0x9e3779b97f4a7c15ull;
    auto next_small = [&]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<int>((state >> 33) % 7) - 3;
    };
    auto contract2 = [&](const std::vector<T>& u, const std::vector<T>& v) {
        // w_d = f_{abd} u^a v^b, then raise d
        std::vector<T> w(n, scalar_traits<T>::zero());
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                T uv = u[a] * v[b];
                if (scalar_traits<T>::is_zero(uv)) continue;
                for (int d = 0; d < n; ++d) w[d] += uv * L.f_at(a, b, d);
            }
        std::vector<T> wr(n, scalar_traits<T>::zero());
        for (int d = 0; d < n; ++d)
            for (int e = 0; e < n; ++e) wr[e] += w[d] * kinv(d, e);
        return wr;
    };
    double worst = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<T> u(n), v(n), w(n), z(n);
        for (int i = 0; i < n; ++i) {
            u[i] = T(next_small());
            v[i] = T(next_small());
            w[i] = T(next_small());
            z[i] = T(next_small());
        }
        auto term = [&](const std::vector<T>& x, const std::vector<T>& y,
                        const std::vector<T>& s) {
            auto xy = contract2(x, y);
            T acc = scalar_traits<T>::zero();
            for (int d = 0; d < n; ++d)
                for (int c = 0; c < n; ++c)
                    for (int e = 0; e < n; ++e) acc += xy[d] * L.f_at(d, c, e) * s[c] * z[e];
            return acc;
        };
        T r = term(u, v, w) + term(v, w, u) + term(w, u, v);
        double x = std::fabs(scalar_traits<T>::to_double(r));
        if (x > worst) worst = x;
    }
    return worst;
}

// Leading coefficient of c(epsilon): h_vee * dim / (24 (2 pi)^2).
template <class T>
double c_leading(const LieAlgebraData<T>& L) {
    constexpr double pi = 3.14159265358979323846264338327950288;
    return L.dual_coxeter.to_double() * L.dim / (24.0 * 4.0 * pi * pi);
}

}  // namespace csm
