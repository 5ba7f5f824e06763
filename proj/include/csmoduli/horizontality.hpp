#pragma once

// Finite-difference residual of the Gauss-Manin horizontality equation
//   (nabla^H + Delta_a + 1/2 <a, F a>) Ycheck = 0,
// for Ycheck = tau-density * exp(Wcheck) over a two-parameter family
// (A(t1,t2), A' = A, g(t1,t2)) of smooth irreducible points.
//
// Frames are the base harmonic frames transported by projection; nabla^H is
// realized as the frame finite difference plus the Hodge-connection action;
// F comes from finite-difference commutators of the connection matrices.
// The tau factor enters with the half-density covariance, tau^{-1/4} in the
// normalization of torsion() (the same density the chart quadratures use).

#include <array>
#include <functional>
#include <map>

#include "csmoduli/checked.hpp"
#include "csmoduli/transfer.hpp"

namespace csm {

template <class T>
struct FamilyMaps {
    std::function<std::vector<T>(double, double)> A;
    std::function<Mat<T>(double, double)> g;  // metric matrix
};

struct HorizontalityOptions {
    double h = 1e-2;
    int eps_order = 1;
    int even_max = 2;          // a1-degree kept in Wcheck
    int report_even = 1;       // a1-degree kept in the residual
    double theta_scale = 1.0;  // sensitivity mutation of the Theta-check term
    double tau_power = -0.25;  // density power of torsion() in Ycheck
    bool verbose = false;
};

template <class T>
struct HorizontalityResult {
    double residual_1form = 0;  // max over the two directions
    double residual_2form = 0;
    double eps_minus_one = 0;   // tree-sector residual (smoothness check)
    double residual() const { return std::max(residual_1form, residual_2form); }
};

template <class T>
class HorizontalityStencil {
  public:
    HorizontalityStencil(const CyclicDgla<T>& L, const FamilyMaps<T>& fam,
                         const HorizontalityOptions& opt)
        : L_(L), fam_(fam), opt_(opt) {}

    HorizontalityResult<T> run() {
        const double h = opt_.h;
        base_ = point_data(0, 0, nullptr);
        if (base_.H.hdims[0] != 0 || base_.H.hdims[3] != 0)
            throw std::invalid_argument("horizontality: fixture must have H^0 = H^3 = 0");
        m_ = base_.m;
        k_ = base_.k;
        alg_ = GrAlgebra::make(2 + k_, m_, opt_.eps_order, opt_.even_max, -1);

        for (int i = -2; i <= 2; ++i)
            for (int j = -2; j <= 2; ++j)
                if (std::abs(i) + std::abs(j) <= 3)
                    grid_[i + 2][j + 2] = point_data(i * h, j * h, &base_);

        HorizontalityResult<T> out;
        const auto& wc = pieces(2, 2);
        out.eps_minus_one = wc.eps_m1;

        Mat<T> G1 = connection_matrix(2, 2, 0), G2 = connection_matrix(2, 2, 1);

        // 1-form residual per direction
        for (int dir = 0; dir < 2; ++dir) {
            int di = dir == 0 ? 1 : 0, dj = dir == 0 ? 0 : 1;
            const auto& wp = pieces(2 + di, 2 + dj);
            const auto& wm = pieces(2 - di, 2 - dj);
            SuperSeries<T> fd = (T(1) / T(2 * h)) * (wp.S0 - wm.S0);
            SuperSeries<T> covar = fd + gamma_action(dir == 0 ? G1 : G2, wc.S0);
            SuperSeries<T> dterm = delta_a(wc.Y1[dir]);
            if (opt_.verbose) {
                std::printf("--- dir %d ---\nfd:\n%s", dir, fd.serialize().c_str());
                std::printf("gamma-part:\n%s",
                            gamma_action(dir == 0 ? G1 : G2, wc.S0).serialize().c_str());
                std::printf("delta-term:\n%s", dterm.serialize().c_str());
                std::printf("residual:\n%s", (covar + dterm).serialize().c_str());
            }
            out.residual_1form =
                std::max(out.residual_1form, sector_norm(covar + dterm));
        }

        // 2-form residual
        {
            SuperSeries<T> t1 =
                (T(1) / T(2 * h)) * (pieces(3, 2).Y1[1] - pieces(1, 2).Y1[1]);
            SuperSeries<T> t2 =
                (T(1) / T(2 * h)) * (pieces(2, 3).Y1[0] - pieces(2, 1).Y1[0]);
            SuperSeries<T> nabla2 = (t1 + gamma_action(G1, wc.Y1[1])) -
                                    (t2 + gamma_action(G2, wc.Y1[0]));
            SuperSeries<T> dterm = delta_a(wc.Y2);
            Mat<T> F = curvature();
            SuperSeries<T> fterm = (T(1) / T(2)) * (a_F_a(F) * wc.S0);
            if (opt_.verbose) {
                std::printf("--- 2-form ---\nnabla2:\n%s", nabla2.serialize().c_str());
                std::printf("delta-term:\n%s", dterm.serialize().c_str());
                std::printf("f-term:\n%s", fterm.serialize().c_str());
                std::printf("residual:\n%s", (nabla2 + dterm + fterm).serialize().c_str());
            }
            out.residual_2form = sector_norm(nabla2 + dterm + fterm);
        }
        return out;
    }

  private:
    struct PointData {
        std::vector<T> A;
        Metric<T> g;
        HodgeData<T> H;
        Mat<T> h1, h2;
        double log_tau = 0;
        int m = 0, k = 0;
    };
    struct WPieces {
        // theta-stripped coefficients of sigma * exp(Wcheck)
        SuperSeries<T> S0, Y2;
        std::array<SuperSeries<T>, 2> Y1;
        double eps_m1 = 0;
    };

    const CyclicDgla<T>& L_;
    FamilyMaps<T> fam_;
    HorizontalityOptions opt_;
    GrAlgebra alg_;
    PointData base_;
    std::array<std::array<PointData, 5>, 5> grid_;
    std::map<std::pair<int, int>, WPieces> piece_cache_;
    int m_ = 0, k_ = 0;

    PointData point_data(double t1, double t2, const PointData* base) {
        PointData p;
        p.A = fam_.A(t1, t2);
        p.g.g = fam_.g(t1, t2);
        p.H = hodge_data(L_, p.A, p.g);
        p.m = p.H.hdims[1];
        p.k = p.H.hdims[2];
        int off1 = p.H.h_offset(1);
        p.h1 = Mat<T>(L_.total, p.m);
        if (!base) {
            for (int a = 0; a < p.m; ++a)
                for (int i = 0; i < L_.total; ++i) p.h1(i, a) = p.H.incl(i, off1 + a);
        } else {
            for (int a = 0; a < p.m; ++a) {
                std::vector<T> col(L_.total);
                for (int i = 0; i < L_.total; ++i) col[i] = base->h1(i, a);
                auto pr = p.H.P.apply(col);
                for (int i = 0; i < L_.total; ++i) p.h1(i, a) = pr[i];
            }
        }
        p.h2 = dual_h2_frame(L_, p.H, p.h1);
        std::vector<std::vector<T>> frames;
        for (int a = 0; a < p.m; ++a) {
            std::vector<T> col(L_.total);
            for (int i = 0; i < L_.total; ++i) col[i] = p.h1(i, a);
            frames.push_back(col);
        }
        for (int b = 0; b < p.k; ++b) {
            std::vector<T> col(L_.total);
            for (int i = 0; i < L_.total; ++i) col[i] = p.h2(i, b);
            frames.push_back(col);
        }
        p.log_tau = torsion(L_, p.H, p.g, frames).log_tau;
        return p;
    }

    std::vector<Direction<T>> directions(int gi, int gj) {
        const double h = opt_.h;
        double t1 = (gi - 1) * h, t2 = (gj - 1) * h;
        auto fd_dir = [&](int dir) {
            Direction<T> d;
            double e1 = dir == 0 ? h : 0, e2 = dir == 0 ? 0 : h;
            auto Ap = fam_.A(t1 + e1, t2 + e2), Am = fam_.A(t1 - e1, t2 - e2);
            d.dA.resize(L_.total);
            for (int i = 0; i < L_.total; ++i) d.dA[i] = (Ap[i] - Am[i]) / T(2 * h);
            d.dAprime = d.dA;
            auto gp = fam_.g(t1 + e1, t2 + e2), gm = fam_.g(t1 - e1, t2 - e2);
            d.dg = (T(1) / T(2 * h)) * (gp - gm);
            return d;
        };
        return {fd_dir(0), fd_dir(1)};
    }

    const WPieces& pieces(int gi, int gj) {
        auto it = piece_cache_.find({gi, gj});
        if (it != piece_cache_.end()) return it->second;
        const auto& p = grid_[gi][gj];
        auto dirs = directions(gi, gj);
        // family dressings: finite differences of K and of the transported
        // frames along each direction (second-order accurate)
        DressingData<double> dress;
        const double h = opt_.h;
        for (int dir = 0; dir < 2; ++dir) {
            int di = dir == 0 ? 1 : 0, dj = dir == 0 ? 0 : 1;
            const auto& pp = grid_[gi + di][gj + dj];
            const auto& pm = grid_[gi - di][gj - dj];
            dress.Kdot.push_back((T(1) / T(2 * h)) * (pp.H.K - pm.H.K));
            Mat<T> xd(L_.total, p.m + p.k);
            for (int c = 0; c < p.m + p.k; ++c)
                for (int i = 0; i < L_.total; ++i) {
                    T xp = c < p.m ? pp.h1(i, c) : pp.h2(i, c - p.m);
                    T xm = c < p.m ? pm.h1(i, c) : pm.h2(i, c - p.m);
                    xd(i, c) = (xp - xm) / T(2 * h);
                }
            dress.Xdot.push_back(xd);
        }
        auto ctx = make_checked_context(L_, p.H, p.g, dirs, p.h1, opt_.eps_order,
                                        opt_.even_max, &dress);
        auto W = wcheck(L_, p.H, ctx);
        if (opt_.theta_scale != 1.0) {
            // mutate only the theta-theta block of the single-edge term
            SuperSeries<T> block(W.algebra());
            for (const auto& [k, v] : ctx.theta_check.terms())
                if ((k.odd & 1u) && (k.odd & 2u) && k.eps <= ctx.eps_requested)
                    block.add_term(k, v);
            W += T(opt_.theta_scale - 1.0) * block;
        }
        WPieces out{SuperSeries<T>(&alg_), SuperSeries<T>(&alg_),
                    {SuperSeries<T>(&alg_), SuperSeries<T>(&alg_)}, 0};
        out.eps_m1 = eps_minus_one_residual(W);
        // exponentiate the full Wcheck in the theta algebra, then strip, so
        // Koszul signs between theta and the odd zero-modes are kept
        SuperSeries<T> wclean(&alg_);
        for (const auto& [k, v] : W.terms())
            if (k.eps >= 0) wclean.add_term(k, v);  // smooth-point tree sector drops
        T sigma = T(std::exp(opt_.tau_power * p.log_tau));
        SuperSeries<T> full = sigma * wclean.exp_series();
        for (const auto& [k, v] : full.terms()) {
            bool th0 = k.odd & 1u, th1 = k.odd & 2u;
            GrKey k2 = k;
            k2.odd &= ~3u;
            if (!th0 && !th1) out.S0.add_term(k2, v);
            else if (th0 && !th1) out.Y1[0].add_term(k2, v);
            else if (!th0 && th1) out.Y1[1].add_term(k2, v);
            else out.Y2.add_term(k2, v);
        }
        return piece_cache_.emplace(std::make_pair(gi, gj), std::move(out)).first->second;
    }

    Mat<T> connection_matrix(int gi, int gj, int dir) {
        const double h = opt_.h;
        const auto& p = grid_[gi][gj];
        int di = dir == 0 ? 1 : 0, dj = dir == 0 ? 0 : 1;
        const auto& pp = grid_[gi + di][gj + dj];
        const auto& pm = grid_[gi - di][gj - dj];
        auto dirs = directions(gi, gj);
        auto C = connection_forms(L_, p.H, p.g, dirs[dir].dA, dirs[dir].dAprime, dirs[dir].dg);
        Mat<T> Hop = C.total();

        int total = p.m + p.k;
        Mat<T> frames(L_.total, total);
        for (int a = 0; a < p.m; ++a)
            for (int i = 0; i < L_.total; ++i) frames(i, a) = p.h1(i, a);
        for (int b = 0; b < p.k; ++b)
            for (int i = 0; i < L_.total; ++i) frames(i, p.m + b) = p.h2(i, b);

        // frame coordinates: solve (proj * frames) c = proj(w)
        Mat<T> N(p.H.h_total, total);
        for (int i = 0; i < p.H.h_total; ++i)
            for (int j = 0; j < total; ++j) {
                T s = scalar_traits<T>::zero();
                for (int b = 0; b < L_.total; ++b) s += p.H.proj(i, b) * frames(b, j);
                N(i, j) = s;
            }
        Mat<T> Ninv = inverse(N);

        Mat<T> gamma(total, total);
        for (int c = 0; c < total; ++c) {
            std::vector<T> w(L_.total);
            for (int i = 0; i < L_.total; ++i) {
                T xp = c < p.m ? pp.h1(i, c) : pp.h2(i, c - p.m);
                T xm = c < p.m ? pm.h1(i, c) : pm.h2(i, c - p.m);
                w[i] = (xp - xm) / T(2 * h);
            }
            std::vector<T> x0(L_.total);
            for (int i = 0; i < L_.total; ++i) x0[i] = frames(i, c);
            auto hx = Hop.apply(x0);
            for (int i = 0; i < L_.total; ++i) w[i] += hx[i];
            auto coords = Ninv.apply(p.H.proj.apply(w));
            for (int r = 0; r < total; ++r) gamma(r, c) = coords[r];
        }
        return gamma;
    }

    Mat<T> curvature() {
        const double h = opt_.h;
        Mat<T> g2p = connection_matrix(3, 2, 1), g2m = connection_matrix(1, 2, 1);
        Mat<T> g1p = connection_matrix(2, 3, 0), g1m = connection_matrix(2, 1, 0);
        Mat<T> G1 = connection_matrix(2, 2, 0), G2 = connection_matrix(2, 2, 1);
        Mat<T> dG2 = (T(1) / T(2 * h)) * (g2p - g2m);  // d_1 Gamma_2
        Mat<T> dG1 = (T(1) / T(2 * h)) * (g1p - g1m);  // d_2 Gamma_1
        return dG2 - dG1 + (G1 * G2 - G2 * G1);
    }

    // covariant correction: -(Gamma a) d/da - 1/2 str(Gamma)
    SuperSeries<T> gamma_action(const Mat<T>& gamma, const SuperSeries<T>& f) {
        SuperSeries<T> out(&alg_);
        for (int b = 0; b < m_; ++b) {
            auto df = f.d_even(b);
            if (df.empty()) continue;
            for (int a = 0; a < m_; ++a) {
                if (scalar_traits<T>::is_zero(gamma(b, a))) continue;
                out -= SuperSeries<T>::even_gen(&alg_, a, gamma(b, a)) * df;
            }
        }
        for (int c = 0; c < k_; ++c) {
            auto df = f.d_odd(2 + c);
            if (df.empty()) continue;
            for (int b = 0; b < k_; ++b) {
                const T& val = gamma(m_ + c, m_ + b);
                if (scalar_traits<T>::is_zero(val)) continue;
                out -= SuperSeries<T>::odd_gen(&alg_, 2 + b, val) * df;
            }
        }
        T str = scalar_traits<T>::zero();
        for (int a = 0; a < m_; ++a) str += gamma(a, a);
        for (int b = 0; b < k_; ++b) str -= gamma(m_ + b, m_ + b);
        out -= (str / T(2)) * f;
        return out;
    }

    SuperSeries<T> delta_a(const SuperSeries<T>& f) {
        SuperSeries<T> out(&alg_);
        for (int b = 0; b < m_ && b < k_; ++b) out += f.d_odd(2 + b).d_even(b);
        return out;
    }

    SuperSeries<T> a_F_a(const Mat<T>& F) {
        SuperSeries<T> out(&alg_);
        for (int a = 0; a < m_; ++a)
            for (int d = 0; d < k_; ++d) {
                T val = F(m_ + a, m_ + d);  // (F^2)_{a d}, paired against a1_a
                if (!scalar_traits<T>::is_zero(val))
                    out += SuperSeries<T>::even_gen(&alg_, a, val) *
                           SuperSeries<T>::odd_gen(&alg_, 2 + d, scalar_traits<T>::one());
            }
        for (int b = 0; b < k_; ++b)
            for (int e = 0; e < m_; ++e) {
                T val = F(b, e);  // (F^1)_{b e}, paired against a2_b
                if (!scalar_traits<T>::is_zero(val))
                    out += SuperSeries<T>::odd_gen(&alg_, 2 + b, val) *
                           SuperSeries<T>::even_gen(&alg_, e, scalar_traits<T>::one());
            }
        return out;
    }

    double sector_norm(const SuperSeries<T>& s) {
        double worst = 0;
        for (const auto& [k, v] : s.terms()) {
            if (k.eps > opt_.eps_order || k.eps < 0) continue;
            if (k.even_degree() > opt_.report_even) continue;
            worst = std::max(worst, std::fabs(scalar_traits<T>::to_double(v)));
        }
        return worst;
    }
};

template <class T>
HorizontalityResult<T> horizontality_residual(const CyclicDgla<T>& L, const FamilyMaps<T>& fam,
                                              const HorizontalityOptions& opt) {
    HorizontalityStencil<T> st(L, fam, opt);
    return st.run();
}

}  // namespace csm
