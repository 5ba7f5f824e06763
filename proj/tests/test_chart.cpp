#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csmoduli/chart.hpp"
#include "csmoduli/fixtures.hpp"

using namespace csm;

namespace {
constexpr double kPi = 3.14159265358979323846;

Mat<double> base_metric(const CyclicDgla<double>& L, double t) {
    Mat<double> g = Mat<double>::identity(L.total);
    double c = std::cos(2 * kPi * t), s = std::sin(2 * kPi * t);
    g(0, 0) += 0.3 * c * c;
    g(1, 1) += 0.2 * s * s;
    g(0, 1) = g(1, 0) = 0.15 * s * c;
    g(3, 3) = 1.2;
    g(4, 5) = g(5, 4) = 0.2 * s;
    return g;
}

ModuliChart circle_chart(const CyclicDgla<double>& L, int n,
                         const std::function<Mat<double>(double)>& g_of) {
    MexhatParams P;
    ChartOptions opt;
    opt.grid_n = n;
    return build_chart(L, [&](double t) { return mexhat_circle_point(P, 2 * kPi * t); }, g_of,
                       opt);
}
}  // namespace

TEST_CASE("chart build rejects bad families") {
    auto LS = f_sym<double>();
    ChartOptions opt;
    opt.grid_n = 8;
    // F-SYM family: flat but not smooth (l2' != 0)
    CHECK_THROWS_AS(build_chart(
                        LS, [&](double t) {
                            std::vector<double> A(LS.total, 0.0);
                            A[0] = std::cos(2 * kPi * t);
                            A[1] = std::sin(2 * kPi * t);
                            return A;
                        },
                        [&](double) { return Mat<double>::identity(LS.total); }, opt),
                    ChartError);
    // reducible: su2 tensor Lambda with A = 0 has H^0 != 0
    auto LT = tensor_frobenius(su2<double>(), false);
    CHECK_THROWS_AS(build_chart(
                        LT, [&](double) { return std::vector<double>(LT.total, 0.0); },
                        [&](double) { return Mat<double>::identity(LT.total); }, opt),
                    ChartError);
    // non-flat family
    auto LM = mexhat<double>();
    CHECK_THROWS_AS(build_chart(
                        LM, [&](double) {
                            auto A = mexhat_circle_point(MexhatParams{}, 0.3);
                            A[2] += 0.3;
                            return A;
                        },
                        [&](double) { return Mat<double>::identity(LM.total); }, opt),
                    ChartError);
}

TEST_CASE("bracket-zero circle chart: valid, constant torsion density") {
    auto L = f_zero<double>();
    ChartOptions opt;
    opt.grid_n = 12;
    ChartError* err = nullptr;
    (void)err;
    // dim H^1 = 3 on f_zero, so the circle-chart tangent frame machinery
    // rejects it (needs dim H^1 = 1); use a potential fixture instead: the
    // mexhat circle with bracket scaled to zero is not flat, so check the
    // f_zero rejection explicitly.
    CHECK_THROWS(build_chart(
        L, [&](double t) {
            std::vector<double> A(L.total, 0.0);
            A[0] = std::cos(2 * kPi * t);
            A[1] = std::sin(2 * kPi * t);
            return A;
        },
        [&](double) { return Mat<double>::identity(L.total); }, opt));
}

TEST_CASE("lambda0 on the mexhat circle equals pi, independent of the metric") {
    auto L = mexhat<double>();
    auto ch = circle_chart(L, 48, [&](double t) { return base_metric(L, t); });
    CHECK(lambda0(ch) == doctest::Approx(kPi).epsilon(1e-9));
    // different metric family: same value (torsion density invariance)
    auto ch2 = circle_chart(L, 48, [&](double t) {
        auto g = base_metric(L, 1 - t);
        g(2, 2) = 1.7;
        g(5, 5) = 0.6;
        return g;
    });
    CHECK(std::fabs(lambda0(ch2) - lambda0(ch)) < 1e-10);
    // orientation flip
    ChartOptions opt = ch.opt;
    (void)opt;
    ModuliChart flipped = ch;
    flipped.opt.orientation = -1;
    CHECK(lambda0(flipped) == doctest::Approx(-lambda0(ch)));
}

TEST_CASE("grid refinement changes lambda0 below 1e-10") {
    auto L = mexhat<double>();
    auto c1 = circle_chart(L, 24, [&](double t) { return base_metric(L, t); });
    auto c2 = circle_chart(L, 48, [&](double t) { return base_metric(L, t); });
    CHECK(std::fabs(lambda0(c1) - lambda0(c2)) < 1e-10);
}

TEST_CASE("pointwise concordance: rho * sum(Phi) equals the eps^1 volume form") {
    auto L = mexhat<double>();
    auto ch = circle_chart(L, 16, [&](double t) { return base_metric(L, t); });
    for (int i = 0; i < ch.n(); i += 2) {
        auto p = phi_terms(ch, i);
        auto y = chart_y_point(ch, i);
        CHECK(std::fabs(ch.rho[i] * p.sum() - y[1]) < 1e-12);
    }
    // bracket-dependent crosscheck: phi3 vanishes structurally here, phi5 =
    // -phi6 at dim H^1 = 1
    auto p0 = phi_terms(ch, 0);
    CHECK(p0.phi3 == 0.0);
    CHECK(p0.phi5 == doctest::Approx(-p0.phi6));
}

TEST_CASE("lambda1 equals the eps^1 coefficient of the full invariant") {
    auto L = mexhat<double>();
    auto ch = circle_chart(L, 24, [&](double t) { return base_metric(L, t); });
    auto rep = full_invariant(ch);
    CHECK(rep.lambda[0] == doctest::Approx(rep.lambda0));
    CHECK(lambda1(ch) == doctest::Approx(rep.lambda[1]).epsilon(1e-10));
    CHECK(rep.lambda1_phi_sum == doctest::Approx(rep.lambda[1]).epsilon(1e-10));
}

TEST_CASE("frame independence: invariants unchanged under reparametrization") {
    // reparametrizing the circle rescales the tangent frames smoothly; the
    // density weight compensates and Lambda is unchanged
    auto L = mexhat<double>();
    MexhatParams P;
    ChartOptions opt;
    opt.grid_n = 48;
    auto g_of = [&](double t) { return base_metric(L, t); };
    auto ch = build_chart(L, [&](double t) { return mexhat_circle_point(P, 2 * kPi * t); }, g_of,
                          opt);
    // reparametrized: t -> t + 0.13 sin(2 pi t) (orientation preserving)
    auto warp = [](double t) { return t + 0.13 * std::sin(2 * kPi * t) / (2 * kPi); };
    auto ch2 = build_chart(
        L, [&](double t) { return mexhat_circle_point(P, 2 * kPi * warp(t)); },
        [&](double t) { return base_metric(L, warp(t)); }, opt);
    auto r1 = full_invariant(ch), r2 = full_invariant(ch2);
    CHECK(r1.lambda[0] == doctest::Approx(r2.lambda[0]).epsilon(1e-9));
    CHECK(r1.lambda[1] == doctest::Approx(r2.lambda[1]).epsilon(1e-7));
}

TEST_CASE("metric independence within the conformal class, exact") {
    auto L = mexhat<double>();
    auto ch0 = circle_chart(L, 32, [&](double t) { return base_metric(L, t); });
    // conformal per-degree rescalings of the same base profile
    auto ch1 = circle_chart(L, 32, [&](double t) {
        auto g = base_metric(L, t);
        double f1 = 1.0 + 0.4 * std::sin(2 * kPi * t) * std::sin(2 * kPi * t);
        double f2 = std::exp(0.3 * std::cos(2 * kPi * t));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) *= f1;
        for (int i = 3; i < 6; ++i)
            for (int j = 3; j < 6; ++j) g(i, j) *= f2;
        return g;
    });
    auto r0 = full_invariant(ch0), r1 = full_invariant(ch1);
    CHECK(std::fabs(r0.lambda[0] - r1.lambda[0]) < 1e-10);
    CHECK(std::fabs(r0.lambda[1] - r1.lambda[1]) < 1e-10);
}

TEST_CASE("xi form: zero direction gives zero; integrated exactness holds") {
    auto L = mexhat<double>();
    auto ch = circle_chart(L, 24, [&](double t) { return base_metric(L, t); });
    Mat<double> zero(L.total, L.total);
    CHECK(xi_form(ch, 3, zero) == 0.0);
    // conformal direction: closed-chart integral of the metric variation of
    // the Lambda_1 integrand vanishes
    double s = 1e-5;
    auto chp = circle_chart(L, 24, [&](double t) {
        auto g = base_metric(L, t);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) *= 1 + s;
        for (int i = 3; i < 6; ++i)
            for (int j = 3; j < 6; ++j) g(i, j) *= 1 - 0.7 * s;
        return g;
    });
    auto chm = circle_chart(L, 24, [&](double t) {
        auto g = base_metric(L, t);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) *= 1 - s;
        for (int i = 3; i < 6; ++i)
            for (int j = 3; j < 6; ++j) g(i, j) *= 1 + 0.7 * s;
        return g;
    });
    double dlam = (full_invariant(chp).lambda[1] - full_invariant(chm).lambda[1]) / (2 * s);
    CHECK(std::fabs(dlam) < 1e-7);
}

TEST_CASE("axelrod-singer-only control on a tuned anisotropic pair") {
    auto L = mexhat<double>();
    // measure the anomaly of the full invariant along two anisotropic probe
    // directions and combine them into a direction where it cancels
    Mat<double> dgA(L.total, L.total), dgB(L.total, L.total);
    dgA(0, 0) = 0.2;
    dgA(1, 1) = -0.1;
    dgA(0, 1) = dgA(1, 0) = 0.15;
    dgA(2, 2) = 0.1;
    dgB(3, 3) = -0.12;
    dgB(4, 4) = 0.2;
    dgB(3, 5) = dgB(5, 3) = 0.17;
    auto lam1_with = [&](const Mat<double>& dg, double s) {
        auto ch = circle_chart(L, 24, [&](double t) {
            auto g = base_metric(L, t);
            for (int i = 0; i < L.total; ++i)
                for (int j = 0; j < L.total; ++j) g(i, j) += s * dg(i, j);
            return g;
        });
        auto r = full_invariant(ch);
        std::vector<double> as(ch.n());
        for (int i = 0; i < ch.n(); ++i) as[i] = chart_as_point(ch, i);
        return std::make_pair(r.lambda[1], chart_quadrature(ch, as));
    };
    double fd = 1e-5;
    double aA = (lam1_with(dgA, fd).first - lam1_with(dgA, -fd).first) / (2 * fd);
    double aB = (lam1_with(dgB, fd).first - lam1_with(dgB, -fd).first) / (2 * fd);
    REQUIRE(std::fabs(aB) > 1e-12);
    // anomaly-kernel direction
    Mat<double> dgK = dgA - (aA / aB) * dgB;
    double sasA = (lam1_with(dgK, fd).second - lam1_with(dgK, -fd).second) / (2 * fd);
    CHECK(std::fabs(sasA) > 1e-4);  // AS-only part varies along the kernel direction
    double akern = (lam1_with(dgK, fd).first - lam1_with(dgK, -fd).first) / (2 * fd);
    CHECK(std::fabs(akern) < 1e-6 * std::max(1.0, std::fabs(aA)));
}
