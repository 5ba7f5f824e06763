#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "csmoduli/fixtures.hpp"
#include "csmoduli/horizontality.hpp"

using namespace csm;

namespace {
std::vector<double> torus_A(const CyclicDgla<double>& L, double t1, double t2) {
    auto a = mexhat_torus_point(0.4 + t1 + 0.3 * t2, 1.3 + t2);
    (void)L;
    return a;
}
// The identity metric: the two rotation planes couple through the cubic
// potential, which is what feeds the Theta-check block. (Anisotropic metrics
// put the family into the uncompensated counterterm sector; see the chart
// tests for the conformal-class statements.)
Mat<double> torus_g(const CyclicDgla<double>& L) { return Mat<double>::identity(L.total); }
}  // namespace

TEST_CASE("bracket-zero family: residual at machine precision") {
    CyclicDgla<double> L;
    L.init_dims({0, 2, 2, 0});
    L.d(2, 0) = 2.0;
    for (int i = 0; i < 2; ++i) {
        L.pairing(i, 2 + i) = 1;
        L.pairing(2 + i, i) = 1;
    }
    FamilyMaps<double> fam;
    fam.A = [&](double, double) { return std::vector<double>(L.total, 0.0); };
    fam.g = [&](double t1, double t2) {
        Mat<double> g = Mat<double>::identity(L.total);
        g(0, 0) = 1 + 0.3 * t1;
        g(1, 1) = 1 / (1 + 0.2 * t2);
        g(2, 2) = 1 + 0.1 * t1 + 0.25 * t2;
        g(3, 3) = std::exp(0.2 * t2);
        g(0, 1) = g(1, 0) = 0.1 * t1 + 0.15 * t2;
        return g;
    };
    HorizontalityOptions opt;
    opt.h = 1e-2;
    auto r = horizontality_residual(L, fam, opt);
    CHECK(r.residual_1form < 1e-12);
    CHECK(r.residual_2form < 1e-12);
    CHECK(r.eps_minus_one < 1e-14);
}

TEST_CASE("coupled torus family: O(h^2) convergence and theta sensitivity") {
    auto L = mexhat_torus<double>();
    FamilyMaps<double> fam;
    fam.A = [&](double t1, double t2) { return torus_A(L, t1, t2); };
    Mat<double> g0 = torus_g(L);
    fam.g = [&](double, double) { return g0; };
    HorizontalityOptions opt;
    opt.h = 1e-2;
    auto r1 = horizontality_residual(L, fam, opt);
    opt.h = 5e-3;
    auto r2 = horizontality_residual(L, fam, opt);
    CHECK(r1.eps_minus_one < 1e-10);
    double order1 = std::log2(r1.residual_1form / r2.residual_1form);
    double order2 = std::log2(r1.residual_2form / r2.residual_2form);
    CHECK(order1 > 1.9);
    CHECK(order2 > 1.9);
    // mutation control: corrupting the Theta-check block stalls convergence
    opt.theta_scale = 1.1;
    auto rm = horizontality_residual(L, fam, opt);
    CHECK(rm.residual_2form > 100 * r2.residual_2form);
}

TEST_CASE("grothendieck R matches the parallel-transport oracle to first order") {
    auto L = mexhat<double>();
    MexhatParams P;
    double th0 = 0.4;
    auto A0 = mexhat_circle_point(P, th0);
    Metric<double> g0;
    g0.g = Mat<double>::identity(L.total);
    g0.g(0, 1) = g0.g(1, 0) = 0.15;
    g0.g(3, 4) = g0.g(4, 3) = -0.2;
    g0.g(2, 2) = 1.3;
    g0.g(5, 5) = 0.8;
    auto H0 = hodge_data(L, A0, g0);
    Mat<double> h1(L.total, 1);
    for (int i = 0; i < L.total; ++i) h1(i, 0) = H0.incl(i, H0.h_offset(1));

    double hfd = 1e-4;
    Direction<double> d;
    auto Ap = mexhat_circle_point(P, th0 + hfd), Am = mexhat_circle_point(P, th0 - hfd);
    d.dA.resize(L.total);
    for (int i = 0; i < L.total; ++i) d.dA[i] = (Ap[i] - Am[i]) / (2 * hfd);
    d.dAprime = d.dA;
    d.dg = Mat<double>(L.total, L.total);
    auto ctx = make_checked_context(L, H0, g0, {d}, h1, 1, 2);
    auto W = wcheck(L, H0, ctx);
    auto R = grothendieck_r(ctx, W);
    REQUIRE(R.comp[0].count(0) == 1);

    auto transition = [&](double t, double a) {
        auto At = mexhat_circle_point(P, th0 + t);
        auto Ht = hodge_data(L, At, g0);
        std::vector<double> col(L.total);
        for (int i = 0; i < L.total; ++i) col[i] = h1(i, 0);
        auto fr = Ht.P.apply(col);
        std::vector<double> coords(H0.h_total, 0.0);
        for (int j = 0; j < H0.h_total; ++j)
            if (H0.hdegree[j] == 1) coords[j] = a;
        auto phi = exponential_map(L, H0, A0, coords, 8);
        std::vector<double> diff(L.total);
        for (int i = 0; i < L.total; ++i) diff[i] = phi[i] - At[i];
        auto pd = Ht.P.apply(diff);
        double num = 0, den = 0;
        for (int i = 0; i < L.total; ++i) {
            num += pd[i] * fr[i];
            den += fr[i] * fr[i];
        }
        return num / den;
    };
    for (double a : {0.0, 0.08}) {
        double t = 1e-4;
        double oracle = (transition(t, a) - transition(-t, a)) / (2 * t);
        double rval = R.comp[0][0][0];
        auto it2 = R.comp[0].find(2);
        if (it2 != R.comp[0].end()) rval += it2->second[0] * a * a;
        CHECK(std::fabs(oracle - rval) < 5e-4 * std::max(1.0, std::fabs(oracle)));
    }
    // order-0 term is minus the harmonic part of deltaA
    auto harm = H0.P.apply(d.dA);
    double coeff = 0, den = 0;
    for (int i = 0; i < L.total; ++i) {
        coeff += harm[i] * h1(i, 0);
        den += h1(i, 0) * h1(i, 0);
    }
    CHECK(R.comp[0][0][0] == doctest::Approx(-coeff / den).epsilon(1e-8));
}

TEST_CASE("grothendieck connection flatness: loop transport residual is O(h^2)") {
    // torus moduli: transitions of the sum-over-trees chart composed around a
    // square commute up to the chart truncation; the finite-difference
    // commutator of the two transports decays at second order
    auto L = mexhat_torus<double>();
    Metric<double> g0;
    g0.g = torus_g(L);
    auto point = [&](double t1, double t2) { return mexhat_torus_point(0.4 + t1, 1.3 + t2); };

    auto transport = [&](double from1, double from2, double to1, double to2,
                         const std::vector<double>& a_coords) {
        auto Afrom = point(from1, from2);
        auto Ato = point(to1, to2);
        auto Hf = hodge_data(L, Afrom, g0);
        auto Ht = hodge_data(L, Ato, g0);
        std::vector<double> coords(Hf.h_total, 0.0);
        int c = 0;
        for (int j = 0; j < Hf.h_total; ++j)
            if (Hf.hdegree[j] == 1) coords[j] = a_coords[c++];
        auto phi = exponential_map(L, Hf, Afrom, coords, 6);
        std::vector<double> diff(L.total);
        for (int i = 0; i < L.total; ++i) diff[i] = phi[i] - Ato[i];
        auto pd = Ht.proj.apply(diff);
        std::vector<double> out;
        for (int j = 0; j < Ht.h_total; ++j)
            if (Ht.hdegree[j] == 1) out.push_back(pd[j]);
        return out;
    };
    auto loop_residual = [&](double h) {
        std::vector<double> a = {0.05, -0.04};
        auto v = a;
        v = transport(0, 0, h, 0, v);
        v = transport(h, 0, h, h, v);
        v = transport(h, h, 0, h, v);
        v = transport(0, h, 0, 0, v);
        double r = 0;
        for (int c = 0; c < 2; ++c) r = std::max(r, std::fabs(v[c] - a[c]));
        return r;
    };
    double r1 = loop_residual(2e-2), r2 = loop_residual(1e-2);
    // exact chart transitions: the loop closes up to the truncation error of
    // the exponential map; the residual must fall at least second order
    CHECK(r1 < 1e-6);
    CHECK(r1 / r2 > 3.0);
}
