#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "csmoduli/fixtures.hpp"
#include "csmoduli/transfer.hpp"

using namespace csm;
using R = Rational;

namespace {
template <class T>
std::vector<T> h_elem(const HodgeData<T>& H, int idx) {
    std::vector<T> c(H.h_total, scalar_traits<T>::zero());
    c[idx] = scalar_traits<T>::one();
    return H.incl.apply(c);
}
}  // namespace

TEST_CASE("f_zero: all transferred operations vanish") {
    auto L = f_zero<R>();
    Metric<R> g = Metric<R>::identity(L);
    std::vector<R> A(L.total, R(0));
    auto H = hodge_data(L, A, g);
    CHECK(l_op_norm(L, H, 2) == 0.0);
    CHECK(l_op_norm(L, H, 3) == 0.0);
}

TEST_CASE("f_sym: l2' is the bracket on cohomology, l3' = 0") {
    auto L = f_sym<R>();
    Metric<R> g = Metric<R>::identity(L);
    std::vector<R> A(L.total, R(0));
    auto H = hodge_data(L, A, g);
    // d = 0 so harmonics are the basis itself. l2'(x_0,x_1) = [x_0,x_1] = y_2.
    auto v = l_op_tree_sum(L, H, {h_elem(H, 0), h_elem(H, 1)});
    // locate the H component corresponding to y_2 (global index 5)
    REQUIRE(H.h_total == 6);
    for (int j = 0; j < H.h_total; ++j) {
        R expect(0);
        for (int b = 0; b < L.total; ++b)
            if (!H.incl(b, j).is_zero() && b == 5) expect = R(1);
        CHECK(v[j] == (expect.is_zero() ? R(0) : R(1)));
    }
    CHECK(l_op_norm(L, H, 3) == 0.0);
    CHECK(l_op_norm(L, H, 2) == doctest::Approx(1.0));
}

TEST_CASE("tree sum equals recursion oracle exactly on the frobenius fixture") {
    auto L = tensor_frobenius(su2<R>(), true);
    Metric<R> g = Metric<R>::identity(L);
    std::vector<R> A(L.total, R(0));
    auto H = hodge_data(L, A, g);
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> coe(-2, 2);
    auto rand_h = [&](int deg) {
        std::vector<R> c(H.h_total, R(0));
        for (int j = 0; j < H.h_total; ++j)
            if (H.hdegree[j] == deg) c[j] = R(coe(rng));
        return H.incl.apply(c);
    };
    double nonzero_seen = 0;
    for (int t = 0; t < 6; ++t)
        for (int n = 2; n <= 4; ++n) {
            std::vector<std::vector<R>> args;
            for (int k = 0; k < n; ++k) args.push_back(rand_h(1));
            auto a = l_op_tree_sum(L, H, args);
            auto b = l_op_recursive(L, H, args);
            for (int i = 0; i < H.h_total; ++i) {
                CHECK(a[i] == b[i]);
                nonzero_seen = std::max(nonzero_seen, std::fabs(a[i].to_double()));
            }
        }
    CHECK(nonzero_seen > 0);  // the oracle comparison is not vacuous
}

TEST_CASE("generalized Jacobi relations hold exactly (rational fixtures)") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> coe(-2, 2);
    // frobenius with differential: nontrivial l3'
    {
        auto L = tensor_frobenius(su2<R>(), true);
        Metric<R> g = Metric<R>::identity(L);
        std::vector<R> A(L.total, R(0));
        auto H = hodge_data(L, A, g);
        auto rand_h = [&](int deg) {
            std::vector<R> c(H.h_total, R(0));
            for (int j = 0; j < H.h_total; ++j)
                if (H.hdegree[j] == deg) c[j] = R(coe(rng));
            return H.incl.apply(c);
        };
        for (int t = 0; t < 4; ++t) {
            CHECK(l_infinity_residual(L, H, {rand_h(1), rand_h(1), rand_h(t % 2)}) == 0.0);
            CHECK(l_infinity_residual(
                      L, H, {rand_h(1), rand_h(1), rand_h(1), rand_h(t % 2 ? 1 : 0)}) == 0.0);
        }
    }
    // random potential fixtures
    for (int t = 0; t < 6; ++t) {
        auto L = random_potential_fixture<R>(rng, 3);
        auto g = random_metric(L, rng);
        std::vector<R> A(L.total, R(0));
        auto H = hodge_data(L, A, g);
        if (H.h_total == 0) continue;
        auto rand_h = [&]() {
            std::vector<R> c(H.h_total, R(0));
            for (int j = 0; j < H.h_total; ++j) c[j] = R(coe(rng));
            return H.incl.apply(c);
        };
        CHECK(l_infinity_residual(L, H, {rand_h(), rand_h(), rand_h()}) == 0.0);
        CHECK(l_infinity_residual(L, H, {rand_h(), rand_h(), rand_h(), rand_h()}) == 0.0);
    }
}

TEST_CASE("classification: f_zero smooth+irreducible, f_sym obstructed, torus reducible") {
    auto LZ = f_zero<R>();
    std::vector<R> A0(LZ.total, R(0));
    auto pc = classify_point(LZ, A0, Metric<R>::identity(LZ));
    CHECK(pc.irreducible);
    CHECK(pc.smooth_up_to_n);

    auto LS = f_sym<R>();
    std::vector<R> As(LS.total, R(0));
    auto pcs = classify_point(LS, As, Metric<R>::identity(LS));
    CHECK(pcs.irreducible);
    CHECK(!pcs.smooth_up_to_n);

    auto LT = tensor_frobenius(su2<R>(), false);
    std::vector<R> At(LT.total, R(0));
    auto pct = classify_point(LT, At, Metric<R>::identity(LT), 2);
    CHECK(!pct.irreducible);
}

TEST_CASE("mexhat circle points are smooth and irreducible") {
    auto L = mexhat<double>();
    Metric<double> g = Metric<double>::identity(L);
    for (double th : {0.15, 1.2, 4.0}) {
        auto A = mexhat_circle_point(MexhatParams{}, th);
        auto pc = classify_point(L, A, g, 4, 1e-10);
        CHECK(pc.irreducible);
        CHECK(pc.smooth_up_to_n);
    }
}

TEST_CASE("exponential map basics") {
    // a = 0 -> A exactly
    auto L = mexhat<double>();
    Metric<double> g = Metric<double>::identity(L);
    auto A = mexhat_circle_point(MexhatParams{}, 0.6);
    auto H = hodge_data(L, A, g);
    std::vector<double> zero(H.h_total, 0.0);
    auto phi0 = exponential_map(L, H, A, zero, 4);
    for (int b = 0; b < L.total; ++b) CHECK(phi0[b] == A[b]);

    // f_zero: phi = A + i(a), exact MC solution
    auto LZ = f_zero<double>();
    std::vector<double> AZ(LZ.total, 0.0);
    auto HZ = hodge_data(LZ, AZ, Metric<double>::identity(LZ));
    std::vector<double> a(HZ.h_total, 0.0);
    a[0] = 0.3;
    a[2] = -1.1;
    auto phi = exponential_map(LZ, HZ, AZ, a, 4);
    auto ia = HZ.incl.apply(a);
    for (int b = 0; b < LZ.total; ++b) CHECK(phi[b] == doctest::Approx(AZ[b] + ia[b]));
    CHECK(mc_residual(LZ, phi) < 1e-14);
}

TEST_CASE("exponential map truncation residual scales like |a|^{n_max+1}") {
    auto L = mexhat<double>();
    Metric<double> g = Metric<double>::identity(L);
    auto A = mexhat_circle_point(MexhatParams{}, 0.0);
    auto H = hodge_data(L, A, g);
    REQUIRE(H.hdims[1] == 1);
    // The circle's reflection symmetry kills odd layers of the chart, so the
    // exponent is cleanly measurable at odd truncation orders.
    for (int nmax : {3, 5}) {
        double t1 = 0.2, t2 = 0.1;
        std::vector<double> c1(H.h_total, 0.0), c2(H.h_total, 0.0);
        for (int j = 0; j < H.h_total; ++j)
            if (H.hdegree[j] == 1) {
                c1[j] = t1;
                c2[j] = t2;
            }
        double r1 = mc_residual(L, exponential_map(L, H, A, c1, nmax));
        double r2 = mc_residual(L, exponential_map(L, H, A, c2, nmax));
        CHECK(r1 > 1e-14);
        double measured = std::log2(r1 / r2);
        CHECK(measured == doctest::Approx(nmax + 1).epsilon(0.12));
    }
}

TEST_CASE("exponential map of a smooth point is flat to truncation order") {
    // on the mexhat circle, summing enough orders tracks the circle itself
    auto L = mexhat<double>();
    Metric<double> g = Metric<double>::identity(L);
    auto A = mexhat_circle_point(MexhatParams{}, 0.9);
    auto H = hodge_data(L, A, g);
    std::vector<double> c(H.h_total, 0.0);
    for (int j = 0; j < H.h_total; ++j)
        if (H.hdegree[j] == 1) c[j] = 0.05;
    double r = mc_residual(L, exponential_map(L, H, A, c, 6));
    CHECK(r < 1e-9);
}

TEST_CASE("torsion: two-term fixture gives 4, f_zero gives 1, direct sum multiplies") {
    auto L2 = two_term<double>();
    Metric<double> g2 = Metric<double>::identity(L2);
    std::vector<double> A2(L2.total, 0.0);
    auto H2 = hodge_data(L2, A2, g2);
    auto tv = torsion(L2, H2, g2, {});
    CHECK(tv.tau == doctest::Approx(4.0));

    auto LZ = f_zero<double>();
    std::mt19937_64 rng(51);
    for (int t = 0; t < 3; ++t) {
        auto gz = random_metric(LZ, rng);
        std::vector<double> AZ(LZ.total, 0.0);
        auto HZ = hodge_data(LZ, AZ, gz);
        std::vector<std::vector<double>> frames;
        for (int j = 0; j < HZ.h_total; ++j) {
            std::vector<double> e(LZ.total, 0.0);
            e[j] = 1.0;  // fixed basis vectors as closed representatives
            frames.push_back(e);
        }
        auto tz = torsion(LZ, HZ, gz, frames);
        CHECK(tz.tau == doctest::Approx(1.0).epsilon(1e-10));
    }

    auto LD = direct_sum(two_term<double>(), two_term<double>());
    Metric<double> gd = Metric<double>::identity(LD);
    std::vector<double> AD(LD.total, 0.0);
    auto HD = hodge_data(LD, AD, gd);
    CHECK(torsion(LD, HD, gd, {}).tau == doctest::Approx(16.0));
}

TEST_CASE("torsion is metric independent for fixed bases") {
    std::mt19937_64 rng(61);
    auto L = mexhat<double>();
    auto A = mexhat_circle_point(MexhatParams{}, 0.4);
    Metric<double> g0 = Metric<double>::identity(L);
    auto H0 = hodge_data(L, A, g0);
    // fixed closed representatives of the cohomology basis
    std::vector<std::vector<double>> frames;
    for (int j = 0; j < H0.h_total; ++j) {
        std::vector<double> v(L.total);
        for (int b = 0; b < L.total; ++b) v[b] = H0.incl(b, j);
        frames.push_back(v);
    }
    double tau0 = torsion(L, H0, g0, frames).tau;
    CHECK(tau0 > 0);
    for (int t = 0; t < 50; ++t) {
        auto g = random_metric(L, rng, 1);
        auto H = hodge_data(L, A, g);
        double tau = torsion(L, H, g, frames).tau;
        CHECK(std::fabs(tau - tau0) / tau0 < 1e-10);
    }
}

TEST_CASE("exponential map equivariance under a fixture symmetry") {
    // mexhat is invariant under rotations in the (u,v) plane; rotate by 90
    // degrees: permutation-like orthogonal map sigma
    auto L = mexhat<double>();
    Metric<double> g = Metric<double>::identity(L);
    auto A = mexhat_circle_point(MexhatParams{}, 0.3);
    auto H = hodge_data(L, A, g);
    // sigma acts on degree 1 and degree 2 blocks identically
    auto rot = [&](const std::vector<double>& x) {
        std::vector<double> y(x);
        y[0] = -x[1];
        y[1] = x[0];
        y[3] = -x[4];
        y[4] = x[3];
        return y;
    };
    auto As = rot(A);
    auto Hs = hodge_data(L, As, g);
    std::vector<double> c(H.h_total, 0.0);
    for (int j = 0; j < H.h_total; ++j)
        if (H.hdegree[j] == 1) c[j] = 0.07;
    auto phi = exponential_map(L, H, A, c, 5);
    // transport the tangent coordinate through the rotation
    auto ia = H.incl.apply(c);
    auto ia_rot = rot(ia);
    auto cs = Hs.proj.apply(ia_rot);
    auto phis = exponential_map(L, Hs, As, cs, 5);
    auto phi_rot = rot(phi);
    for (int b = 0; b < L.total; ++b) CHECK(phis[b] == doctest::Approx(phi_rot[b]).epsilon(1e-12));
}
