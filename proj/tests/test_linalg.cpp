#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "csmoduli/linalg.hpp"

using namespace csm;

TEST_CASE("exact inverse and kernel") {
    Mat<Rational> m(3, 3);
    int vals[3][3] = {{2, 1, 0}, {1, 3, 1}, {0, 1, 2}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = Rational(vals[i][j]);
    Mat<Rational> id = inverse(m) * m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(id(i, j) == (i == j ? Rational(1) : Rational(0)));

    Mat<Rational> s(2, 3);
    s(0, 0) = Rational(1);
    s(0, 1) = Rational(2);
    s(0, 2) = Rational(3);
    s(1, 0) = Rational(2);
    s(1, 1) = Rational(4);
    s(1, 2) = Rational(6);
    Mat<Rational> k = kernel_basis(s);
    CHECK(k.cols() == 2);
    Mat<Rational> z = s * k;
    CHECK(z.is_zero_exact());
}

TEST_CASE("float inverse on random well-conditioned matrices") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-1, 1);
    for (int t = 0; t < 50; ++t) {
        size_t n = 1 + t % 7;
        Mat<double> m(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) m(i, j) = d(rng) + (i == j ? 3.0 : 0.0);
        Mat<double> e = inverse(m) * m - Mat<double>::identity(n);
        CHECK(e.max_abs() < 1e-12);
    }
}

TEST_CASE("jacobi eigensolver recovers spectrum") {
    Mat<double> a(3, 3);
    double vals[3][3] = {{4, 1, 0}, {1, 3, 1}, {0, 1, 2}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = vals[i][j];
    std::vector<double> ev;
    Mat<double> vec;
    symmetric_eigen(a, ev, vec);
    // residual A v - lambda v
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 3; ++i) {
            double r = -ev[k] * vec(i, k);
            for (int j = 0; j < 3; ++j) r += a(i, j) * vec(j, k);
            CHECK(std::fabs(r) < 1e-12);
        }
    }
    CHECK(ev[0] < ev[1]);
    CHECK(ev[1] < ev[2]);
    double tr = ev[0] + ev[1] + ev[2];
    CHECK(tr == doctest::Approx(9.0));
}

TEST_CASE("cholesky detects definiteness") {
    Mat<double> g(2, 2);
    g(0, 0) = 2;
    g(0, 1) = g(1, 0) = 1;
    g(1, 1) = 2;
    Mat<double> l;
    CHECK(cholesky(g, l));
    g(1, 1) = -1;
    CHECK(!cholesky(g, l));

    Mat<Rational> gr(2, 2);
    gr(0, 0) = Rational(2);
    gr(0, 1) = gr(1, 0) = Rational(1);
    gr(1, 1) = Rational(2);
    CHECK(positive_definite(gr));
    gr(1, 1) = Rational(-1);
    CHECK(!positive_definite(gr));
}

TEST_CASE("exact det") {
    Mat<Rational> m(2, 2);
    m(0, 0) = Rational(1, 2);
    m(0, 1) = Rational(1, 3);
    m(1, 0) = Rational(1, 5);
    m(1, 1) = Rational(1, 7);
    CHECK(det(m) == Rational(1, 14) - Rational(1, 15));
}
