#include <doctest.h>

#include <random>

#include "orbitlab/quadforms.hpp"

using namespace orbitlab;

namespace {

Mat diag(const Base& b, const std::vector<long>& d) {
    int n = static_cast<int>(d.size());
    Mat M(b, n, n);
    for (int i = 0; i < n; ++i) M(i, i) = Scalar(b, d[i]);
    return M;
}

bool brute_isotropic_fp(const Mat& G) {
    long p = G.base().p;
    int n = G.rows();
    long total = 1;
    for (int i = 0; i < n; ++i) total *= p;
    for (long code = 1; code < total; ++code) {
        Mat v(G.base(), n, 1);
        long c = code;
        for (int i = 0; i < n; ++i, c /= p) v(i, 0) = Scalar(G.base(), c % p);
        if (bilinear(G, v, v).is_zero()) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("ternary Hasse check against the residue criterion") {
    for (long p : {3L, 5L, 7L, 11L}) {
        for (long u1 = 1; u1 < p; ++u1)
            for (long u2 = 1; u2 < p; ++u2) {
                long w = ((-u1 * u2) % p + p) % p;
                Mat G = diag(Base::rationals(), {w, p * u1, p * u2});
                bool expect = legendre(-u1 * u2, p) == 1;
                CHECK(is_split(G, Place::padic(p)) == expect);
            }
    }
}

TEST_CASE("diagonalization is a congruence") {
    std::mt19937 rng(21);
    for (Base b : {Base::rationals(), Base::fp(11)}) {
        for (int t = 0; t < 15; ++t) {
            Mat S(b, 4, 4);
            for (int i = 0; i < 4; ++i)
                for (int j = i; j < 4; ++j) S(i, j) = S(j, i) = Scalar(b, static_cast<long>(rng() % 9) - 4);
            if (det(S).is_zero()) continue;
            auto D = diagonalize(S);
            Mat R = D.P.t() * S * D.P;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) CHECK(R(i, j) == (i == j ? D.d[i] : Scalar(b, 0L)));
        }
    }
}

TEST_CASE("split forms over F_p agree with exhaustive isotropy") {
    for (long p : {3L, 5L, 7L}) {
        Base b = Base::fp(p);
        for (long a = 1; a < p; ++a)
            for (long c = 1; c < p; ++c) {
                Mat G = diag(b, {a, c});
                CHECK(is_split(G, Place::of(b)) == brute_isotropic_fp(G));
            }
    }
}

TEST_CASE("to_standard maps split forms onto the antidiagonal") {
    for (Base b : {Base::rationals(), Base::fp(7), Base::qp(5, 20)}) {
        for (auto d : std::vector<std::vector<long>>{{1, -1, 1}, {2, -2, 3, -3}, {1, -1, 1, -1, 1}}) {
            Mat G = diag(b, d);
            Mat P = to_standard(G);
            CHECK(P.t() * G * P == Mat::antidiag(b, G.rows()));
        }
    }
}

TEST_CASE("maximal isotropic subspaces have half dimension") {
    Base b = Base::rationals();
    Mat G = diag(b, {1, -1, 2, -2, 1});
    Mat X = max_isotropic(G);
    CHECK(X.cols() == 2);
    CHECK((X.t() * G * X).is_zero());
    Mat P = complete_from_isotropic(G, X);
    CHECK(P.t() * G * P == Mat::antidiag(b, 5));
}

TEST_CASE("real and global splitting") {
    Base b = Base::rationals();
    CHECK(is_split(diag(b, {1, -1, 1}), Place::real()));
    CHECK_FALSE(is_split(diag(b, {1, 1, 1}), Place::real()));
    CHECK(is_split(diag(b, {1, -1, 3, -3}), Place::global()));
    CHECK_FALSE(is_split(diag(b, {1, 1, -3}), Place::padic(3)));
    CHECK_FALSE(is_split(diag(b, {1, 1, -3}), Place::global()));
}

TEST_CASE("Hasse invariant of a diagonal form") {
    CHECK(hasse_of_diagonal({-1, -1}, Place::real()) == -1);
    CHECK(hasse_of_diagonal({3, 3}, Place::padic(3)) == hilbert_q(3, 3, 3));
    CHECK(hasse_of_diagonal({1, 2, 3}, Place::padic(3)) == hilbert_q(1, 2, 3) * hilbert_q(1, 3, 3) * hilbert_q(2, 3, 3));
}
