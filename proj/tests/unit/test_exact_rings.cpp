#include <doctest.h>

#include <random>
#include <set>

#include "orbitlab/etale.hpp"
#include "orbitlab/factor.hpp"
#include "orbitlab/matrix.hpp"
#include "orbitlab/poly.hpp"

using namespace orbitlab;

namespace {

Scalar leibniz(const Mat& A) {
    int n = A.rows();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    Scalar total(A.base(), 0L);
    do {
        int inv = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inv;
        Scalar term(A.base(), inv % 2 ? -1L : 1L);
        for (int i = 0; i < n; ++i) term *= A(i, perm[i]);
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

long count_roots_mod(const std::vector<long>& asc, long p) {
    long roots = 0;
    for (long x = 0; x < p; ++x) {
        long v = 0;
        for (int i = static_cast<int>(asc.size()) - 1; i >= 0; --i) v = ((v * x + asc[i]) % p + p) % p;
        if (v == 0) ++roots;
    }
    return roots;
}

}  // namespace

TEST_CASE("finite field inverses agree with exhaustive search") {
    for (long p : {2L, 3L, 7L, 101L}) {
        Base b = Base::fp(p);
        for (long a = 1; a < p; ++a) {
            long brute = 0;
            for (long x = 1; x < p; ++x)
                if (a * x % p == 1) brute = x;
            CHECK(Scalar(b, a).inv().residue() == brute);
        }
    }
}

TEST_CASE("legendre symbol matches the set of squares") {
    for (long p : {3L, 5L, 13L, 31L}) {
        std::vector<int> sq(p, 0);
        for (long x = 1; x < p; ++x) sq[x * x % p] = 1;
        for (long a = 1; a < p; ++a) CHECK(legendre(a, p) == (sq[a] ? 1 : -1));
    }
}

TEST_CASE("p-adic arithmetic tracks valuation and precision") {
    Base b = Base::qp(5, 10);
    Scalar x(b, mpq_class(50)), y(b, mpq_class(1, 25));
    CHECK(x.val() == 2);
    CHECK(y.val() == -2);
    CHECK((x * y).val() == 0);
    CHECK((x * y) == Scalar(b, 2L));
    Scalar z = Scalar(b, 1L) + Scalar(b, mpq_class(ipow(5, 12)));
    CHECK(z == Scalar(b, 1L));
    mpz_class r = padic_sqrt_unit(11, 5, 10);
    CHECK((r * r - 11) % ipow(5, 10) == 0);
    mpz_class r2 = padic_sqrt_unit(17, 2, 12);
    CHECK((r2 * r2 - 17) % ipow(2, 12) == 0);
}

TEST_CASE("determinant agrees with the Leibniz expansion") {
    std::mt19937 rng(11);
    for (Base b : {Base::rationals(), Base::fp(7)}) {
        for (int t = 0; t < 20; ++t) {
            int n = 1 + t % 5;
            std::vector<long> v(n * n);
            for (auto& x : v) x = static_cast<long>(rng() % 11) - 5;
            Mat A = Mat::from_ints(b, n, n, v);
            CHECK(det(A) == leibniz(A));
        }
    }
}

TEST_CASE("inverse, kernel and rank are consistent") {
    std::mt19937 rng(3);
    Base b = Base::rationals();
    for (int t = 0; t < 20; ++t) {
        std::vector<long> v(16);
        for (auto& x : v) x = static_cast<long>(rng() % 7) - 3;
        Mat A = Mat::from_ints(b, 4, 4, v);
        Mat K = kernel(A);
        CHECK((A * K).is_zero());
        CHECK(rank(A) + K.cols() == 4);
        if (!det(A).is_zero()) CHECK(A * inverse(A) == Mat::identity(b, 4));
    }
}

TEST_CASE("characteristic polynomial annihilates its matrix") {
    std::mt19937 rng(5);
    Base b = Base::rationals();
    for (int t = 0; t < 10; ++t) {
        std::vector<long> v(25);
        for (auto& x : v) x = static_cast<long>(rng() % 9) - 4;
        Mat A = Mat::from_ints(b, 5, 5, v);
        Poly c = charpoly(A);
        CHECK(c.deg() == 5);
        Mat acc(b, 5, 5), pw = Mat::identity(b, 5);
        for (int i = 0; i <= c.deg(); ++i) {
            acc = acc + c[i] * pw;
            pw = pw * A;
        }
        CHECK(acc.is_zero());
        CHECK(c[0] == (det(A) * Scalar(b, -1L)));
    }
}

TEST_CASE("polynomial division identity and cubic discriminant formula") {
    std::mt19937 rng(9);
    Base b = Base::rationals();
    for (int t = 0; t < 20; ++t) {
        std::vector<long> a(6), d(3);
        for (auto& x : a) x = static_cast<long>(rng() % 9) - 4;
        for (auto& x : d) x = static_cast<long>(rng() % 9) - 4;
        d.back() = 1 + static_cast<long>(rng() % 3);
        Poly A = Poly::from_ints(b, a), D = Poly::from_ints(b, d);
        auto [q, r] = divmod(A, D);
        CHECK(q * D + r == A);
        CHECK(r.deg() < D.deg());
    }
    for (int t = 0; t < 20; ++t) {
        long p = static_cast<long>(rng() % 11) - 5, q = static_cast<long>(rng() % 11) - 5;
        Poly f = Poly::from_ints(b, {q, p, 0, 1});
        CHECK(poly_discriminant(f) == Scalar(b, -4 * p * p * p - 27 * q * q));
    }
}

TEST_CASE("factorization over F_p matches root counts and degrees") {
    std::mt19937 rng(13);
    for (long p : {3L, 5L, 11L}) {
        for (int t = 0; t < 30; ++t) {
            std::vector<long> a = {static_cast<long>(rng() % p), static_cast<long>(rng() % p), static_cast<long>(rng() % p),
                                   static_cast<long>(rng() % p), 1};
            Poly f = Poly::from_ints(Base::fp(p), a);
            auto fac = factor_fp(f);
            Poly prod = Poly::constant(Scalar(Base::fp(p), 1L));
            long linear = 0;
            for (const auto& [g, e] : fac) {
                for (int k = 0; k < e; ++k) prod = prod * g;
                if (g.deg() == 1) ++linear;
            }
            CHECK(prod == f);
            CHECK(linear == count_roots_mod(a, p));
        }
    }
}

TEST_CASE("factorization over Q recovers planted factors") {
    Base b = Base::rationals();
    Poly g1 = Poly::from_ints(b, {2, 0, 1}), g2 = Poly::from_ints(b, {-3, 1}), g3 = Poly::from_ints(b, {1, 1, 0, 1});
    auto fac = factor_q(g1 * g2 * g3);
    CHECK(fac.size() == 3);
    std::vector<int> degs;
    for (const auto& [g, e] : fac) degs.push_back(g.deg());
    std::sort(degs.begin(), degs.end());
    CHECK(degs == std::vector<int>{1, 2, 3});
}

TEST_CASE("real root isolation counts sign changes") {
    Base b = Base::rationals();
    Poly f = Poly::from_ints(b, {-6, 11, -6, 1});
    auto roots = real_roots(f);
    REQUIRE(roots.size() == 3);
    for (const auto& r : roots) CHECK(sign_at(f, r.lo) * sign_at(f, r.hi) < 0);
    CHECK(real_roots(Poly::from_ints(b, {1, 0, 1})).empty());
}

TEST_CASE("square classes are multiplicative") {
    std::mt19937 rng(17);
    for (Base b : {Base::fp(7), Base::qp(5, 20)}) {
        Poly f = b.ring == Ring::Fp ? Poly::from_ints(b, {1, 2, 0, 1}) : Poly::from_ints(b, {-6, 11, -6, 1});
        EtaleAlgebra L = etale_build(f);
        for (int t = 0; t < 20; ++t) {
            Poly x = L.elem({static_cast<long>(rng() % 7) + 1, static_cast<long>(rng() % 5), 0});
            Poly y = L.elem({static_cast<long>(rng() % 5) + 1, 0, static_cast<long>(rng() % 3)});
            if (L.norm(x).is_zero() || L.norm(y).is_zero()) continue;
            CHECK(square_class(L, L.mul(x, y)) == square_class(L, x) * square_class(L, y));
            CHECK(square_class(L, L.mul(x, x)).trivial());
        }
    }
}

TEST_CASE("norm and trace agree with the multiplication matrix") {
    Base b = Base::rationals();
    EtaleAlgebra L = etale_build(Poly::from_ints(b, {3, -1, 0, 1}));
    Poly a = L.elem({1, 2, -1});
    Mat M = L.mult_matrix(a);
    CHECK(L.norm(a) == det(M));
    CHECK(L.trace(a) == trace(M));
}

TEST_CASE("Hilbert symbol is symmetric and satisfies the product formula") {
    std::vector<mpq_class> vals = {-1, 2, 3, -5, 6, 7, -10, 15};
    for (const auto& a : vals)
        for (const auto& c : vals) {
            int prod = hilbert_q(a, c, 0);
            for (long p : {2L, 3L, 5L, 7L}) {
                CHECK(hilbert_q(a, c, p) == hilbert_q(c, a, p));
                prod *= hilbert_q(a, c, p);
            }
            CHECK(prod == 1);
        }
}

namespace {

fqx::PX random_px(const fqx::Field& F, int d, std::mt19937_64& rng) {
    fqx::PX a(static_cast<size_t>(d) + 1);
    for (auto& c : a) {
        c.assign(static_cast<size_t>(F.k()), 0);
        for (auto& x : c) x = static_cast<long>(rng() % static_cast<uint64_t>(F.p));
        fpx::trim(c);
    }
    a.back() = fqx::E{1};
    return a;
}

std::vector<fqx::E> field_elements(const fqx::Field& F) {
    std::vector<fqx::E> out;
    long q = F.q().get_si();
    for (long idx = 0; idx < q; ++idx) {
        fqx::E c;
        for (long t = idx; t > 0; t /= F.p) c.push_back(t % F.p);
        fpx::trim(c);
        out.push_back(c);
    }
    return out;
}

bool has_factor_of_degree_at_most(const fqx::Field& F, const fqx::PX& f, int dmax) {
    auto els = field_elements(F);
    for (int d = 1; d <= dmax; ++d) {
        std::vector<size_t> idx(static_cast<size_t>(d), 0);
        while (true) {
            fqx::PX g;
            for (size_t i : idx) g.push_back(els[i]);
            g.push_back(fqx::E{1});
            if (fqx::mod(F, f, g).empty()) return true;
            size_t pos = 0;
            while (pos < idx.size() && ++idx[pos] == els.size()) idx[pos++] = 0;
            if (pos == idx.size()) break;
        }
    }
    return false;
}

Poly int_poly(const std::vector<long>& c) { return Poly::from_ints(Base::rationals(), c); }

Poly phi_power_shift(const std::vector<long>& phi, int k, long add) {
    Poly ph = int_poly(phi), r = int_poly({1});
    for (int i = 0; i < k; ++i) r = r * ph;
    return r + int_poly({add});
}

}  // namespace

TEST_CASE("factorization over F_q reconstructs the input with irreducible factors") {
    std::vector<fqx::Field> fields{{3, {1, 0, 1}}, {5, {3, 0, 1}}, {2, {1, 1, 1}}};
    std::mt19937_64 rng(11);
    for (const auto& F : fields) {
        for (int trial = 0; trial < 40; ++trial) {
            int d = 1 + static_cast<int>(rng() % 5);
            fqx::PX f = random_px(F, d, rng);
            if (trial % 4 == 0) f = fqx::mul(F, f, f);
            auto fac = fqx::factor(F, f);
            fqx::PX prod{fqx::E{1}};
            for (auto& [g, m] : fac) {
                for (int i = 0; i < m; ++i) prod = fqx::mul(F, prod, g);
                CHECK_FALSE(has_factor_of_degree_at_most(F, g, fqx::deg(g) / 2));
            }
            CHECK(prod == f);
        }
    }
}

TEST_CASE("p-adic factorization recovers planted factors over ramified and unramified blocks") {
    struct Case {
        long p;
        std::vector<Poly> planted;
        std::vector<std::pair<int, int>> ef;
    };
    std::vector<long> phi7{1, 0, 1}, phi3{1, 0, 1};
    Poly shifted = phi_power_shift({-20, 0, 1}, 2, -343);
    std::vector<Case> cases{
        {7, {phi_power_shift(phi7, 2, 7), phi_power_shift(phi7, 1, 49)}, {{2, 2}, {1, 2}}},
        {3, {phi_power_shift(phi3, 2, 3), phi_power_shift(phi3, 1, 9)}, {{2, 2}, {1, 2}}},
        {7, {shifted}, {{2, 2}}},
        {7, {int_poly({-7, 0, 1}), int_poly({-1029, 0, 1})}, {{2, 1}, {2, 1}}},
        {7, {int_poly({-7, 0, 1}), int_poly({-21, 0, 1})}, {{2, 1}, {2, 1}}},
        {5, {int_poly({-5, 0, 1}), phi_power_shift({2, 0, 1}, 2, 5)}, {{2, 1}, {2, 2}}},
    };
    for (const auto& c : cases) {
        Poly G = int_poly({1});
        for (const auto& g : c.planted) G = G * g;
        Base qb = Base::qp(c.p, 30);
        auto fac = factor_qp(G.to_base(qb), c.p, 30);
        REQUIRE(fac.size() == c.planted.size());
        for (size_t i = 0; i < c.planted.size(); ++i) {
            Poly want = c.planted[i].to_base(qb);
            int hits = 0;
            for (const auto& pf : fac)
                if (pf.g.deg() == want.deg() && pf.g == want) {
                    ++hits;
                    CHECK(pf.e == c.ef[i].first);
                    CHECK(pf.f == c.ef[i].second);
                }
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("square classes in a ramified quartic follow the residue field") {
    long p = 7;
    Base qb = Base::qp(p, 30);
    EtaleAlgebra L = etale_build(phi_power_shift({1, 0, 1}, 2, 7).to_base(qb));
    REQUIRE(L.factors.size() == 1);
    std::set<std::pair<long, long>> squares;
    for (long a = 0; a < p; ++a)
        for (long b = 0; b < p; ++b) squares.insert({((a * a - b * b) % p + p) % p, (2 * a * b) % p});
    Poly phi = L.elem({1, 0, 1});
    for (long a = 0; a < p; ++a)
        for (long b = 0; b < p; ++b) {
            if (a == 0 && b == 0) continue;
            Poly u = L.elem({a, b});
            int bit = squares.count({a, b}) ? 0 : 1;
            SquareClass su = square_class(L, u);
            CHECK(su.labels[0] == std::vector<int>{0, bit});
            CHECK(square_class(L, L.mul(u, phi)).labels[0] == std::vector<int>{1, bit});
            CHECK(square_class(L, L.mul(u, L.elem({p}))).labels[0] == std::vector<int>{0, bit});
        }
}
