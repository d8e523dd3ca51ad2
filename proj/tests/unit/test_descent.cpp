#include <doctest.h>

#include <optional>

#include "orbitlab/descent.hpp"

using namespace orbitlab;

namespace {

struct Pt {
    bool inf = false;
    mpq_class x, y;
};

// chord and tangent on y^2 = x^3 + a x^2 + b x + c
Pt add(const Pt& P, const Pt& Q, const mpq_class& a, const mpq_class& b) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    mpq_class lam;
    if (P.x == Q.x) {
        if (P.y + Q.y == 0) return {true, 0, 0};
        lam = (3 * P.x * P.x + 2 * a * P.x + b) / (2 * P.y);
    } else {
        lam = (Q.y - P.y) / (Q.x - P.x);
    }
    mpq_class x3 = lam * lam - a - P.x - Q.x;
    mpq_class y3 = lam * (P.x - x3) - P.y;
    return {false, x3, y3};
}

std::optional<SquareClass> cls(const EtaleAlgebra& L, const Pt& P) {
    if (P.inf) return std::nullopt;
    return descent_class(L, CurvePoint::affine(Scalar(L.base, P.x), Scalar(L.base, P.y)), CurveKind::C1);
}

}  // namespace

TEST_CASE("descent map is a homomorphism on chord-tangent sums") {
    Base q = Base::rationals();
    Invariants c = Invariants::from_ints(q, {2, -3}, 3);
    mpq_class a = 2, b = -3;
    Pt P{false, 0, 3};
    std::vector<Pt> pts{P};
    for (int k = 0; k < 3; ++k) pts.push_back(add(pts.back(), P, a, b));
    for (long p : {5L, 7L, 11L}) {
        EtaleAlgebra L = local_algebra(c, Place::padic(p));
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i; j < pts.size(); ++j) {
                Pt R = add(pts[i], pts[j], a, b);
                auto ci = cls(L, pts[i]), cj = cls(L, pts[j]), cr = cls(L, R);
                if (!ci || !cj || !cr) continue;
                CHECK(*ci * *cj == *cr);
            }
        Pt D = add(P, P, a, b);
        CHECK(cls(L, D)->trivial());
    }
}

TEST_CASE("points on the curve") {
    Base q = Base::rationals();
    Invariants c = Invariants::from_ints(q, {2, -3}, 3);
    MarkedCurve C1{c, CurveKind::C1};
    CHECK(on_curve(C1, CurvePoint::affine(Scalar(q, 0L), Scalar(q, 3L))));
    CHECK_FALSE(on_curve(C1, CurvePoint::affine(Scalar(q, 1L), Scalar(q, 1L))));
    CHECK(on_curve(C1, CurvePoint::marked()));
    MarkedCurve C2{c, CurveKind::C2};
    CHECK(C2.rhs() == Poly::x(q) * c.f());
    CHECK(C1.genus() == 1);
}

TEST_CASE("marked divisor maps to minus gamma with square norm") {
    for (Place pl : {Place{Place::Finite, 5, 0}, Place::padic(3), Place::real()}) {
        Base b = pl.base();
        Invariants c = Invariants::from_ints(b, {1, -7}, 2);
        EtaleAlgebra L = local_algebra(c, pl);
        Poly d = descent_element(L, CurvePoint::marked(), CurveKind::C1);
        CHECK(d == L.reduce(-L.gamma()));
        CHECK(L.norm(d) == c.e * c.e);
    }
}

TEST_CASE("real images have the expected size") {
    Base q = Base::rationals();
    Poly f = Poly::from_ints(q, {1, 1}) * Poly::from_ints(q, {4, 1}) * Poly::from_ints(q, {9, 1});
    Invariants c = Invariants::from_f(f, Scalar(q, 6L));
    CHECK(two_torsion_size(c, Place::real()) == 4);
    LocalImage I = local_image(c, Place::real(), CurveKind::C1);
    CHECK(I.complete);
    CHECK(static_cast<long>(I.classes.size()) == 2);
    CHECK(I.target == 2);
}

TEST_CASE("good reduction images are unramified") {
    Base q = Base::rationals();
    Invariants c = Invariants::from_ints(q, {0, -1}, 1);
    for (long p : {3L, 5L, 7L, 11L}) {
        REQUIRE(good_reduction(c, p, CurveKind::C1));
        LocalImage I = local_image(c, Place::padic(p), CurveKind::C1);
        CHECK(I.complete);
        CHECK(I.classes == unramified_subgroup(local_algebra(c, Place::padic(p))));
        CHECK(static_cast<long>(I.classes.size()) == two_torsion_size(c, Place::padic(p)));
        LocalImage S = sampled_image(c, Place::padic(p), CurveKind::C1);
        CHECK(S.complete);
        CHECK(S.classes == I.classes);
    }
    CHECK_FALSE(good_reduction(c, 23, CurveKind::C1));
}

TEST_CASE("images are subgroups") {
    Base q = Base::rationals();
    Poly f = Poly::from_ints(q, {1, 1}) * Poly::from_ints(q, {4, 1}) * Poly::from_ints(q, {9, 1});
    Invariants c = Invariants::from_f(f, Scalar(q, 6L));
    LocalImage I = local_image(c, Place::padic(2), CurveKind::C1);
    for (const auto& x : I.classes)
        for (const auto& y : I.classes) CHECK(I.classes.count(x * y) == 1);
    CHECK(I.target == 8);
}

TEST_CASE("genus two images at two reach their size") {
    Base q = Base::rationals();
    Poly f = Poly::constant(Scalar(q, 1L));
    for (long r : {1L, 2L, 3L, 4L, 6L}) f = f * Poly::from_ints(q, {r, 1});
    Invariants c = Invariants::from_f(f, Scalar(q, 12L));
    LocalImage I = sampled_image(c, Place::padic(2), CurveKind::C1);
    CHECK(I.target == 64);
    CHECK(I.complete);
    for (const auto& x : I.classes) CHECK(x.norm_trivial());
}

TEST_CASE("divergent family members have small joint images") {
    Invariants d = diverges_member(5, 1, 4, 1);
    CHECK(d.f()[0] == d.e * d.e);
    LocalImage s = sel12_local(d, Place::padic(5));
    LocalImage j1 = local_image(d, Place::padic(5), CurveKind::C1);
    CHECK(s.classes.size() < j1.classes.size());
    for (const auto& x : s.classes) CHECK(j1.classes.count(x) == 1);
}
