#include "orbitlab/descent.hpp"

#include <random>

#include "orbitlab/orbits.hpp"

namespace orbitlab {

Poly MarkedCurve::rhs() const {
    Poly f = c.f();
    return which == CurveKind::C1 ? f : Poly::x(f.b) * f;
}

EtaleAlgebra local_algebra(const Invariants& c, const Place& pl) {
    Base b = pl.base();
    Poly f = c.f();
    if (!b.same(c.base)) f = f.to_base(b);
    return etale_build(f);
}

long two_torsion_size(const Invariants& c, const Place& pl) {
    return stabilizer_info(c, pl).order;
}

long local_mw_size(const Invariants& c, const Place& pl, CurveKind) {
    long t = two_torsion_size(c, pl);
    int g = c.n() / 2;
    switch (pl.kind) {
        case Place::Padic:
            return pl.p == 2 ? t << g : t;
        case Place::Real:
            if (t % (1L << g)) fail(Errc::internal, "real Mordell-Weil size is not integral");
            return t >> g;
        case Place::Finite:
            return t;
        case Place::Global:
            break;
    }
    fail(Errc::domain, "local size needs a local place");
}

Poly descent_element(const EtaleAlgebra& L, const CurvePoint& P, CurveKind which) {
    Poly g = L.gamma();
    if (P.kind == CurvePoint::MarkedDivisor) return L.reduce(-g);
    Scalar x0 = P.x;
    if (!x0.base().same(L.base)) x0 = Scalar(L.base, P.x.rational());
    Poly d = L.reduce(Poly::constant(x0) - g);
    if (L.norm(d).is_zero()) fail(Errc::domain, "point is a 2-torsion point: f(x0) = 0");
    if (which == CurveKind::C1) return d;
    if (x0.is_zero()) fail(Errc::domain, "point is a 2-torsion point: x0 = 0");
    return L.reduce(-(x0 * L.mul(g, d)));
}

SquareClass descent_class(const EtaleAlgebra& L, const CurvePoint& P, CurveKind which) {
    return square_class(L, descent_element(L, P, which));
}

bool on_curve(const MarkedCurve& C, const CurvePoint& P) {
    if (P.kind == CurvePoint::MarkedDivisor) return true;
    return eval(C.rhs(), P.x) == P.y * P.y;
}

bool good_reduction(const Invariants& c, long p, CurveKind which) {
    if (p == 2) return false;
    for (const auto& a : c.a)
        if (vp(a.rational(), p) < 0) return false;
    if (vp(c.e.rational(), p) < 0) return false;
    Base q = Base::rationals();
    Poly f = c.f().to_base(q);
    if (vp(poly_discriminant(f).rational(), p) > 0) return false;
    if (which == CurveKind::C2 && vp(c.e.rational(), p) > 0) return false;
    return true;
}

void close_subgroup(std::set<SquareClass>& S, const SquareClass& g) {
    if (S.count(g)) return;
    std::vector<SquareClass> cur(S.begin(), S.end());
    for (const auto& s : cur) S.insert(s * g);
}

std::set<SquareClass> unramified_subgroup(const EtaleAlgebra& L) {
    long p = L.base.p;
    if (L.base.ring != Ring::Qp || p == 2) fail(Errc::domain, "unramified subgroup needs an odd p-adic base");
    std::set<SquareClass> out;
    size_t r = L.factors.size();
    Place pl = Place::of(L.base);
    for (long mask = 0; mask < (1L << r); ++mask) {
        if (__builtin_popcountl(mask) % 2) continue;
        SquareClass sc;
        sc.place = pl;
        for (size_t i = 0; i < r; ++i) sc.labels.push_back({0, static_cast<int>((mask >> i) & 1)});
        sc.norm = {0, 0};
        out.insert(sc);
    }
    return out;
}

namespace {

struct Sampler {
    const Invariants& c;
    const EtaleAlgebra& L;
    Place pl;
    CurveKind which;
    LocalImage& img;
    long budget;

    bool done() const { return static_cast<long>(img.classes.size()) >= img.target || img.samples >= budget; }

    void offer(const mpq_class& x0) {
        if (done()) return;
        ++img.samples;
        MarkedCurve C{c, which};
        Poly h = C.rhs().to_base(Base::rationals());
        mpq_class y2 = eval(h, Scalar(Base::rationals(), x0)).rational();
        if (y2 == 0) return;
        if (pl.kind == Place::Real) {
            if (y2 < 0) return;
        } else {
            for (int b : rational_class(y2, pl))
                if (b) return;
        }
        CurvePoint P = CurvePoint::affine(Scalar(L.base, x0), Scalar(L.base, 0L));
        close_subgroup(img.classes, descent_class(L, P, which));
    }

    // d = u(gamma) for a monic u of degree 1 or 2
    void add_element(const Poly& u) {
        Poly d = L.reduce(u);
        if (u.deg() == 1) d = L.reduce(-d);
        if (which == CurveKind::C2) d = u.deg() == 1 ? L.reduce(u[0] * L.mul(L.gamma(), d)) : L.reduce(u[0] * d);
        if (L.norm(d).is_zero()) return;
        close_subgroup(img.classes, square_class(L, d));
    }

    // divisors (u, v) with u | v^2 - h, u monic of degree <= 2 over Q_p
    void offer_mumford(const mpq_class& v1, const mpq_class& v0) {
        if (done()) return;
        ++img.samples;
        Base q = Base::rationals();
        MarkedCurve C{c, which};
        Poly v = Poly::from_rationals(q, {v0, v1});
        Poly h = v * v - C.rhs().to_base(q);
        if (h.deg() < 1 || poly_discriminant(h).is_zero()) return;
        try {
            for (const auto& fc : factor_qp(h, pl.p, L.base.prec)) {
                int deg = fc.g.deg();
                if (deg > 2) continue;
                Poly u = fc.g;
                if (!u.b.same(L.base) || u.b.prec != L.base.prec) u = u.to_base(L.base);
                add_element(u);
            }
        } catch (const Error& e) {
            if (e.code() != Errc::unsupported && e.code() != Errc::precision) throw;
        }
    }
};

mpq_class scaled_unit(std::mt19937_64& rng, long p, long span, int kmin, int kmax) {
    std::uniform_int_distribution<long> ad(-span, span);
    std::uniform_int_distribution<int> kd(kmin, kmax);
    long a = 0;
    while (a == 0) a = ad(rng);
    int k = kd(rng);
    return k >= 0 ? mpq_class(a * ipow(p, k)) : mpq_class(a, ipow(p, -k));
}

}  // namespace

LocalImage local_image(const Invariants& c, const Place& pl, CurveKind which, long budget) {
    if (!c.regular_semisimple()) fail(Errc::precondition, "invariants are not regular semisimple");
    LocalImage img;
    img.place = pl;
    img.target = local_mw_size(c, pl, which);
    EtaleAlgebra L = local_algebra(c, pl);
    if (pl.kind == Place::Finite) {
        for (const auto& nu : class_representatives(L)) img.classes.insert(square_class(L, nu));
        img.complete = static_cast<long>(img.classes.size()) == img.target;
        return img;
    }
    if (pl.kind == Place::Global) fail(Errc::domain, "local image needs a local place");
    if (pl.kind == Place::Padic && good_reduction(c, pl.p, which)) {
        img.classes = unramified_subgroup(L);
        img.complete = static_cast<long>(img.classes.size()) == img.target;
        return img;
    }
    return sampled_image(c, pl, which, budget);
}

LocalImage sampled_image(const Invariants& c, const Place& pl, CurveKind which, long budget) {
    if (!c.regular_semisimple()) fail(Errc::precondition, "invariants are not regular semisimple");
    if (pl.kind == Place::Finite || pl.kind == Place::Global) fail(Errc::domain, "sampling needs a real or p-adic place");
    LocalImage img;
    img.place = pl;
    img.target = local_mw_size(c, pl, which);
    EtaleAlgebra L = local_algebra(c, pl);
    SquareClass trivial = square_class(L, L.one());
    img.classes.insert(trivial);
    close_subgroup(img.classes, descent_class(L, CurvePoint::marked(), which));
    Sampler s{c, L, pl, which, img, budget};
    if (pl.kind == Place::Real) {
        MarkedCurve C{c, which};
        Poly h = C.rhs().to_base(Base::rationals());
        auto roots = real_roots(h);
        std::vector<mpq_class> pts;
        if (roots.empty()) {
            pts.push_back(0);
        } else {
            for (size_t i = 0; i + 1 < roots.size(); ++i) pts.push_back((roots[i].hi + roots[i + 1].lo) / 2);
            for (long k = 0; k < 12; ++k) {
                mpq_class step = mpq_class(mpz_class(1) << k);
                pts.push_back(roots.back().hi + step);
                pts.push_back(roots.front().lo - step);
            }
        }
        for (const auto& x : pts) s.offer(x);
        std::mt19937_64 rng(0x5eedULL);
        std::uniform_int_distribution<long> num(-4000, 4000), den(1, 64);
        while (!s.done()) s.offer(mpq_class(num(rng), den(rng)));
    } else {
        long p = pl.p;
        s.offer(0);
        for (int lev = 0; lev <= 12 && !s.done(); ++lev) {
            int k = lev % 2 ? (lev + 1) / 2 : -(lev / 2);
            mpq_class pk = k >= 0 ? mpq_class(ipow(p, k)) : mpq_class(1, ipow(p, -k));
            for (long a = 1; a < p * p && !s.done(); ++a) {
                if (a % p == 0) continue;
                s.offer(pk * a);
                s.offer(-pk * a);
            }
        }
        std::mt19937_64 rng(0x5eedULL ^ static_cast<unsigned long>(p));
        std::uniform_int_distribution<long> kd(-4, 6);
        long span = p * p * p * p;
        std::uniform_int_distribution<long> ad(-span, span);
        while (!s.done()) {
            long a = ad(rng);
            if (a == 0) continue;
            int k = static_cast<int>(kd(rng));
            mpq_class pk = k >= 0 ? mpq_class(ipow(p, k)) : mpq_class(1, ipow(p, -k));
            s.offer(pk * a);
        }
    }
    if (pl.kind == Place::Padic) {
        long pair_budget = img.samples + budget;
        Sampler t{c, L, pl, which, img, pair_budget};
        std::mt19937_64 rng(0x9a1fULL ^ static_cast<unsigned long>(pl.p));
        long p = pl.p;
        while (!t.done()) t.offer_mumford(scaled_unit(rng, p, p * p * p, -2, 3), scaled_unit(rng, p, p * p * p, -3, 4));
    }
    img.complete = static_cast<long>(img.classes.size()) == img.target;
    if (static_cast<long>(img.classes.size()) > img.target) fail(Errc::internal, "local image exceeds its predicted size");
    return img;
}

LocalImage sel12_local(const Invariants& c, const Place& pl, long budget) {
    LocalImage a = local_image(c, pl, CurveKind::C1, budget);
    LocalImage b = local_image(c, pl, CurveKind::C2, budget);
    LocalImage r;
    r.place = pl;
    r.target = a.target;
    r.samples = a.samples + b.samples;
    for (const auto& x : a.classes)
        if (b.classes.count(x)) r.classes.insert(x);
    r.complete = a.complete && b.complete;
    return r;
}

Invariants diverges_member(long p, long u, long v, long t) {
    Base q = Base::rationals();
    mpz_class w = -mpz_class(u) * v * t * t;
    mpz_class root0 = mpz_class(p) * p * w;
    Poly f = Poly::from_rationals(q, {mpq_class(-root0), 1}) * Poly::from_ints(q, {-u, 1}) * Poly::from_ints(q, {-v, 1});
    Scalar e(q, mpz_class(mpz_class(p) * t * u * v));
    return Invariants::from_f(f, e);
}

}  // namespace orbitlab
