#include "orbitlab/orbits.hpp"

#include <sstream>

#include "orbitlab/quadforms.hpp"

namespace orbitlab {

namespace {

Scalar one_of(const Base& b) { return Scalar(b, 1L); }

bool is_const(const Poly& a, long v) {
    Poly c = Poly::constant(Scalar(a.b, v));
    return a == c;
}

Invariants rebase(const Invariants& c, const Base& b) {
    Invariants r;
    r.base = b;
    for (const auto& x : c.a) r.a.emplace_back(b, x.rational());
    r.e = Scalar(b, c.e.rational());
    return r;
}

// columns are coordinates of gamma^{i + shift} / f'(gamma), i < m
Mat euler_block(const EtaleAlgebra& L, int shift) {
    int n = L.n(), m = n / 2;
    Poly fpinv = L.inv(L.reduce(derivative(L.f)));
    Poly g = L.gamma();
    Poly start = shift >= 0 ? L.pow(g, shift) : L.pow(L.inv(g), -shift);
    Mat X(L.base, n, m);
    Poly cur = L.mul(start, fpinv);
    for (int i = 0; i < m; ++i) {
        X.set_col(i, L.coords(cur));
        cur = L.mul(cur, g);
    }
    return X;
}

Construction build(const Invariants& c, const Poly& nu0) {
    const Base& b = c.base;
    if (!c.regular_semisimple()) fail(Errc::precondition, "invariants are not regular semisimple");
    EtaleAlgebra L = etale_build(c.f(), false);
    Poly g = L.gamma();
    Poly nu = L.reduce(nu0);
    if (L.norm(nu).is_zero()) fail(Errc::domain, "class element is not a unit");
    Poly mnug = L.reduce(-L.mul(nu, g));
    Mat G1 = trace_form(L, nu), G2 = trace_form(L, mnug);
    Construction out;
    int m = c.n() / 2;
    Scalar sgn(b, m % 2 ? -1L : 1L);
    out.disc1 = sgn * det(G1);
    out.disc2 = sgn * det(-G2);
    Mat P1, P2;
    Poly mg = L.reduce(-g);
    if (is_const(nu, 1)) {
        P1 = complete_from_isotropic(G1, euler_block(L, 0));
        P2 = complete_from_isotropic(G2, euler_block(L, 0));
    } else if (nu == mg) {
        P1 = complete_from_isotropic(G1, euler_block(L, 0));
        P2 = complete_from_isotropic(G2, euler_block(L, -1));
    } else {
        P1 = to_standard(G1);
        P2 = to_standard(G2);
    }
    Mat Mg = L.mult_matrix(g);
    Mat A = inverse(P1) * Mg * P2;
    Scalar d = det(A);
    if (d == -c.e && !(d == c.e)) {
        P2 = -P2;
        A = -A;
        d = -d;
    }
    if (!(d == c.e)) fail(Errc::internal, "pfaffian of the construction differs from e up to sign");
    out.T = lift(A);
    if (out.T.Astar != inverse(P2) * P1) fail(Errc::internal, "adjoint does not match the transported multiplication");
    Invariants got = invariants_of(out.T);
    out.e_sign = got.e == c.e ? 1 : -1;
    if (!got.equal_up_to_sign(c))
        fail(c.base.ring == Ring::Qp ? Errc::precision : Errc::internal, "invariants do not round-trip");
    out.P1 = P1;
    out.P2 = P2;
    return out;
}

Construction with_retries(const Invariants& c, const Poly& nu) {
    if (c.base.ring != Ring::Qp) return build(c, nu);
    Base b = c.base;
    for (int attempt = 0;; ++attempt) {
        try {
            return build(rebase(c, b), nu.to_base(b));
        } catch (const Error& err) {
            if (err.code() != Errc::precision || attempt == 2) throw;
            b.prec *= 2;
        }
    }
}

}  // namespace

Mat trace_form(const EtaleAlgebra& L, const Poly& nu) {
    int n = L.n();
    Poly w = L.mul(L.reduce(derivative(L.f)), L.reduce(nu));
    std::vector<Scalar> tr;
    Poly g = L.gamma(), cur = w;
    for (int k = 0; k < 2 * n - 1; ++k) {
        tr.push_back(L.trace(cur));
        cur = L.mul(cur, g);
    }
    Mat G(L.base, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = tr[i + j];
    return G;
}

Construction alpha1_construct(const Invariants& c) { return with_retries(c, Poly::constant(one_of(c.base))); }

Construction orbit_from_class(const Invariants& c, const Poly& nu) {
    if (c.base.ring == Ring::Q || c.base.ring == Ring::Qp) {
        DeltaResult d = delta_map(c, nu, c.base.ring == Ring::Q ? Place::global() : Place::of(c.base));
        if (!d.in_kernel) fail(Errc::precondition, "no rational orbit");
    }
    return with_retries(c, nu);
}

std::string StabilizerInfo::str() const {
    std::ostringstream os;
    os << "(Z/2)^" << (degrees.size() - 1) << " from factor degrees [";
    for (size_t i = 0; i < degrees.size(); ++i) os << (i ? "," : "") << degrees[i];
    os << "], order " << order;
    return os.str();
}

StabilizerInfo stabilizer_info(const Invariants& c, const Place& pl) {
    if (!c.regular_semisimple()) fail(Errc::precondition, "invariants are not regular semisimple");
    Poly f = c.f();
    Base b = pl.base();
    if (!b.same(c.base)) f = f.to_base(b);
    EtaleAlgebra L = etale_build(f);
    StabilizerInfo s;
    for (const auto& fc : L.factors) s.degrees.push_back(fc.degree);
    s.order = 1L << (s.degrees.size() - 1);
    s.order_closure = 1L << (c.n() - 1);
    return s;
}

StabilizerInfo stabilizer_info(const Invariants& c) { return stabilizer_info(c, Place::of(c.base)); }

DeltaResult delta_map(const Invariants& c, const Poly& nu, const Place& pl) {
    Poly f = c.f();
    Base b = pl.base();
    if (!b.same(c.base)) f = f.to_base(b);
    EtaleAlgebra L = etale_build(f);
    Poly v = L.reduce(nu.to_base(b));
    DeltaResult r;
    r.G1 = trace_form(L, v);
    r.G2 = trace_form(L, L.reduce(-L.mul(v, L.gamma())));
    r.split1 = is_split(r.G1, pl);
    r.split2 = is_split(r.G2, pl);
    r.in_kernel = r.split1 && r.split2;
    return r;
}

Poly recompute_class(const RepElement& T, const EtaleAlgebra& L) {
    const Base& b = T.base();
    int n = T.n();
    Mat S = T.A * T.Astar;
    Mat B = Mat::antidiag(b, n);
    Mat H(b, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H(i, j) = L.trace(L.pow(L.gamma(), i + j));
    Mat Hinv = inverse(H);
    // try basis vectors and their sums as cyclic vectors
    std::vector<Mat> trial;
    for (int i = 0; i < n; ++i) {
        Mat v(b, n, 1);
        v(i, 0) = one_of(b);
        trial.push_back(v);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) trial.push_back(trial[i] + trial[j]);
    Mat all(b, n, 1);
    for (int i = 0; i < n; ++i) all(i, 0) = Scalar(b, static_cast<long>(i + 1));
    trial.push_back(all);
    for (const auto& v : trial) {
        Mat K(b, n, n);
        Mat h(b, n, 1);
        Mat w = v;
        for (int s = 0; s < n; ++s) {
            K.set_col(s, w);
            h(s, 0) = (v.t() * B * w)(0, 0);
            w = S * w;
        }
        if (det(K).is_zero()) continue;
        Poly kappa = L.from_coords(Hinv * h);
        if (L.norm(kappa).is_zero()) continue;
        Poly fp = L.reduce(derivative(L.f));
        return L.mul(kappa, L.inv(fp));
    }
    fail(Errc::precondition, "no cyclic unit vector found for the class recomputation");
}

std::vector<Poly> class_representatives(const EtaleAlgebra& L) {
    const Base& b = L.base;
    if (b.ring != Ring::Fp || b.p == 2) fail(Errc::unsupported, "class enumeration needs an odd finite field");
    long p = b.p;
    int r = static_cast<int>(L.factors.size());
    std::vector<Poly> nonsq, idem;
    for (const auto& fc : L.factors) {
        EtaleAlgebra K = etale_build(fc.g);
        mpz_class q = ipow(p, fc.degree);
        mpz_class half = (q - 1) / 2;
        Poly found;
        for (long t = 1; found.is_zero(); ++t) {
            std::vector<long> co;
            long u = t;
            for (int k = 0; k < fc.degree; ++k) {
                co.push_back(u % p);
                u /= p;
            }
            if (u) fail(Errc::internal, "no nonsquare found in residue field");
            Poly a = K.elem(co);
            if (a.is_zero()) continue;
            Poly pw = powmod(a, half, fc.g);
            if (!is_const(pw, 1)) found = a;
        }
        nonsq.push_back(found);
        // idempotent for this factor: (f/g) * ((f/g)^{-1} mod g)
        Poly cof = divmod(L.f, fc.g).first;
        Poly cinv = K.inv(cof % fc.g);
        idem.push_back(L.reduce(cof * cinv));
    }
    std::vector<Poly> out;
    for (long mask = 0; mask < (1L << r); ++mask) {
        if (__builtin_popcountl(mask) % 2) continue;
        Poly x(b);
        for (int i = 0; i < r; ++i) {
            Poly comp = (mask >> i) & 1 ? nonsq[i] : Poly::constant(one_of(b));
            x = x + L.mul(idem[i], comp);
        }
        out.push_back(L.reduce(x));
    }
    return out;
}

bool distinguished_coincide(const Invariants& c) {
    if (!c.regular_semisimple()) fail(Errc::precondition, "invariants are not regular semisimple");
    EtaleAlgebra L = etale_build(c.f());
    return square_class(L, L.reduce(-L.gamma())).trivial();
}

PencilPair pencil_of(const RepElement& T, int i) {
    if (i != 1 && i != 2) fail(Errc::domain, "pencil index must be 1 or 2");
    const Base& b = T.base();
    int n = T.n();
    Mat B = Mat::antidiag(b, n);
    Mat Q = i == 1 ? B : -B;
    Mat S = i == 1 ? T.A * T.Astar : T.Astar * T.A;
    PencilPair P;
    P.i = i;
    P.Q = Mat(b, n + 1, n + 1);
    P.QT = Mat(b, n + 1, n + 1);
    P.Q.set_block(0, 0, Q);
    P.QT.set_block(0, 0, Q * S);
    P.QT(n, n) = one_of(b);
    return P;
}

Poly pencil_polynomial(const PencilPair& P) {
    // det(Q - t QT) = det(-QT) * charpoly(QT^{-1} Q)
    Mat QT = P.QT;
    Scalar d = det(-QT);
    return d * charpoly(inverse(QT) * P.Q);
}

}  // namespace orbitlab
