#include "orbitlab/lattices.hpp"

#include <sstream>

#include "orbitlab/quadforms.hpp"

namespace orbitlab {

namespace {

const Base& need_padic(const Mat& M) {
    if (M.base().ring != Ring::Qp) fail(Errc::domain, "lattice data must be p-adic");
    return M.base();
}

Scalar ppow(const Base& b, long k) {
    if (k >= 0) return Scalar(b, ipow(b.p, k));
    return Scalar(b, mpq_class(1, ipow(b.p, -k)));
}

long val_of(const Scalar& s) {
    if (s.is_zero()) fail(Errc::precision, "entry vanishes at working precision");
    return s.val();
}

long mod8(const Scalar& unit) {
    mpz_class u = unit.unit() % 8;
    if (u < 0) u += 8;
    return u.get_si();
}

// root of a x^2 + b x + c near x0, derivative a unit there
Scalar newton(const Scalar& a, const Scalar& b, const Scalar& c, Scalar x) {
    const Base& B = a.base();
    for (int it = 0; it < 64; ++it) {
        Scalar v = a * x * x + b * x + c;
        if (v.is_zero()) return x;
        Scalar d = Scalar(B, 2L) * a * x + b;
        x = x - v / d;
    }
    fail(Errc::precision, "Hensel iteration did not converge");
}

// U with U^t M U = H or H0 for an even unimodular binary M over Z_2
Mat normalize_binary(const Mat& M, CasselsBlock::Kind& kind) {
    const Base& B = M.base();
    Scalar a = M(0, 0), b = M(0, 1), c = M(1, 1);
    Scalar two(B, 2L), one(B, 1L);
    Scalar alpha = a / two, gam = c / two;
    Scalar d = a * c - b * b;
    bool hyperbolic = mod8(-d) == 1;
    kind = hyperbolic ? CasselsBlock::H : CasselsBlock::H0;
    Mat x(B, 2, 1);
    Scalar X(B, 0L);
    if (hyperbolic) {
        bool gam_even = gam.is_zero() || gam.val() > 0;
        X = newton(alpha, b, gam, Scalar(B, gam_even ? 0L : 1L));
    } else {
        X = newton(alpha, b, gam - one, Scalar(B, 0L));
    }
    x(0, 0) = X;
    x(1, 0) = one;
    Mat z(B, 2, 1);
    z(0, 0) = one;
    Scalar bxz = (x.t() * M * z)(0, 0);
    Mat zp = bxz.inv() * z;
    Scalar qz = (zp.t() * M * zp)(0, 0);
    Mat y;
    if (hyperbolic) {
        y = zp - (qz / two) * x;
    } else {
        Scalar t = newton(one, one, qz / two - one, Scalar(B, 0L));
        y = zp + t * x;
    }
    Mat U(B, 2, 2);
    U.set_col(0, x);
    U.set_col(1, y);
    return U;
}

void swap_cols(Mat& P, int i, int j) {
    if (i == j) return;
    Mat a = P.col(i), b = P.col(j);
    P.set_col(i, b);
    P.set_col(j, a);
}

}  // namespace

LatticeBasis LatticeBasis::of(const Mat& M) {
    const Base& b = need_padic(M);
    LatticeBasis L;
    L.basis = M;
    L.p = b.p;
    L.prec = b.prec;
    return L;
}

bool is_integral(const Mat& M) {
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) {
            const Scalar& s = M(i, j);
            if (!s.is_zero() && s.val() < 0) return false;
        }
    return true;
}

bool contains(const LatticeBasis& outer, const LatticeBasis& inner) {
    return is_integral(inverse(outer.basis) * inner.basis);
}

bool same_lattice(const LatticeBasis& a, const LatticeBasis& b) { return contains(a, b) && contains(b, a); }

LatticeBasis dual_lattice(const LatticeBasis& L, const Mat& G) {
    LatticeBasis D = L;
    D.basis = inverse(L.basis.t() * G);
    D.ideal = false;
    return D;
}

bool is_self_dual(const LatticeBasis& L, const Mat& G) { return same_lattice(L, dual_lattice(L, G)); }

bool gamma_stable(const LatticeBasis& I, const EtaleAlgebra& A) {
    return is_integral(inverse(I.basis) * A.mult_matrix(A.gamma()) * I.basis);
}

LatticeBasis scaled(const LatticeBasis& I, const Poly& lambda, const EtaleAlgebra& A) {
    LatticeBasis r = I;
    r.basis = A.mult_matrix(lambda) * I.basis;
    return r;
}

std::string CasselsResult::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        if (i) os << " + ";
        os << "p^" << b.val << "*";
        if (b.kind == CasselsBlock::Unit) os << "<" << b.unit.rational().get_str() << ">";
        else os << (b.kind == CasselsBlock::H ? "H" : "H0");
    }
    return os.str();
}

CasselsResult cassels_diagonalize(const Mat& Q) {
    const Base& B = need_padic(Q);
    if (Q != Q.t()) fail(Errc::domain, "Gram matrix is not symmetric");
    long p = B.p;
    int n = Q.rows();
    Mat P = Mat::identity(B, n);
    CasselsResult out;
    int k = 0;
    while (k < n) {
        Mat G = P.t() * Q * P;
        long vmin = kExactZero;
        int bi = -1, bj = -1;
        for (int i = k; i < n; ++i)
            for (int j = i; j < n; ++j) {
                if (G(i, j).is_zero()) continue;
                long v = G(i, j).val();
                if (v < vmin || (v == vmin && i == j && bi != bj)) {
                    vmin = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) fail(Errc::precision, "form is degenerate at working precision");
        if (bi != bj && p != 2) {
            P.set_col(bi, P.col(bi) + P.col(bj));
            bj = bi;
            G = P.t() * Q * P;
        }
        if (bi == bj) {
            swap_cols(P, k, bi);
            G = P.t() * Q * P;
            for (int l = k + 1; l < n; ++l) {
                Scalar cf = G(k, l) / G(k, k);
                P.set_col(l, P.col(l) - cf * P.col(k));
            }
            G = P.t() * Q * P;
            CasselsBlock blk;
            blk.kind = CasselsBlock::Unit;
            blk.start = k;
            blk.val = val_of(G(k, k));
            blk.unit = G(k, k) / ppow(B, blk.val);
            out.blocks.push_back(blk);
            k += 1;
            continue;
        }
        swap_cols(P, k, bi);
        swap_cols(P, k + 1, bj == k ? bi : bj);
        G = P.t() * Q * P;
        Mat Bk = G.block(k, k, 2, 2);
        Mat Binv = inverse(Bk);
        for (int l = k + 2; l < n; ++l) {
            Mat rhs = G.block(k, l, 2, 1);
            Mat cf = Binv * rhs;
            P.set_col(l, P.col(l) - cf(0, 0) * P.col(k) - cf(1, 0) * P.col(k + 1));
        }
        G = P.t() * Q * P;
        Mat Mp = ppow(B, -vmin) * G.block(k, k, 2, 2);
        CasselsBlock blk;
        Mat U = normalize_binary(Mp, blk.kind);
        Mat pair = P.cols_range(k, k + 2) * U;
        P.set_col(k, pair.col(0));
        P.set_col(k + 1, pair.col(1));
        blk.start = k;
        blk.val = vmin;
        out.blocks.push_back(blk);
        k += 2;
    }
    out.P = P;
    out.D = P.t() * Q * P;
    if (!is_integral(inverse(P)) || !is_integral(P)) fail(Errc::internal, "Cassels change of basis is not integral");
    return out;
}

Mat lattice_form(const EtaleAlgebra& A, const Poly& nu) {
    int n = A.n();
    Poly w = A.mul(A.reduce(nu), A.inv(A.reduce(derivative(A.f))));
    std::vector<Scalar> tr;
    Poly cur = w;
    for (int k = 0; k < 2 * n - 1; ++k) {
        tr.push_back(A.trace(cur));
        cur = A.mul(cur, A.gamma());
    }
    Mat G(A.base, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = tr[i + j];
    return G;
}

LatticeBasis self_dualize(const LatticeBasis& I1, const Mat& B2) {
    const Base& B = need_padic(I1.basis);
    long p = B.p;
    int n = I1.n();
    Mat Q = I1.basis.t() * B2 * I1.basis;
    if (!is_integral(Q)) fail(Errc::precondition, "form is not integral on the input lattice");
    if (val_of(det(Q)) == 0) return I1;
    CasselsResult C = cassels_diagonalize(Q);
    Mat N = I1.basis * C.P;
    std::vector<int> odd_units;
    std::vector<std::pair<int, CasselsBlock::Kind>> odd_pairs;
    for (auto blk : C.blocks) {
        long k = blk.val / 2;
        for (int t = 0; t < blk.size(); ++t) N.set_col(blk.start + t, ppow(B, -k) * N.col(blk.start + t));
        if (blk.val % 2 == 0) continue;
        if (blk.kind == CasselsBlock::Unit) odd_units.push_back(blk.start);
        else odd_pairs.push_back({blk.start, blk.kind});
    }
    Scalar inv_p = ppow(B, -1);
    for (const auto& [s, kind] : odd_pairs) {
        (void)kind;
        N.set_col(s, inv_p * N.col(s));
    }
    if (odd_units.size() % 2) fail(Errc::precondition, "no self-dual refinement");
    if (p == 2) {
        for (size_t i = 0; i + 1 < odd_units.size(); i += 2) {
            Mat f1 = N.col(odd_units[i]), f2 = N.col(odd_units[i + 1]);
            Scalar half = ppow(B, -1);
            N.set_col(odd_units[i], half * (f1 + f2));
            N.set_col(odd_units[i + 1], half * (f1 - f2));
        }
    } else if (!odd_units.empty()) {
        int r = static_cast<int>(odd_units.size()), a = r / 2;
        Base fp = Base::fp(p);
        Mat F(fp, r, r);
        Mat Gs = N.t() * B2 * N;
        for (int i = 0; i < r; ++i) {
            Scalar u = Gs(odd_units[i], odd_units[i]) / ppow(B, 1);
            if (u.is_zero() || u.val() != 0) fail(Errc::internal, "p-part entry is not p times a unit");
            F(i, i) = Scalar(fp, u.unit());
        }
        Mat W;
        try {
            W = max_isotropic(F);
        } catch (const Error&) {
            fail(Errc::precondition, "no self-dual refinement");
        }
        if (W.cols() != a) fail(Errc::precondition, "no self-dual refinement");
        Mat U(fp, r, r);
        for (int j = 0; j < a; ++j) U.set_col(j, W.col(j));
        int filled = a;
        for (int e = 0; e < r && filled < r; ++e) {
            Mat trial = U;
            Mat v(fp, r, 1);
            v(e, 0) = Scalar(fp, 1L);
            trial.set_col(filled, v);
            if (rank(trial.cols_range(0, filled + 1)) == filled + 1) {
                U = trial;
                ++filled;
            }
        }
        Mat NJ(B, n, r);
        for (int i = 0; i < r; ++i) NJ.set_col(i, N.col(odd_units[i]));
        Mat UL(B, r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) UL(i, j) = Scalar(B, U(i, j).rational());
        Mat G2 = NJ * UL;
        for (int j = 0; j < r; ++j) N.set_col(odd_units[j], j < a ? inv_p * G2.col(j) : G2.col(j));
    }
    LatticeBasis out = I1;
    out.basis = N;
    out.ideal = false;
    Mat Gout = N.t() * B2 * N;
    if (!is_integral(Gout) || val_of(det(Gout)) != 0) fail(Errc::internal, "refined lattice is not self-dual");
    if (!contains(out, I1)) fail(Errc::internal, "refined lattice does not contain the input");
    return out;
}

std::string TripleReport::str() const {
    std::ostringstream os;
    for (int i = 0; i < 6; ++i) os << (i ? " " : "") << "(" << (i + 1) << ")=" << (cond[i] ? "ok" : "FAIL");
    return os.str();
}

namespace {

bool products_integral(const EtaleAlgebra& A, const Poly& w, const Mat& M) {
    int n = M.cols();
    std::vector<Poly> el;
    for (int j = 0; j < n; ++j) el.push_back(A.from_coords(M.col(j)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (!is_integral(A.coords(A.mul(w, A.mul(el[i], el[j]))))) return false;
    return true;
}

long val_or_big(const Scalar& s) { return s.is_zero() ? kExactZero : s.val(); }

}  // namespace

TripleReport ideal_triple_verify(const Invariants& c, const IdealTriple& t) {
    Base B = t.I1.basis.base();
    Poly f = c.f();
    if (!f.b.same(B)) f = f.to_base(B);
    EtaleAlgebra A = etale_build(f);
    Poly nu = A.reduce(t.nu.to_base(B));
    Poly g = A.gamma();
    Poly nug = A.mul(nu, g);
    TripleReport r;
    LatticeBasis gi1 = scaled(t.I1, A.inv(g), A);
    r.cond[0] = contains(t.I2, t.I1) && contains(gi1, t.I2);
    r.cond[1] = products_integral(A, nu, t.I1.basis);
    r.cond[2] = products_integral(A, nug, t.I2.basis);
    r.cond[3] = 2 * val_or_big(det(t.I1.basis)) + val_or_big(A.norm(nu)) == 0;
    r.cond[4] = 2 * val_or_big(det(t.I2.basis)) + val_or_big(A.norm(A.reduce(-nug))) == 0;
    Place pl = Place::padic(B.p, B.prec);
    r.cond[5] = is_split(lattice_form(A, nu), pl) && is_split(lattice_form(A, A.reduce(-nug)), pl);
    r.ok = true;
    for (bool x : r.cond) r.ok = r.ok && x;
    return r;
}

int lattice_precision(const Invariants& c, long p) {
    Base q = Base::rationals();
    Poly f = c.f().to_base(q);
    Scalar d = poly_discriminant(even_lift(f));
    long v = d.is_zero() ? 0 : vp(d.rational(), p);
    return 20 + static_cast<int>(std::max(0L, v));
}

IntegralResult integral_representative(const Invariants& c, const Poly& nu, const LatticeBasis& I1) {
    const Base& B = need_padic(I1.basis);
    long p = B.p;
    if (p == 2) {
        int n = c.n();
        for (int i = 1; i < n; ++i) {
            mpq_class a = c.a[i - 1].rational();
            if (a != 0 && vp(a, 2) < 4 * i) fail(Errc::precondition, "2-adic divisibility 2^{4i} | a_i is not met");
        }
        mpq_class e = c.e.rational();
        if (e != 0 && vp(e, 2) < 2 * n) fail(Errc::precondition, "2-adic divisibility 2^{2n} | e is not met");
    }
    Poly f = c.f();
    if (!f.b.same(B)) f = f.to_base(B);
    EtaleAlgebra A = etale_build(f);
    Poly v = A.reduce(nu.to_base(B));
    Mat G1 = lattice_form(A, v);
    Mat G2 = lattice_form(A, A.mul(v, A.gamma()));
    Place pl = Place::padic(p, B.prec);
    if (!is_split(G1, pl) || !is_split(G2, pl)) fail(Errc::precondition, "class is not soluble at p");
    if (!is_self_dual(I1, G1)) fail(Errc::precondition, "supplied lattice is not self-dual for the class form");
    IntegralResult out;
    out.triple.I1 = I1;
    out.triple.I2 = self_dualize(I1, G2);
    out.triple.nu = v;
    out.report = ideal_triple_verify(c, out.triple);
    return out;
}

}  // namespace orbitlab
