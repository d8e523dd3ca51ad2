#include "orbitlab/quadforms.hpp"

#include <random>
#include <set>

namespace orbitlab {

namespace {

Scalar zero(const Base& b) { return Scalar(b, 0L); }
Scalar one(const Base& b) { return Scalar(b, 1L); }

// smaller is a better pivot
long pivot_weight(const Scalar& x) {
    if (x.is_zero()) return kExactZero;
    return x.base().ring == Ring::Qp ? x.val() : 0;
}

mpq_class rat(const Scalar& x) { return x.rational(); }

}  // namespace

Diagonalization diagonalize(const Mat& G) {
    const Base& b = G.base();
    if (b.ring == Ring::Fp && b.p == 2) fail(Errc::domain, "diagonalization needs characteristic different from 2");
    int n = G.rows();
    Mat M = G, P = Mat::identity(b, n);
    auto swap_idx = [&](int i, int k) {
        if (i == k) return;
        for (int r = 0; r < n; ++r) std::swap(M(r, i), M(r, k));
        for (int c = 0; c < n; ++c) std::swap(M(i, c), M(k, c));
        for (int r = 0; r < n; ++r) std::swap(P(r, i), P(r, k));
    };
    auto add_to = [&](int i, int j, const Scalar& c) {  // e_i += c e_j
        for (int r = 0; r < n; ++r) P(r, i) += c * P(r, j);
        for (int r = 0; r < n; ++r) M(r, i) += c * M(r, j);
        for (int r = 0; r < n; ++r) M(i, r) += c * M(j, r);
    };
    for (int i = 0; i < n; ++i) {
        int best = -1;
        long bw = kExactZero;
        for (int k = i; k < n; ++k)
            if (pivot_weight(M(k, k)) < bw) bw = pivot_weight(M(k, k)), best = k;
        int oi = -1, oj = -1;
        long ow = kExactZero;
        for (int r = i; r < n; ++r)
            for (int c = r + 1; c < n; ++c)
                if (pivot_weight(M(r, c)) < ow) ow = pivot_weight(M(r, c)), oi = r, oj = c;
        if (best < 0 && oi < 0) {
            Mat rad = P.cols_range(i, n);
            std::string msg = "degenerate form, radical spanned by";
            for (int c = 0; c < rad.cols(); ++c) {
                msg += " (";
                for (int r = 0; r < n; ++r) msg += (r ? "," : "") + rad(r, c).rational().get_str();
                msg += ")";
            }
            fail(Errc::domain, msg);
        }
        if (best < 0 || (oi >= 0 && ow < bw)) {
            add_to(oi, oj, (Scalar(b, 2L) * M(oi, oj)).inv());
            best = oi;
        }
        swap_idx(i, best);
        Scalar piv = M(i, i);
        for (int j = i + 1; j < n; ++j) {
            if (M(i, j).is_zero()) continue;
            Scalar c = -(M(i, j) / piv);
            add_to(j, i, c);
            M(i, j) = zero(b);
            M(j, i) = zero(b);
        }
    }
    Diagonalization out{P, {}};
    for (int i = 0; i < n; ++i) out.d.push_back(M(i, i));
    return out;
}

int hasse_of_diagonal(const std::vector<mpq_class>& d, const Place& pl) {
    long p = pl.kind == Place::Real ? 0 : pl.p;
    int h = 1;
    for (size_t i = 0; i < d.size(); ++i)
        for (size_t j = i + 1; j < d.size(); ++j) h *= hilbert_q(d[i], d[j], p);
    return h;
}

namespace {

std::vector<int> det_class(const Mat& G, const std::vector<Scalar>& d, const Place& pl) {
    if (G.base().ring == Ring::Qp || G.base().ring == Ring::Fp) {
        Scalar D = one(G.base());
        for (const auto& x : d) D *= x;
        return scalar_class(D, pl);
    }
    mpq_class D = 1;
    for (const auto& x : d) D *= rat(x);
    return rational_class(D, pl);
}

void check_place(const Base& b, const Place& pl) {
    if (b.ring == Ring::Fp && pl.kind != Place::Finite) fail(Errc::domain, "finite-field form needs the finite place");
    if (b.ring == Ring::Qp && (pl.kind != Place::Padic || pl.p != b.p)) fail(Errc::domain, "p-adic form needs its own place");
    if (pl.kind == Place::Finite && b.ring != Ring::Fp) fail(Errc::domain, "finite place needs a finite-field form");
}

std::vector<mpq_class> rational_diag(const std::vector<Scalar>& d) {
    std::vector<mpq_class> r;
    for (const auto& x : d) r.push_back(rat(x));
    return r;
}

}  // namespace

FormInvariants form_invariants(const Mat& G, const Place& pl) {
    check_place(G.base(), pl);
    Diagonalization D = diagonalize(G);
    FormInvariants fi;
    fi.rank = G.rows();
    fi.disc = det_class(G, D.d, pl);
    if (pl.kind == Place::Real || pl.kind == Place::Padic) {
        fi.has_hasse = true;
        fi.hasse = hasse_of_diagonal(rational_diag(D.d), pl);
    }
    if (pl.kind == Place::Real) {
        fi.has_signature = true;
        for (const auto& x : D.d) (rat(x) > 0 ? fi.pos : fi.neg)++;
    }
    return fi;
}

std::vector<long> relevant_primes(const Mat& G) {
    Diagonalization D = diagonalize(G);
    std::set<long> ps{2};
    for (const auto& x : D.d) {
        mpq_class q = rat(x);
        for (const auto& f : prime_factors(q.get_num())) ps.insert(f.get_si());
        for (const auto& f : prime_factors(q.get_den())) ps.insert(f.get_si());
    }
    return {ps.begin(), ps.end()};
}

namespace {

bool split_local(const std::vector<mpq_class>& d, const Place& pl) {
    int N = static_cast<int>(d.size()), m = N / 2;
    mpq_class D = 1;
    for (const auto& x : d) D *= x;
    std::vector<mpq_class> ref;
    for (int i = 0; i < m; ++i) {
        ref.push_back(1);
        ref.push_back(-1);
    }
    mpq_class sgn = (m % 2) ? -1 : 1;
    if (N % 2) ref.push_back(sgn * D);
    else if (rational_class(sgn * D, pl) != rational_class(mpq_class(1), pl)) return false;
    return hasse_of_diagonal(d, pl) == hasse_of_diagonal(ref, pl);
}

}  // namespace

bool is_split(const Mat& G, const Place& pl) {
    check_place(G.base(), pl);
    Diagonalization D = diagonalize(G);
    int N = G.rows(), m = N / 2;
    switch (pl.kind) {
        case Place::Finite: {
            if (N % 2) return true;
            Scalar det = one(G.base());
            for (const auto& x : D.d) det *= x;
            if (m % 2) det = -det;
            return is_square_scalar(det);
        }
        case Place::Real: {
            int pos = 0;
            for (const auto& x : D.d)
                if (rat(x) > 0) ++pos;
            return std::abs(2 * pos - N) <= 1;
        }
        case Place::Padic: {
            if (G.base().ring == Ring::Qp && pl.p == 2)
                for (const auto& x : D.d)
                    if (x.rel() < 3) fail(Errc::precision, "need three bits of each 2-adic diagonal entry");
            return split_local(rational_diag(D.d), pl);
        }
        case Place::Global: {
            auto d = rational_diag(D.d);
            if (N % 2 == 0) {
                mpq_class det = 1;
                for (const auto& x : d) det *= x;
                if (m % 2) det = -det;
                if (!is_square_q(det)) return false;
            }
            int pos = 0;
            for (const auto& x : d)
                if (x > 0) ++pos;
            if (std::abs(2 * pos - N) > 1) return false;
            for (long p : relevant_primes(G))
                if (!split_local(d, Place::padic(p))) return false;
            return true;
        }
    }
    return false;
}

// ---------- isotropic vectors ----------

namespace {

std::optional<Mat> iso_fp(const Mat& G) {
    const Base& b = G.base();
    long p = b.p;
    int k = G.rows();
    if (p <= 13) {
        std::vector<long> x(static_cast<size_t>(k), 0);
        for (;;) {
            int i = k - 1;
            while (i >= 0 && x[i] == p - 1) x[i--] = 0;
            if (i < 0) return std::nullopt;
            ++x[i];
            long q = 0;
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) q = (q + x[r] * x[c] % p * G(r, c).residue()) % p;
            if (q == 0) {
                Mat v(b, k, 1);
                for (int r = 0; r < k; ++r) v(r, 0) = Scalar(b, x[r]);
                return v;
            }
        }
    }
    Diagonalization D = diagonalize(G);
    std::vector<long> d;
    for (const auto& s : D.d) d.push_back(s.residue());
    Mat y(b, k, 1);
    if (k == 1) return std::nullopt;
    if (k == 2) {
        long t = (p - d[0]) % p * invmod_l(d[1], p) % p;
        if (legendre(t, p) != 1) return std::nullopt;
        y(0, 0) = one(b);
        y(1, 0) = Scalar(b, sqrtmod_l(t, p));
        return D.P * y;
    }
    std::mt19937_64 rng(0xA5EED);
    for (int iter = 0; iter < 100000; ++iter) {
        long s = 0;
        bool nz = false;
        for (int i = 0; i + 1 < k; ++i) {
            long v = static_cast<long>(rng() % static_cast<uint64_t>(p));
            y(i, 0) = Scalar(b, v);
            s = (s + d[i] * (v * v % p)) % p;
            nz = nz || v;
        }
        if (!nz) continue;
        long t = (p - s) % p * invmod_l(d[k - 1], p) % p;
        if (t == 0) {
            y(k - 1, 0) = zero(b);
            return D.P * y;
        }
        if (legendre(t, p) == 1) {
            y(k - 1, 0) = Scalar(b, sqrtmod_l(t, p));
            return D.P * y;
        }
    }
    fail(Errc::budget, "isotropic sampling over F_p exhausted");
}

std::optional<Mat> iso_q(const Mat& G) {
    const Base& b = G.base();
    Diagonalization D = diagonalize(G);
    int k = G.rows();
    auto d = rational_diag(D.d);
    Mat y(b, k, 1);
    if (k == 1) return std::nullopt;
    if (k == 2) {
        mpq_class t = -d[1] / d[0];
        if (!is_square_q(t)) return std::nullopt;
        y(0, 0) = Scalar(b, sqrt_q(t));
        y(1, 0) = one(b);
        return D.P * y;
    }
    {
        bool pos = false, neg = false;
        for (const auto& x : d) (x > 0 ? pos : neg) = true;
        if (!(pos && neg)) return std::nullopt;
    }
    if (k == 3 || k == 4) {
        mpq_class det = 1;
        for (const auto& x : d) det *= x;
        for (long p : relevant_primes(G)) {
            Place pl = Place::padic(p);
            int h = hasse_of_diagonal(d, pl);
            bool aniso = k == 3 ? h != hilbert_q(-1, -det, p)
                                : (is_square_q(det) || rational_class(det, pl) == rational_class(mpq_class(1), pl)) &&
                                      h == -hilbert_q(-1, -1, p);
            if (aniso) return std::nullopt;
        }
    }
    long budget = 4000000;
    std::vector<long> x(static_cast<size_t>(k - 1));
    for (long H = 1; H <= 400; ++H) {
        // shell max|x_i| = H in lexicographic order
        long side = 2 * H + 1;
        long total = 1;
        for (int i = 0; i + 1 < k; ++i) {
            total *= side;
            if (total > 50000000) fail(Errc::budget, "isotropic search box too large");
        }
        for (long idx = 0; idx < total; ++idx) {
            long t = idx, mx = 0;
            for (int i = k - 2; i >= 0; --i) {
                x[i] = t % side - H;
                t /= side;
                mx = std::max(mx, std::labs(x[i]));
            }
            if (mx != H) continue;
            if (--budget < 0) fail(Errc::budget, "isotropic search over Q exhausted its budget");
            mpq_class s = 0;
            for (int i = 0; i + 1 < k; ++i) s += d[i] * x[i] * x[i];
            mpq_class q = -s / d[k - 1];
            if (q < 0 || !is_square_q(q)) continue;
            for (int i = 0; i + 1 < k; ++i) y(i, 0) = Scalar(b, x[i]);
            y(k - 1, 0) = Scalar(b, sqrt_q(q));
            return D.P * y;
        }
    }
    fail(Errc::budget, "isotropic search over Q exhausted its box");
}

std::optional<std::vector<long>> iso_mod_p(const std::vector<long>& u, long p) {
    int k = static_cast<int>(u.size());
    if (k < 2) return std::nullopt;
    if (k == 2) {
        long t = (p - u[0]) % p * invmod_l(u[1], p) % p;
        if (legendre(t, p) != 1) return std::nullopt;
        return std::vector<long>{1, sqrtmod_l(t, p)};
    }
    // a nonzero zero exists among the first three coordinates
    for (long a = 0; a < p; ++a)
        for (long c = 0; c < p; ++c) {
            long s = (u[0] * (a * a % p) + u[1] * (c * c % p)) % p;
            long t = (p - s) % p * invmod_l(u[2], p) % p;
            if (t != 0 && legendre(t, p) != 1) continue;
            if (t == 0 && a == 0 && c == 0) continue;
            std::vector<long> v(static_cast<size_t>(k), 0);
            v[0] = a;
            v[1] = c;
            v[2] = t == 0 ? 0 : sqrtmod_l(t, p);
            return v;
        }
    return std::nullopt;
}

std::optional<Mat> iso_qp(const Mat& G) {
    const Base& b = G.base();
    long p = b.p;
    if (p == 2) fail(Errc::unsupported, "no isotropic search over Q2");
    Diagonalization D = diagonalize(G);
    int k = G.rows();
    std::vector<int> grp[2];
    std::vector<long> s(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        if (D.d[i].is_zero()) fail(Errc::precision, "diagonal entry vanishes at working precision");
        long v = D.d[i].val();
        s[i] = v >= 0 ? v / 2 : -((-v + 1) / 2);
        grp[((v % 2) + 2) % 2].push_back(i);
    }
    for (auto& g : grp) {
        std::vector<long> ubar;
        for (int i : g) ubar.push_back(mpz_class(D.d[i].unit() % p).get_si());
        auto sol = iso_mod_p(ubar, p);
        if (!sol) continue;
        // unit part of the rescaled coefficient of coordinate i
        auto coef = [&](int i) {
            long e = D.d[i].val() - 2 * s[i];
            return Scalar::padic(b, e, D.d[i].unit(), D.d[i].rel());
        };
        int jj = -1;
        for (size_t t = 0; t < g.size(); ++t)
            if ((*sol)[t] % p) jj = static_cast<int>(t);
        Mat y(b, k, 1);
        Scalar acc = zero(b);
        for (size_t t = 0; t < g.size(); ++t) {
            if (static_cast<int>(t) == jj) continue;
            y(g[t], 0) = Scalar(b, (*sol)[t]);
            acc += coef(g[t]) * y(g[t], 0) * y(g[t], 0);
        }
        Scalar rhs = -acc / coef(g[jj]);
        if (rhs.is_zero()) {
            y(g[jj], 0) = zero(b);
        } else {
            y(g[jj], 0) = sqrt_scalar(rhs);
        }
        Mat x(b, k, 1);
        for (int i = 0; i < k; ++i) {
            Scalar sc = s[i] >= 0 ? Scalar(b, mpq_class(1, ipow(p, s[i]))) : Scalar(b, ipow(p, -s[i]));
            x(i, 0) = y(i, 0) * sc;
        }
        return D.P * x;
    }
    return std::nullopt;
}

Scalar pair(const Mat& G, const Mat& x, const Mat& y) { return bilinear(G, x, y); }

}  // namespace

std::optional<Mat> isotropic_vector(const Mat& G) {
    switch (G.base().ring) {
        case Ring::Fp: return iso_fp(G);
        case Ring::Q: return iso_q(G);
        case Ring::Qp: return iso_qp(G);
        case Ring::R: {
            Mat Gq = G.to_base(Base::rationals());
            auto v = iso_q(Gq);
            if (!v) return std::nullopt;
            return v->to_base(G.base());
        }
    }
    return std::nullopt;
}

namespace {

Mat assemble(const Base& b, int n, const std::vector<Mat>& xs, const std::vector<Mat>& ys, const Mat* u) {
    Mat P(b, n, n);
    int m = static_cast<int>(xs.size());
    for (int i = 0; i < m; ++i) {
        P.set_col(i, xs[i]);
        P.set_col(n - 1 - i, ys[i]);
    }
    if (u) P.set_col(m, *u);
    return P;
}

Mat normalize_anisotropic(const Mat& G, const Mat& u) {
    Scalar d = pair(G, u, u);
    if (d.is_zero()) fail(Errc::precondition, "anisotropic remainder vanishes");
    if (!is_square_scalar(d)) fail(Errc::precondition, "non-isometric: discriminant differs from the standard form");
    return sqrt_scalar(d).inv() * u;
}

int best_partner(const Mat& G, const Mat& x, const Mat& W) {
    int best = -1;
    long bw = kExactZero;
    for (int c = 0; c < W.cols(); ++c) {
        long w = pivot_weight(pair(G, x, W.col(c)));
        if (w < bw) bw = w, best = c;
    }
    return best;
}

}  // namespace

Mat to_standard(const Mat& G) {
    const Base& b = G.base();
    int n = G.rows(), m = n / 2;
    Mat W = Mat::identity(b, n);
    std::vector<Mat> xs, ys;
    for (int i = 0; i < m; ++i) {
        Mat GW = W.t() * G * W;
        auto v = isotropic_vector(GW);
        if (!v) fail(Errc::precondition, "form is not split: no isotropic vector in the complement");
        Mat x = W * *v;
        int c = best_partner(G, x, W);
        if (c < 0) fail(Errc::internal, "isotropic vector has no partner");
        Mat w = W.col(c);
        Mat y = pair(G, x, w).inv() * w;
        y = y - (pair(G, y, y) / Scalar(b, 2L)) * x;
        Mat C(b, 2, W.cols());
        for (int j = 0; j < W.cols(); ++j) {
            C(0, j) = pair(G, x, W.col(j));
            C(1, j) = pair(G, y, W.col(j));
        }
        W = W * kernel(C);
        xs.push_back(x);
        ys.push_back(y);
    }
    if (n % 2) {
        Mat u = normalize_anisotropic(G, W.col(0));
        return assemble(b, n, xs, ys, &u);
    }
    return assemble(b, n, xs, ys, nullptr);
}

Mat complete_from_isotropic(const Mat& G, const Mat& X) {
    const Base& b = G.base();
    int n = G.rows(), m = X.cols();
    if (m != n / 2) fail(Errc::precondition, "isotropic subspace is not maximal");
    // y'_j with B(x_i, y'_j) = delta_ij
    Mat C = X.t() * G;  // m x n
    Mat Cfull(b, n, n);
    Cfull.set_block(0, 0, C);
    int row = m;
    for (int j = 0; j < n && row < n; ++j) {
        Mat trial = Cfull;
        Mat e(b, 1, n);
        e(0, j) = one(b);
        trial.set_block(row, 0, e);
        if (rank(trial.block(0, 0, row + 1, n)) == row + 1) {
            Cfull = trial;
            ++row;
        }
    }
    Mat rhs(b, n, m);
    for (int i = 0; i < m; ++i) rhs(i, i) = one(b);
    Mat Yp = solve(Cfull, rhs);
    Mat Y = Yp;
    for (int j = 0; j < m; ++j) {
        Mat yj = Yp.col(j);
        for (int k = 0; k < m; ++k) {
            Scalar c = pair(G, Yp.col(j), Yp.col(k)) / Scalar(b, 2L);
            yj = yj - c * X.col(k);
        }
        Y.set_col(j, yj);
    }
    std::vector<Mat> xs, ys;
    for (int i = 0; i < m; ++i) {
        xs.push_back(X.col(i));
        ys.push_back(Y.col(i));
    }
    if (n % 2) {
        Mat D(b, 2 * m, n);
        D.set_block(0, 0, X.t() * G);
        D.set_block(m, 0, Y.t() * G);
        Mat u = kernel(D);
        if (u.cols() != 1) fail(Errc::precondition, "isotropic data does not span a hyperbolic subspace");
        Mat un = normalize_anisotropic(G, u.col(0));
        return assemble(b, n, xs, ys, &un);
    }
    return assemble(b, n, xs, ys, nullptr);
}

Mat split_isometry(const Mat& Q, const Mat& target) {
    const Base& b = Q.base();
    int n = Q.rows();
    if (target.rows() != n) fail(Errc::precondition, "non-isometric: ranks differ");
    if (Q == target) return Mat::identity(b, n);
    Scalar dq = det(Q), dt = det(target);
    if (dq.is_zero() || dt.is_zero()) fail(Errc::domain, "degenerate form");
    if (!is_square_scalar(dq / dt)) fail(Errc::precondition, "non-isometric: discriminants differ");
    Mat B = Mat::antidiag(b, n);
    Mat PQ = Q == B ? Mat::identity(b, n) : to_standard(Q);
    Mat PT = target == B ? Mat::identity(b, n) : to_standard(target);
    Mat P = PQ * inverse(PT);
    if (P.t() * Q * P != target) fail(Errc::internal, "isometry check failed");
    return P;
}

Mat max_isotropic(const Mat& G) {
    const Base& b = G.base();
    int n = G.rows(), m = n / 2;
    if (G == Mat::antidiag(b, n)) return Mat::identity(b, n).cols_range(0, m);
    if (n % 2 == 0) {
        Scalar d = det(G);
        if (m % 2) d = -d;
        if (!is_square_scalar(d)) fail(Errc::precondition, "form is not split");
        return to_standard(G).cols_range(0, m);
    }
    // odd rank: rescale so the anisotropic remainder becomes a square
    Scalar d = det(G);
    if (m % 2) d = -d;
    Mat P = to_standard(d * G);
    return P.cols_range(0, m);
}

}  // namespace orbitlab
