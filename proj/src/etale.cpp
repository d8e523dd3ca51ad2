#include "orbitlab/etale.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace orbitlab {

Place Place::of(const Base& b) {
    switch (b.ring) {
        case Ring::Q: return global();
        case Ring::R: return real();
        case Ring::Fp: return {Finite, b.p, 0};
        case Ring::Qp: return padic(b.p, b.prec);
    }
    return global();
}

Base Place::base() const {
    switch (kind) {
        case Finite: return Base::fp(p);
        case Real: return Base::reals();
        case Padic: return Base::qp(p, prec);
        case Global: return Base::rationals();
    }
    return Base::rationals();
}

std::string Place::str() const {
    switch (kind) {
        case Finite: return "F" + std::to_string(p);
        case Real: return "R";
        case Padic: return "Q" + std::to_string(p);
        case Global: return "Q";
    }
    return "?";
}

// ---------- algebra arithmetic ----------

Poly EtaleAlgebra::gamma() const { return reduce(Poly::x(base)); }
Poly EtaleAlgebra::one() const { return Poly::constant(Scalar(base, 1L)); }

Poly EtaleAlgebra::elem(const std::vector<long>& c) const { return reduce(Poly::from_ints(base, c)); }

Poly EtaleAlgebra::reduce(const Poly& a) const {
    if (a.deg() < n()) return a;
    return a % f;
}

Poly EtaleAlgebra::mul(const Poly& a, const Poly& b) const { return reduce(a * b); }

Mat EtaleAlgebra::coords(const Poly& a) const {
    Mat v(base, n(), 1);
    Poly r = reduce(a);
    for (int i = 0; i <= r.deg(); ++i) v(i, 0) = r.c[i];
    return v;
}

Poly EtaleAlgebra::from_coords(const Mat& v) const {
    std::vector<Scalar> c;
    for (int i = 0; i < v.rows(); ++i) c.push_back(v(i, 0));
    return Poly(base, c);
}

Mat EtaleAlgebra::mult_matrix(const Poly& a) const {
    Mat m(base, n(), n());
    Poly cur = reduce(a);
    Poly x = Poly::x(base);
    for (int j = 0; j < n(); ++j) {
        for (int i = 0; i <= cur.deg(); ++i) m(i, j) = cur.c[i];
        if (j + 1 < n()) cur = reduce(cur * x);
    }
    return m;
}

Poly EtaleAlgebra::inv(const Poly& a) const {
    Mat e(base, n(), 1);
    e(0, 0) = Scalar(base, 1L);
    return from_coords(solve(mult_matrix(a), e));
}

Poly EtaleAlgebra::pow(const Poly& a, long e) const {
    if (e < 0) return pow(inv(a), -e);
    Poly r = one(), b = reduce(a);
    while (e > 0) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

Scalar EtaleAlgebra::norm(const Poly& a) const { return det(mult_matrix(a)); }
Scalar EtaleAlgebra::trace(const Poly& a) const { return orbitlab::trace(mult_matrix(a)); }

int EtaleAlgebra::real_root_count() const {
    int r = 0;
    for (const auto& fc : factors)
        if (fc.kind == Factor::RealLine) ++r;
    return r;
}

std::pair<Scalar, Scalar> etale_norm_trace(const EtaleAlgebra& L, const Poly& a) {
    Mat m = L.mult_matrix(a);
    return {det(m), orbitlab::trace(m)};
}

EtaleAlgebra etale_build(const Poly& f, bool factorize) {
    if (f.deg() < 1) fail(Errc::domain, "etale algebra needs a polynomial of positive degree");
    if (!f.lc().is_one()) fail(Errc::domain, "defining polynomial must be monic");
    EtaleAlgebra L;
    L.base = f.b;
    L.f = f;
    Scalar d = poly_discriminant(f.b.ring == Ring::Qp ? f.to_base(Base::rationals()) : f);
    if (d.is_zero()) fail(Errc::domain, "inseparable defining polynomial");
    if (!factorize) return L;
    switch (f.b.ring) {
        case Ring::Q:
            for (auto& [g, m] : factor_q(f)) {
                Factor fc;
                fc.g = g;
                fc.degree = g.deg();
                L.factors.push_back(fc);
            }
            break;
        case Ring::Fp:
            for (auto& [g, m] : factor_fp(f)) {
                Factor fc;
                fc.g = g;
                fc.degree = g.deg();
                L.factors.push_back(fc);
            }
            break;
        case Ring::R: {
            auto rr = real_roots(f);
            for (auto& r : rr) {
                Factor fc;
                fc.kind = Factor::RealLine;
                fc.root = r;
                fc.degree = 1;
                L.factors.push_back(fc);
            }
            for (int i = 0; i < (f.deg() - static_cast<int>(rr.size())) / 2; ++i) {
                Factor fc;
                fc.kind = Factor::ComplexPair;
                fc.degree = 2;
                L.factors.push_back(fc);
            }
            break;
        }
        case Ring::Qp:
            for (auto& pf : factor_qp(f, f.b.p, f.b.prec)) {
                Factor fc;
                fc.kind = Factor::Padic;
                fc.g = pf.g;
                fc.degree = pf.g.deg();
                fc.pad = pf;
                L.factors.push_back(fc);
            }
            break;
    }
    return L;
}

EtaleAlgebra base_change(const EtaleAlgebra& L, const Base& b) { return etale_build(L.f.to_base(b)); }

// ---------- integers ----------

namespace {

mpz_class mpos(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

mpz_class rho(const mpz_class& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        mpz_class x = 2, y = 2, d = 1;
        auto step = [&](mpz_class& v) { v = mpos(v * v + c, n); };
        while (d == 1) {
            step(x);
            step(y);
            step(y);
            mpz_class t = abs(x - y);
            mpz_gcd(d.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
        }
        if (d != n) return d;
    }
}

bool prime_z(const mpz_class& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_l(n.get_ui());
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

void factor_rec(const mpz_class& n, std::vector<mpz_class>& out) {
    if (n == 1) return;
    if (prime_z(n)) {
        out.push_back(n);
        return;
    }
    mpz_class d = rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

std::vector<mpz_class> prime_factors(const mpz_class& n0) {
    mpz_class n = abs(n0);
    std::vector<mpz_class> out;
    if (n == 0) return out;
    for (unsigned long q = 2; q < 20000 && q * q <= n; ++q) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), q)) {
            out.push_back(q);
            while (mpz_divisible_ui_p(n.get_mpz_t(), q)) n /= q;
        }
    }
    if (n > 1) factor_rec(n, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

mpz_class squarefree_kernel(const mpz_class& n) {
    if (n == 0) fail(Errc::domain, "squarefree kernel of zero");
    mpz_class k = n < 0 ? -1 : 1;
    for (const auto& q : prime_factors(n)) {
        mpz_class t = abs(n);
        long e = mpz_remove(t.get_mpz_t(), t.get_mpz_t(), q.get_mpz_t());
        if (e % 2) k *= q;
    }
    return k;
}

// ---------- scalar classes and Hilbert symbols ----------

static int eps2(long u) { return static_cast<int>(((u - 1) / 2) & 1); }
static int omega2(long u) { return static_cast<int>(((u * u - 1) / 8) & 1); }

std::vector<int> rational_class(const mpq_class& a, const Place& pl) {
    if (a == 0) fail(Errc::domain, "square class of zero");
    switch (pl.kind) {
        case Place::Finite: return scalar_class(Scalar(pl.base(), a), pl);
        case Place::Real: return {a < 0 ? 1 : 0};
        case Place::Global: return {is_square_q(a) ? 0 : 1};
        case Place::Padic: {
            long v = vp(a, pl.p);
            mpz_class pv = ipow(pl.p, std::labs(v));
            mpq_class u = v >= 0 ? mpq_class(a / mpq_class(pv)) : mpq_class(a * mpq_class(pv));
            long m = pl.p == 2 ? 8 : pl.p;
            mpz_class num = mpos(u.get_num(), m), den = mpos(u.get_den(), m);
            long r = static_cast<long>((__int128)num.get_si() * invmod_l(den.get_si(), m) % m);
            if (pl.p == 2) return {static_cast<int>(v & 1), eps2(r), omega2(r)};
            return {static_cast<int>(v & 1), legendre(r, pl.p) == 1 ? 0 : 1};
        }
    }
    return {};
}

std::vector<int> scalar_class(const Scalar& a, const Place& pl) {
    if (a.is_zero()) fail(Errc::domain, "square class of zero");
    const Base& b = a.base();
    switch (b.ring) {
        case Ring::Fp:
            if (b.p == 2) return {};
            return {legendre(a.residue(), b.p) == 1 ? 0 : 1};
        case Ring::Qp: {
            long v = a.val();
            if (b.p == 2) {
                if (a.rel() < 3) fail(Errc::precision, "need three bits of a 2-adic unit");
                long r = mpz_class(a.unit() % 8).get_si();
                return {static_cast<int>(v & 1), eps2(r), omega2(r)};
            }
            long r = mpz_class(a.unit() % b.p).get_si();
            return {static_cast<int>(v & 1), legendre(r, b.p) == 1 ? 0 : 1};
        }
        default: return rational_class(a.rational(), pl);
    }
}

int hilbert_q(const mpq_class& a, const mpq_class& b, long p) {
    if (a == 0 || b == 0) fail(Errc::domain, "Hilbert symbol of zero");
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    auto split = [p](const mpq_class& x, long& v, long& u) {
        v = vp(x, p);
        mpz_class pv = ipow(p, std::labs(v));
        mpq_class w = v >= 0 ? mpq_class(x / mpq_class(pv)) : mpq_class(x * mpq_class(pv));
        long m = p == 2 ? 8 : p;
        mpz_class num = mpos(w.get_num(), m), den = mpos(w.get_den(), m);
        u = static_cast<long>((__int128)num.get_si() * invmod_l(den.get_si(), m) % m);
    };
    long al, be, u, v;
    split(a, al, u);
    split(b, be, v);
    if (p == 2) {
        int e = eps2(u) * eps2(v) + static_cast<int>(al & 1) * omega2(v) + static_cast<int>(be & 1) * omega2(u);
        return (e & 1) ? -1 : 1;
    }
    int s = 1;
    if ((al & 1) && (be & 1) && ((p - 1) / 2) % 2) s = -s;
    if (be & 1) s *= static_cast<int>(legendre(u, p));
    if (al & 1) s *= static_cast<int>(legendre(v, p));
    return s;
}

int hilbert_symbol(const Scalar& a, const Scalar& b, const Place& pl) {
    if (a.is_zero() || b.is_zero()) fail(Errc::domain, "Hilbert symbol of zero");
    switch (pl.kind) {
        case Place::Finite: return 1;
        case Place::Real: return hilbert_q(a.rational(), b.rational(), 0);
        case Place::Global: fail(Errc::domain, "Hilbert symbol needs a local place");
        case Place::Padic:
            if (a.base().ring == Ring::Qp && pl.p == 2 && (a.rel() < 3 || b.rel() < 3))
                fail(Errc::precision, "need three bits of 2-adic units");
            return hilbert_q(a.rational(), b.rational(), pl.p);
    }
    return 1;
}

// ---------- square classes ----------

bool SquareClass::trivial() const {
    for (const auto& l : labels)
        for (int b : l)
            if (b) return false;
    return true;
}

bool SquareClass::norm_trivial() const {
    for (int b : norm)
        if (b) return false;
    return true;
}

SquareClass SquareClass::operator*(const SquareClass& o) const {
    if (place.kind == Place::Global) fail(Errc::domain, "global square classes are compared, not multiplied");
    SquareClass r = *this;
    for (size_t i = 0; i < labels.size(); ++i)
        for (size_t j = 0; j < labels[i].size(); ++j) r.labels[i][j] ^= o.labels[i][j];
    for (size_t j = 0; j < norm.size(); ++j) r.norm[j] ^= o.norm[j];
    return r;
}

std::string SquareClass::str() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < labels.size(); ++i) {
        if (i) os << "|";
        for (int b : labels[i]) os << b;
    }
    os << ")";
    return os.str();
}

bool is_square_in_field(const Poly& h0, const Poly& a0) {
    Base Q = Base::rationals();
    Poly h = h0.to_base(Q), a = a0.to_base(Q) % h;
    if (a.is_zero()) fail(Errc::domain, "zero is not a unit");
    int d = h.deg();
    if (d == 1) return is_square_q(eval(a, -h.c[0]).rational());
    EtaleAlgebra K;
    K.base = Q;
    K.f = h;
    if (!is_square_q(K.norm(a).rational())) return false;
    Poly x = Poly::x(Q);
    for (long s = 0; s < 64; ++s) {
        Mat M(Q, 2 * d, 2 * d);
        for (int i = 0; i < d; ++i) {
            Poly xi1 = K.reduce(Poly::monomial(Q, i + 1, Scalar(Q, s)));
            Poly xia = K.reduce(Poly::monomial(Q, i, Scalar(Q, 1L)) * a);
            for (int r = 0; r <= xi1.deg(); ++r) {
                M(r, i) += xi1.c[r];
                M(d + r, d + i) += xi1.c[r];
            }
            M(d + i, i) += Scalar(Q, 1L);
            for (int r = 0; r <= xia.deg(); ++r) M(r, d + i) += xia.c[r];
        }
        Poly P = charpoly(M);
        if (gcd(P, derivative(P)).deg() > 0) continue;
        for (auto& [g, m] : factor_q(P))
            if (g.deg() == d) return true;
        return false;
    }
    fail(Errc::internal, "no separating element for the square test");
}

namespace {

struct Alpha {
    long V = 0;
    ZP beta;  // integral, reduced mod gk, modulo p^W
};

Alpha to_local(const PadicFactor& pf, const Poly& a, long p) {
    std::vector<mpq_class> c = a.rationals();
    long V = kExactZero;
    for (size_t i = 0; i < c.size(); ++i) {
        long e = pf.scale * static_cast<long>(i);
        mpq_class sc = e >= 0 ? mpq_class(ipow(p, e)) : mpq_class(1, ipow(p, -e));
        c[i] *= sc;
        c[i].canonicalize();
        if (c[i] != 0) V = std::min(V, vp(c[i], p));
    }
    if (V == kExactZero) fail(Errc::domain, "square class of zero");
    mpz_class PW = ipow(p, pf.W);
    ZP b;
    for (auto& x : c) {
        mpq_class y = V >= 0 ? mpq_class(x / mpq_class(ipow(p, V))) : mpq_class(x * mpq_class(ipow(p, -V)));
        y.canonicalize();
        mpz_class inv, den = y.get_den();
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), PW.get_mpz_t());
        b.push_back(mpos(y.get_num() * inv, PW));
    }
    int D = static_cast<int>(pf.gk.size()) - 1;
    for (int i = static_cast<int>(b.size()) - 1; i >= D; --i) {
        mpz_class q = b[i];
        if (q == 0) continue;
        for (int j = 0; j <= D; ++j) b[i - D + j] = mpos(b[i - D + j] - q * pf.gk[j], PW);
    }
    b.resize(std::min<size_t>(b.size(), static_cast<size_t>(D)));
    while (!b.empty() && b.back() == 0) b.pop_back();
    return {V, b};
}

long zv(const mpz_class& x, long p, int cap) { return x == 0 ? cap : std::min<long>(vp(x, p), cap); }

fpx::FP to_fp_local(const ZP& a, long p) {
    fpx::FP r;
    for (const auto& x : a) r.push_back(mpos(x, mpz_class(p)).get_si());
    fpx::trim(r);
    return r;
}

std::vector<ZP> expand_local(const ZP& a, const ZP& phi, const mpz_class& PW) {
    std::vector<ZP> out;
    ZP cur = a;
    int d = static_cast<int>(phi.size()) - 1;
    while (!cur.empty()) {
        ZP q(cur.size() > static_cast<size_t>(d) ? cur.size() - d : 0, 0);
        for (int i = static_cast<int>(cur.size()) - 1; i >= d; --i) {
            mpz_class f = cur[i];
            q[i - d] = f;
            if (f != 0)
                for (int j = 0; j <= d; ++j) cur[i - d + j] = mpos(cur[i - d + j] - f * phi[j], PW);
        }
        cur.resize(std::min<size_t>(cur.size(), static_cast<size_t>(d)));
        while (!cur.empty() && cur.back() == 0) cur.pop_back();
        out.push_back(cur);
        while (!q.empty() && q.back() == 0) q.pop_back();
        cur = q;
    }
    return out;
}

int fq_nonsquare(const fpx::FP& r, const fpx::FP& mod, long p) {
    if (p == 2) return 0;
    mpz_class q = ipow(p, fpx::deg(mod));
    fpx::FP e = fpx::powmod(r, (q - 1) / 2, mod, p);
    return (e.size() == 1 && e[0] == 1) ? 0 : 1;
}

// (O/8)^x modulo squares for an unramified extension of Q2
struct DlogTable {
    int d = 0;
    std::map<std::vector<long>, int> bits;
    int rank = 0;
};

std::vector<long> mul8(const std::vector<long>& a, const std::vector<long>& b, const std::vector<long>& g) {
    int d = static_cast<int>(g.size()) - 1;
    std::vector<long> r(2 * d, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r[i + j] = (r[i + j] + a[i] * b[j]) & 7;
    for (int i = 2 * d - 1; i >= d; --i) {
        long q = r[i];
        if (!q) continue;
        for (int j = 0; j <= d; ++j) r[i - d + j] = ((r[i - d + j] - q * g[j]) % 8 + 8) & 7;
    }
    r.resize(d);
    return r;
}

const DlogTable& dlog_table(const std::vector<long>& g) {
    static std::mutex mu;
    static std::map<std::vector<long>, DlogTable> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(g);
    if (it != cache.end()) return it->second;
    DlogTable T;
    int d = static_cast<int>(g.size()) - 1;
    T.d = d;
    if (d > 6) fail(Errc::unsupported, "2-adic unramified degree too large for the unit table");
    long total = 1;
    for (int i = 0; i < d; ++i) total *= 8;
    std::vector<std::vector<long>> units;
    for (long idx = 0; idx < total; ++idx) {
        std::vector<long> v(d);
        long t = idx;
        bool odd = false;
        for (int i = 0; i < d; ++i) {
            v[i] = t & 7;
            t >>= 3;
            if (v[i] & 1) odd = true;
        }
        if (odd) units.push_back(v);
    }
    for (const auto& u : units) T.bits.emplace(mul8(u, u, g), 0);
    std::vector<std::vector<long>> H;
    for (auto& [k, b] : T.bits) H.push_back(k);
    for (const auto& u : units) {
        if (T.bits.count(u)) continue;
        std::vector<std::vector<long>> add;
        for (const auto& h : H) {
            auto prod = mul8(u, h, g);
            T.bits[prod] = T.bits[h] ^ (1 << T.rank);
            add.push_back(prod);
        }
        H.insert(H.end(), add.begin(), add.end());
        ++T.rank;
    }
    return cache.emplace(g, std::move(T)).first->second;
}

std::vector<int> padic_label(const PadicFactor& pf, const Poly& a, long p) {
    Alpha al = to_local(pf, a, p);
    int W = pf.W;
    mpz_class PW = ipow(p, W);
    switch (pf.kind) {
        case PadicFactor::Linear: {
            mpz_class val = 0;
            for (size_t i = al.beta.size(); i-- > 0;) val = mpos(val * pf.root + al.beta[i], PW);
            if (al.beta.empty()) val = 0;
            long w = zv(val, p, W);
            if (w >= W - (p == 2 ? 3 : 1)) fail(Errc::precision, "element vanishes at working precision");
            long v = al.V + w;
            mpz_class u = val / ipow(p, w);
            if (p == 2) {
                long r = mpos(u, 8).get_si();
                return {static_cast<int>(v & 1), eps2(r), omega2(r)};
            }
            return {static_cast<int>(v & 1), legendre(mpos(u, p).get_si(), p) == 1 ? 0 : 1};
        }
        case PadicFactor::Unramified: {
            long w = W;
            for (const auto& c : al.beta) w = std::min(w, zv(c, p, W));
            if (w >= W - (p == 2 ? 3 : 1)) fail(Errc::precision, "element vanishes at working precision");
            long v = al.V + w;
            mpz_class pw = ipow(p, w);
            if (p == 2) {
                std::vector<long> g8, u8(pf.gk.size() - 1, 0);
                for (const auto& c : pf.gk) g8.push_back(mpos(c, 8).get_si());
                for (size_t i = 0; i < al.beta.size(); ++i) u8[i] = mpos(al.beta[i] / pw, 8).get_si();
                const DlogTable& T = dlog_table(g8);
                std::vector<int> out{static_cast<int>(v & 1)};
                int bits = T.bits.at(u8);
                for (int i = 0; i < T.rank; ++i) out.push_back((bits >> i) & 1);
                return out;
            }
            fpx::FP r, gb;
            for (const auto& c : al.beta) r.push_back(mpos(c / pw, p).get_si());
            for (const auto& c : pf.gk) gb.push_back(mpos(c, p).get_si());
            fpx::trim(r);
            return {static_cast<int>(v & 1), fq_nonsquare(r, gb, p)};
        }
        case PadicFactor::OneSegment: {
            if (p == 2) fail(Errc::unsupported, "ramified square classes over Q2 are not supported");
            int D = static_cast<int>(pf.gk.size()) - 1;
            ZP b = al.beta;
            b.resize(static_cast<size_t>(D), 0);
            for (int i = 0; i < D; ++i)
                for (int j = D - 2; j >= i; --j) b[j] = mpos(b[j] + pf.shift * b[j + 1], PW);
            long M = kExactZero;
            std::vector<long> v(static_cast<size_t>(D));
            for (int i = 0; i < D; ++i) {
                v[i] = zv(b[i], p, W);
                if (b[i] != 0) M = std::min(M, pf.ep * v[i] + i * pf.h);
            }
            if (M == kExactZero) fail(Errc::precision, "element vanishes at working precision");
            int i0 = -1;
            fpx::FP psi;
            for (int i = 0; i < D; ++i) {
                if (b[i] == 0 || pf.ep * v[i] + i * pf.h != M) continue;
                if (i0 < 0) i0 = i;
                size_t k = static_cast<size_t>((i - i0) / pf.ep);
                if (psi.size() <= k) psi.resize(k + 1, 0);
                psi[k] = mpos(b[i] / ipow(p, v[i]), p).get_si();
            }
            fpx::trim(psi);
            long num = i0 - M * pf.s;
            if (num % pf.ep != 0) fail(Errc::internal, "uniformizer bookkeeping");
            long kexp = num / pf.ep - pf.s * al.V;
            fpx::FP z{0, 1};
            if (kexp < 0) {
                fpx::FP s, t;
                fpx::xgcd(z, pf.R, p, s, t);
                z = fpx::mod(s, pf.R, p);
                kexp = -kexp;
            }
            fpx::FP res = fpx::mod(fpx::mul(fpx::powmod(z, mpz_class(kexp), pf.R, p), psi, p), pf.R, p);
            long vk = pf.ep * al.V + M;
            return {static_cast<int>(vk & 1), fq_nonsquare(res, pf.R, p)};
        }
        case PadicFactor::General: {
            if (p == 2) fail(Errc::unsupported, "square classes over Q2 for this factor type are not supported");
            fqx::Field F{p, fpx::monic(to_fp_local(pf.phi, p), p)};
            std::vector<ZP> b = expand_local(al.beta, pf.phi, PW);
            long M = kExactZero;
            std::vector<long> v(b.size());
            for (size_t i = 0; i < b.size(); ++i) {
                v[i] = W;
                for (const auto& c : b[i]) v[i] = std::min(v[i], zv(c, p, W));
                if (v[i] < W) M = std::min(M, pf.ep * v[i] + static_cast<long>(i) * pf.h);
            }
            if (M == kExactZero || M >= pf.ep * (W - 1)) fail(Errc::precision, "element vanishes at working precision");
            long i0 = -1;
            fqx::PX poly;
            for (size_t i = 0; i < b.size(); ++i) {
                if (v[i] >= W || pf.ep * v[i] + static_cast<long>(i) * pf.h != M) continue;
                if (i0 < 0) i0 = static_cast<long>(i);
                size_t k = static_cast<size_t>((static_cast<long>(i) - i0) / pf.ep);
                if (poly.size() <= k) poly.resize(k + 1);
                ZP c = b[i];
                mpz_class pv = ipow(p, v[i]);
                for (auto& x : c) x /= pv;
                poly[k] = fpx::mod(to_fp_local(c, p), F.m, p);
            }
            fqx::trim(poly);
            long num = i0 - M * pf.s;
            if (num % pf.ep != 0) fail(Errc::internal, "uniformizer bookkeeping");
            long kexp = num / pf.ep - pf.s * al.V;
            mpz_class Q = 1;
            for (int i = 0; i < fqx::deg(pf.psi); ++i) Q *= F.q();
            mpz_class ex = kexp % (Q - 1);
            if (ex < 0) ex += Q - 1;
            fqx::PX z{fqx::E{}, fqx::E{1}};
            fqx::PX res = fqx::mod(F, fqx::mul(F, fqx::powmod(F, z, ex, pf.psi), poly), pf.psi);
            long vk = pf.ep * al.V + M;
            return {static_cast<int>(vk & 1), fqx::is_square(F, pf.psi, res) ? 0 : 1};
        }
    }
    return {};
}

int real_sign(const Poly& f, RealRoot r, const Poly& a) {
    Base Q = Base::rationals();
    Poly fq = f.to_base(Q), aq = a.to_base(Q);
    Poly g = gcd(fq, aq);
    if (g.deg() > 0 && sturm_count(g, r.lo, r.hi) > 0) fail(Errc::domain, "element vanishes at a real root");
    int slo = sign_at(fq, r.lo);
    while (sturm_count(aq, r.lo, r.hi) > 0) {
        mpq_class mid = (r.lo + r.hi) / 2;
        int sm = sign_at(fq, mid);
        if (sm == 0) return sign_at(aq, mid);
        if (sm == slo) r.lo = mid;
        else r.hi = mid;
    }
    return sign_at(aq, r.hi);
}

}  // namespace

SquareClass square_class(const EtaleAlgebra& L, const Poly& a0) {
    SquareClass sc;
    sc.place = Place::of(L.base);
    Poly a = L.reduce(a0);
    if (a.is_zero()) fail(Errc::domain, "square class of zero");
    for (const auto& fc : L.factors) {
        switch (fc.kind) {
            case Factor::Exact: {
                Poly comp = a % fc.g;
                if (comp.is_zero()) fail(Errc::domain, "element is not a unit");
                if (L.base.ring == Ring::Q) {
                    sc.labels.push_back({is_square_in_field(fc.g, comp) ? 0 : 1});
                } else {
                    long p = L.base.p;
                    fpx::FP r, g;
                    for (const auto& x : comp.c) r.push_back(x.residue());
                    for (const auto& x : fc.g.c) g.push_back(x.residue());
                    if (p == 2) sc.labels.push_back({});
                    else sc.labels.push_back({fq_nonsquare(r, g, p)});
                }
                break;
            }
            case Factor::Padic: sc.labels.push_back(padic_label(fc.pad, a, L.base.p)); break;
            case Factor::RealLine: sc.labels.push_back({real_sign(L.f, fc.root, a) < 0 ? 1 : 0}); break;
            case Factor::ComplexPair: sc.labels.push_back({}); break;
        }
    }
    Scalar N = L.norm(a);
    if (N.is_zero()) fail(Errc::domain, "element is not a unit");
    sc.norm = scalar_class(N, sc.place);
    return sc;
}

}  // namespace orbitlab
