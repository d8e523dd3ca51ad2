#include "orbitlab/factor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <tuple>

#include "orbitlab/etale.hpp"
#include "orbitlab/matrix.hpp"

namespace orbitlab {

namespace fpx {

void trim(FP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const FP& a) { return static_cast<int>(a.size()) - 1; }

FP add(const FP& a, const FP& b, long p) {
    FP r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % p;
    trim(r);
    return r;
}

FP sub(const FP& a, const FP& b, long p) {
    FP r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = ((r[i] - b[i]) % p + p) % p;
    trim(r);
    return r;
}

FP mul(const FP& a, const FP& b, long p) {
    if (a.empty() || b.empty()) return {};
    std::vector<__int128> acc(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + (__int128)a[i] * b[j]) % p;
    }
    FP r(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<long>(acc[i]);
    trim(r);
    return r;
}

std::pair<FP, FP> divmod(const FP& a, const FP& b, long p) {
    if (b.empty()) fail(Errc::domain, "division by zero polynomial mod p");
    FP r = a;
    trim(r);
    int db = deg(b);
    if (deg(r) < db) return {{}, r};
    FP q(static_cast<size_t>(deg(r) - db) + 1, 0);
    long il = invmod_l(b.back(), p);
    for (int i = deg(r); i >= db; --i) {
        long f = static_cast<long>((__int128)r[i] * il % p);
        q[i - db] = f;
        if (f)
            for (int j = 0; j <= db; ++j)
                r[i - db + j] = static_cast<long>(((r[i - db + j] - (__int128)f * b[j]) % p + p) % p);
    }
    r.resize(db);
    trim(r);
    trim(q);
    return {q, r};
}

FP mod(const FP& a, const FP& b, long p) { return divmod(a, b, p).second; }

FP monic(const FP& a, long p) {
    if (a.empty()) return a;
    long il = invmod_l(a.back(), p);
    FP r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<long>((__int128)a[i] * il % p);
    return r;
}

FP gcd(const FP& a, const FP& b, long p) {
    FP x = a, y = b;
    trim(x);
    trim(y);
    while (!y.empty()) {
        FP r = mod(x, y, p);
        x = std::move(y);
        y = std::move(r);
    }
    return monic(x, p);
}

FP xgcd(const FP& a, const FP& b, long p, FP& s, FP& t) {
    FP r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
    trim(r0);
    trim(r1);
    while (!r1.empty()) {
        auto [q, r] = divmod(r0, r1, p);
        FP s2 = sub(s0, mul(q, s1, p), p), t2 = sub(t0, mul(q, t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    long il = invmod_l(r0.back(), p);
    FP c{il};
    s = mul(s0, c, p);
    t = mul(t0, c, p);
    return monic(r0, p);
}

FP powmod(const FP& a, const mpz_class& e, const FP& m, long p) {
    FP r = mod(FP{1}, m, p), b = mod(a, m, p);
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return r;
    for (size_t i = bits; i-- > 0;) {
        r = mod(mul(r, r, p), m, p);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mod(mul(r, b, p), m, p);
    }
    return r;
}

FP deriv(const FP& a, long p) {
    FP r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(static_cast<long>((__int128)a[i] * (static_cast<long>(i) % p) % p));
    trim(r);
    return r;
}

long eval(const FP& a, long x, long p) {
    __int128 r = 0;
    for (size_t i = a.size(); i-- > 0;) r = (r * x + a[i]) % p;
    return static_cast<long>((r + p) % p);
}

namespace {

FP pth_root(const FP& f, long p) {
    FP g;
    for (size_t i = 0; i < f.size(); i += static_cast<size_t>(p)) g.push_back(f[i]);
    trim(g);
    return g;
}

void sqf_rec(const FP& f, int m, long p, std::vector<std::pair<FP, int>>& out) {
    if (deg(f) <= 0) return;
    FP d = deriv(f, p);
    if (d.empty()) {
        sqf_rec(pth_root(f, p), m * static_cast<int>(p), p, out);
        return;
    }
    FP c = gcd(f, d, p);
    FP w = divmod(f, c, p).first;
    int i = 1;
    while (deg(w) > 0) {
        FP y = gcd(w, c, p);
        FP z = divmod(w, y, p).first;
        if (deg(z) > 0) out.push_back({monic(z, p), i * m});
        ++i;
        w = y;
        c = divmod(c, y, p).first;
    }
    if (deg(c) > 0) sqf_rec(pth_root(c, p), m * static_cast<int>(p), p, out);
}

std::vector<std::pair<FP, int>> ddf(const FP& g, long p) {
    std::vector<std::pair<FP, int>> res;
    FP rem = g, x{0, 1};
    FP h = mod(x, rem, p);
    int d = 0;
    while (deg(rem) >= 2 * (d + 1)) {
        ++d;
        h = powmod(h, mpz_class(p), rem, p);
        FP t = gcd(sub(h, x, p), rem, p);
        if (deg(t) > 0) {
            res.push_back({t, d});
            rem = divmod(rem, t, p).first;
            h = mod(h, rem, p);
        }
    }
    if (deg(rem) > 0) res.push_back({monic(rem, p), deg(rem)});
    return res;
}

void edf(const FP& g, int d, long p, std::mt19937_64& rng, std::vector<FP>& out) {
    if (deg(g) == d) {
        out.push_back(monic(g, p));
        return;
    }
    int n = deg(g);
    mpz_class q = ipow(p, d);
    for (int tries = 0; tries < 10000; ++tries) {
        FP a(static_cast<size_t>(n), 0);
        for (auto& x : a) x = static_cast<long>(rng() % static_cast<uint64_t>(p));
        trim(a);
        if (deg(a) < 1) continue;
        FP b;
        if (p == 2) {
            FP s = a, cur = a;
            for (int i = 1; i < d; ++i) {
                cur = mod(mul(cur, cur, p), g, p);
                s = add(s, cur, p);
            }
            b = s;
        } else {
            b = sub(powmod(a, (q - 1) / 2, g, p), FP{1}, p);
        }
        FP t = gcd(b, g, p);
        if (deg(t) > 0 && deg(t) < n) {
            edf(t, d, p, rng, out);
            edf(divmod(g, t, p).first, d, p, rng, out);
            return;
        }
    }
    fail(Errc::internal, "equal-degree splitting did not converge");
}

}  // namespace

std::vector<std::pair<FP, int>> factor(const FP& f0, long p) {
    FP f = monic(f0, p);
    std::vector<std::pair<FP, int>> sq, out;
    sqf_rec(f, 1, p, sq);
    std::mt19937_64 rng(0xA5EED);
    for (auto& [g, m] : sq) {
        for (auto& [h, d] : ddf(g, p)) {
            std::vector<FP> parts;
            edf(h, d, p, rng, parts);
            for (auto& part : parts) out.push_back({part, m});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    return out;
}

bool is_irreducible(const FP& f, long p) {
    auto fac = factor(f, p);
    return fac.size() == 1 && fac[0].second == 1;
}

}  // namespace fpx

// ---------- integer polynomials ----------

namespace {

void ztrim(ZP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

mpz_class mpos(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

ZP zreduce(const ZP& a, const mpz_class& m) {
    ZP r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mpos(a[i], m);
    ztrim(r);
    return r;
}

ZP zmul(const ZP& a, const ZP& b) {
    if (a.empty() || b.empty()) return {};
    ZP r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    ztrim(r);
    return r;
}

ZP zsub(const ZP& a, const ZP& b) {
    ZP r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    ztrim(r);
    return r;
}

ZP from_fp(const fpx::FP& a) {
    ZP r;
    for (long x : a) r.emplace_back(x);
    return r;
}

fpx::FP to_fp(const ZP& a, long p) {
    fpx::FP r;
    mpz_class pm = p;
    for (const auto& x : a) r.push_back(mpos(x, pm).get_si());
    fpx::trim(r);
    return r;
}

mpz_class zcontent(const ZP& a) {
    mpz_class g = 0;
    for (const auto& x : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

ZP zprimitive(const ZP& a) {
    ZP r = a;
    ztrim(r);
    if (r.empty()) return r;
    mpz_class g = zcontent(r);
    if (r.back() < 0) g = -g;
    for (auto& x : r) x /= g;
    return r;
}

// exact division over Z; false if G does not divide F
bool zdivexact(const ZP& F, const ZP& G, ZP& Q) {
    ZP r = F;
    ztrim(r);
    int dg = static_cast<int>(G.size()) - 1;
    int dr = static_cast<int>(r.size()) - 1;
    if (dr < dg) return r.empty() && (Q = ZP{}, true);
    Q.assign(static_cast<size_t>(dr - dg) + 1, 0);
    for (int i = dr; i >= dg; --i) {
        if (r[i] == 0) continue;
        if (!mpz_divisible_p(r[i].get_mpz_t(), G.back().get_mpz_t())) return false;
        mpz_class f = r[i] / G.back();
        Q[i - dg] = f;
        for (int j = 0; j <= dg; ++j) r[i - dg + j] -= f * G[j];
    }
    ztrim(r);
    ztrim(Q);
    return r.empty();
}

ZP zshift(const ZP& a, const mpz_class& r) {
    ZP b = a;
    int n = static_cast<int>(b.size());
    for (int i = 0; i < n; ++i)
        for (int j = n - 2; j >= i; --j) b[j] += r * b[j + 1];
    return b;
}

mpz_class zeval(const ZP& a, const mpz_class& x, const mpz_class& m) {
    mpz_class r = 0;
    for (size_t i = a.size(); i-- > 0;) r = mpos(r * x + a[i], m);
    return r;
}

ZP zderiv(const ZP& a) {
    ZP r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<long>(i));
    ztrim(r);
    return r;
}

std::pair<ZP, ZP> lift_pair(const ZP& F, const fpx::FP& g0, const fpx::FP& h0, long p, int k) {
    mpz_class lc = F.back();
    fpx::FP s, t;
    fpx::FP g1 = fpx::xgcd(g0, h0, p, s, t);
    if (fpx::deg(g1) != 0) fail(Errc::internal, "Hensel factors not coprime");
    long lcinv = invmod_l(mpos(lc, mpz_class(p)).get_si(), p);
    ZP g = from_fp(g0), h = from_fp(h0);
    mpz_class pj = p;
    for (int j = 1; j < k; ++j) {
        ZP E = zsub(F, zmul(ZP{lc}, zmul(g, h)));
        ZP Ej;
        for (auto& x : E) {
            if (!mpz_divisible_p(x.get_mpz_t(), pj.get_mpz_t())) fail(Errc::internal, "Hensel invariant broken");
            Ej.push_back(x / pj);
        }
        fpx::FP e = fpx::mul(to_fp(Ej, p), fpx::FP{lcinv}, p);
        fpx::FP dg = fpx::mod(fpx::mul(e, t, p), g0, p);
        fpx::FP dh = fpx::mod(fpx::mul(e, s, p), h0, p);
        for (size_t i = 0; i < dg.size(); ++i) g[i] += pj * dg[i];
        for (size_t i = 0; i < dh.size(); ++i) h[i] += pj * dh[i];
        pj *= p;
    }
    mpz_class m = ipow(p, k);
    return {zreduce(g, m), zreduce(h, m)};
}

}  // namespace

std::vector<ZP> hensel_lift(const ZP& F, const std::vector<fpx::FP>& facs, long p, int k) {
    mpz_class m = ipow(p, k);
    if (facs.size() == 1) {
        mpz_class inv;
        mpz_class lc = mpos(F.back(), m);
        mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), m.get_mpz_t());
        ZP r;
        for (const auto& x : F) r.push_back(mpos(x * inv, m));
        return {r};
    }
    size_t half = facs.size() / 2;
    fpx::FP G{1}, H{1};
    for (size_t i = 0; i < half; ++i) G = fpx::mul(G, facs[i], p);
    for (size_t i = half; i < facs.size(); ++i) H = fpx::mul(H, facs[i], p);
    auto [g, h] = lift_pair(F, G, H, p, k);
    std::vector<fpx::FP> fa(facs.begin(), facs.begin() + static_cast<long>(half));
    std::vector<fpx::FP> fb(facs.begin() + static_cast<long>(half), facs.end());
    auto ra = hensel_lift(g, fa, p, k);
    auto rb = hensel_lift(h, fb, p, k);
    ra.insert(ra.end(), rb.begin(), rb.end());
    return ra;
}

std::vector<ZP> factor_z_squarefree(const ZP& f0) {
    ZP F = zprimitive(f0);
    int n = static_cast<int>(F.size()) - 1;
    if (n <= 1) return {F};
    mpz_class lc = F.back();
    long best_p = 0;
    std::vector<std::pair<fpx::FP, int>> best;
    int good = 0;
    for (long p = 3; good < 6; p += 2) {
        if (!is_prime_l(static_cast<uint64_t>(p))) continue;
        if (mpz_divisible_ui_p(lc.get_mpz_t(), static_cast<unsigned long>(p))) continue;
        fpx::FP fb = to_fp(F, p);
        if (fpx::deg(fpx::gcd(fb, fpx::deriv(fb, p), p)) != 0) continue;
        auto fac = fpx::factor(fb, p);
        ++good;
        if (best_p == 0 || fac.size() < best.size()) {
            best_p = p;
            best = fac;
        }
        if (best.size() == 1) return {F};
    }
    long p = best_p;
    mpz_class norm2 = 0;
    for (const auto& x : F) norm2 += x * x;
    mpz_class nr;
    mpz_sqrt(nr.get_mpz_t(), norm2.get_mpz_t());
    mpz_class B = (nr + 1) * ipow(2, n) * abs(lc) * 2;
    int k = 1;
    mpz_class pk = p;
    while (pk <= B) { pk *= p; ++k; }
    std::vector<fpx::FP> facs;
    for (auto& [g, mult] : best) facs.push_back(g);
    std::vector<ZP> lifted = hensel_lift(F, facs, p, k);
    mpz_class half = pk / 2;
    std::vector<ZP> out;
    std::vector<int> active(lifted.size());
    std::iota(active.begin(), active.end(), 0);
    size_t s = 1;
    while (2 * s <= active.size()) {
        bool found = false;
        std::vector<size_t> idx(s);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            ZP G{F.back()};
            for (size_t i : idx) G = zreduce(zmul(G, lifted[active[i]]), pk);
            for (auto& x : G)
                if (x > half) x -= pk;
            G = zprimitive(G);
            ZP Q;
            if (!G.empty() && mpz_divisible_p(F[0].get_mpz_t(), G[0] == 0 ? F[0].get_mpz_t() : G[0].get_mpz_t()) &&
                zdivexact(F, G, Q)) {
                out.push_back(G);
                F = zprimitive(Q);
                std::vector<int> rest;
                for (size_t i = 0; i < active.size(); ++i)
                    if (std::find(idx.begin(), idx.end(), i) == idx.end()) rest.push_back(active[i]);
                active = rest;
                found = true;
                break;
            }
            int pos = static_cast<int>(s) - 1;
            while (pos >= 0 && idx[pos] == active.size() - s + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (size_t j = pos + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++s;
    }
    if (F.size() > 1) out.push_back(F);
    return out;
}

std::vector<std::pair<Poly, int>> factor_fp(const Poly& f) {
    long p = f.b.p;
    fpx::FP a;
    for (const auto& x : f.c) a.push_back(x.residue());
    std::vector<std::pair<Poly, int>> out;
    for (auto& [g, m] : fpx::factor(a, p)) {
        std::vector<long> v(g.begin(), g.end());
        out.push_back({Poly::from_ints(f.b, v), m});
    }
    return out;
}

namespace {

ZP to_primitive_z(const Poly& f) {
    mpz_class l = 1;
    for (const auto& x : f.c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.rational().get_den().get_mpz_t());
    ZP z;
    for (const auto& x : f.c) {
        mpq_class v = x.rational() * l;
        z.push_back(v.get_num());
    }
    return zprimitive(z);
}

Poly z_to_monic(const Base& b, const ZP& z) {
    std::vector<Scalar> c;
    for (const auto& x : z) c.emplace_back(b, mpq_class(x, z.back()));
    return Poly(b, c);
}

}  // namespace

std::vector<std::pair<Poly, int>> factor_q(const Poly& f) {
    if (f.deg() < 1) return {};
    Poly a = make_monic(f);
    std::vector<std::pair<Poly, int>> sq;
    Poly d = derivative(a);
    Poly a0 = gcd(a, d);
    Poly b = divmod(a, a0).first, c = divmod(d, a0).first;
    Poly dd = c - derivative(b);
    for (int i = 1; b.deg() > 0; ++i) {
        Poly ai = gcd(b, dd);
        b = divmod(b, ai).first;
        c = divmod(dd, ai).first;
        dd = c - derivative(b);
        if (ai.deg() > 0) sq.push_back({ai, i});
    }
    std::vector<std::pair<Poly, int>> out;
    for (auto& [g, m] : sq) {
        for (auto& z : factor_z_squarefree(to_primitive_z(g))) out.push_back({z_to_monic(f.b, z), m});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first.deg() != y.first.deg()) return x.first.deg() < y.first.deg();
        return x.first.str() < y.first.str();
    });
    return out;
}

// ---------- p-adic factorization ----------

namespace {

struct PadicCtx {
    long p;
    int W;
    mpz_class PW;
};

long zval(const mpz_class& x, long p, int cap) {
    if (x == 0) return cap;
    return std::min<long>(vp(x, p), cap);
}

std::vector<long> fp_roots(const fpx::FP& g, long p) {
    std::vector<long> r;
    if (g.empty()) return r;
    if (p < 5000) {
        for (long x = 0; x < p; ++x)
            if (fpx::eval(g, x, p) == 0) r.push_back(x);
        return r;
    }
    for (auto& [h, m] : fpx::factor(g, p))
        if (fpx::deg(h) == 1) r.push_back((p - h[0]) % p);
    std::sort(r.begin(), r.end());
    return r;
}

// roots of G in Z_p, G known mod p^kp; roots returned as a + p^depth * y
void roots_rec(const ZP& G, int kp, const mpz_class& a, long depth, const PadicCtx& cx, std::vector<mpz_class>& out) {
    long p = cx.p;
    if (kp <= 1) fail(Errc::precision, "p-adic root isolation exhausted working precision");
    fpx::FP gb = to_fp(G, p);
    if (gb.empty()) fail(Errc::precision, "p-adic root isolation lost the polynomial");
    fpx::FP gd = fpx::deriv(gb, p);
    mpz_class mk = ipow(p, kp);
    for (long r : fp_roots(gb, p)) {
        if (fpx::eval(gd, r, p) != 0) {
            mpz_class y = r;
            ZP Gd = zderiv(G);
            for (int it = 0; it < 2 * kp + 4; ++it) {
                mpz_class v = zeval(G, y, mk);
                if (v == 0) break;
                mpz_class d = zeval(Gd, y, mk), inv;
                mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), mk.get_mpz_t());
                y = mpos(y - v * inv, mk);
            }
            out.push_back(a + ipow(p, depth) * y);
        } else {
            ZP G1 = zshift(G, mpz_class(r));
            mpz_class pi = 1;
            for (auto& x : G1) { x = mpos(x * pi, mk); pi *= p; }
            long c = kp;
            for (const auto& x : G1) c = std::min(c, zval(x, p, kp));
            if (c >= kp) fail(Errc::precision, "p-adic root cluster below working precision");
            mpz_class pc = ipow(p, c);
            for (auto& x : G1) x /= pc;
            ztrim(G1);
            roots_rec(G1, kp - static_cast<int>(c), a + ipow(p, depth) * r, depth + 1, cx, out);
        }
    }
}

void one_segment(const ZP& G, long a0, const PadicCtx& cx, PadicFactor& pf) {
    long p = cx.p;
    int D = static_cast<int>(G.size()) - 1;
    mpz_class a = a0;
    for (int iter = 0; iter <= cx.W; ++iter) {
        ZP H = zreduce(zshift(G, a), cx.PW);
        H.resize(static_cast<size_t>(D) + 1, 0);
        std::vector<long> v(static_cast<size_t>(D) + 1);
        for (int i = 0; i <= D; ++i) v[i] = zval(H[i], p, cx.W);
        long v0 = v[0];
        if (v0 >= cx.W) fail(Errc::precision, "ramified block constant term below working precision");
        for (int i = 1; i < D; ++i)
            if (v[i] * D < v0 * (D - i)) fail(Errc::unsupported, "p-adic block with several slopes needs refinement");
        long g = std::gcd(v0, static_cast<long>(D));
        long h = v0 / g, ep = D / g, ell = g;
        fpx::FP R(static_cast<size_t>(ell) + 1, 0);
        for (long k = 0; k <= ell; ++k) {
            long i = ep * k, expect = v0 - h * k;
            if (v[i] == expect) R[k] = mpos(H[i] / ipow(p, expect), mpz_class(p)).get_si();
        }
        fpx::trim(R);
        auto fac = fpx::factor(R, p);
        if (fac.size() == 1 && fac[0].second == 1) {
            pf.kind = PadicFactor::OneSegment;
            pf.shift = a;
            pf.h = h;
            pf.ep = ep;
            pf.ell = ell;
            pf.R = R;
            pf.e = static_cast<int>(ep);
            pf.f = static_cast<int>(ell);
            long s0 = 1, s1 = 0, r0 = h, r1 = ep, t0 = 0, t1 = 1;
            while (r1) {
                long q = r0 / r1;
                std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
                std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
                std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
            }
            pf.s = s0;
            pf.t = t0;
            return;
        }
        if (ep == 1 && fac.size() == 1 && fpx::deg(fac[0].first) == 1) {
            long rho = (p - fac[0].first[0]) % p;
            a += mpz_class(rho) * ipow(p, h);
            continue;
        }
        fail(Errc::unsupported, "p-adic block with reducible residual polynomial needs refinement");
    }
    fail(Errc::precision, "p-adic re-centering did not terminate");
}

void bezout(long h, long e, long& s, long& t) {
    long s0 = 1, s1 = 0, r0 = h, r1 = e, t0 = 0, t1 = 1;
    while (r1) {
        long q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
        std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
    }
    s = s0;
    t = t0;
}

std::pair<ZP, ZP> zdivmod_monic(const ZP& a, const ZP& b, const mpz_class& m) {
    ZP r = zreduce(a, m);
    ztrim(r);
    int db = static_cast<int>(b.size()) - 1;
    if (static_cast<int>(r.size()) - 1 < db) return {{}, r};
    ZP q(r.size() - static_cast<size_t>(db), 0);
    for (int i = static_cast<int>(r.size()) - 1; i >= db; --i) {
        mpz_class f = r[i];
        q[i - db] = f;
        if (f != 0)
            for (int j = 0; j <= db; ++j) r[i - db + j] = mpos(r[i - db + j] - f * b[j], m);
    }
    r.resize(static_cast<size_t>(db));
    ztrim(r);
    ztrim(q);
    return {q, r};
}

std::vector<ZP> zexpand(const ZP& G, const ZP& phi, const mpz_class& m) {
    std::vector<ZP> out;
    ZP cur = zreduce(G, m);
    ztrim(cur);
    while (!cur.empty()) {
        auto [q, r] = zdivmod_monic(cur, phi, m);
        out.push_back(r);
        cur = q;
    }
    return out;
}

long zminval(const ZP& a, long p, int W) {
    long v = W;
    for (const auto& x : a) v = std::min(v, zval(x, p, W));
    return v;
}

fqx::E fq_residue(const ZP& a, long shift, const fqx::Field& F) {
    ZP b = a;
    mpz_class ps = ipow(F.p, shift);
    for (auto& x : b) x /= ps;
    return fpx::mod(to_fp(b, F.p), F.m, F.p);
}

struct PhiType {
    long h = 0, e = 1;
    fqx::PX R, psi;
    int mult = 1;
};

std::vector<PhiType> phi_types(const ZP& G, const ZP& phi, const fqx::Field& F, const PadicCtx& cx) {
    long p = cx.p;
    std::vector<ZP> a = zexpand(G, phi, cx.PW);
    int m = static_cast<int>(a.size()) - 1;
    std::vector<long> v(static_cast<size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) v[i] = zminval(a[i], p, cx.W);
    if (v[0] >= cx.W) fail(Errc::precision, "key polynomial divides the block to working precision");
    std::vector<PhiType> out;
    int cur = 0;
    while (cur < m) {
        int best = -1;
        for (int j = cur + 1; j <= m; ++j) {
            if (v[j] >= cx.W) continue;
            if (best < 0) {
                best = j;
                continue;
            }
            long lhs = (v[j] - v[cur]) * (best - cur), rhs = (v[best] - v[cur]) * (j - cur);
            if (lhs <= rhs) best = j;
        }
        long dv = v[cur] - v[best], di = best - cur;
        if (dv <= 0) fail(Errc::internal, "block is not a power of the key polynomial modulo p");
        long g = std::gcd(dv, di);
        PhiType side;
        side.h = dv / g;
        side.e = di / g;
        side.R.assign(static_cast<size_t>(g) + 1, {});
        for (long k = 0; k <= g; ++k) {
            long i = cur + side.e * k, expect = v[cur] - side.h * k;
            if (v[i] == expect) side.R[k] = fq_residue(a[i], expect, F);
        }
        fqx::trim(side.R);
        for (auto& [psi, mu] : fqx::factor(F, side.R)) {
            PhiType t = side;
            t.psi = psi;
            t.mult = mu;
            out.push_back(t);
        }
        cur = best;
    }
    return out;
}

Poly zpoly(const Base& b, const ZP& z) {
    std::vector<Scalar> c;
    for (const auto& x : z) c.emplace_back(b, x);
    return Poly(b, c);
}

ZP component(const ZP& G, const ZP& phi, const PhiType& T, const std::vector<PhiType>& all, const fqx::Field& F,
             const PadicCtx& cx, int degree) {
    long p = cx.p;
    int D = static_cast<int>(G.size()) - 1;
    Base b = Base::qp(p, 2 * cx.W + 16);
    EtaleAlgebra A;
    A.base = b;
    A.f = zpoly(b, G);
    Poly theta = Scalar(b, mpq_class(1, ipow(p, T.h))) * A.pow(zpoly(b, phi), T.e);
    fqx::E c;
    mpz_class q = F.q();
    for (long idx = 1; mpz_class(idx) < q && idx < 100000; ++idx) {
        fqx::E cand;
        for (long t = idx; t > 0; t /= p) cand.push_back(t % p);
        if (!fqx::eval(F, T.R, fpx::sub({}, cand, p)).empty()) {
            c = cand;
            break;
        }
    }
    if (c.empty()) fail(Errc::unsupported, "no separating constant for the p-adic residual polynomial");
    Poly num(b);
    for (size_t k = T.psi.size(); k-- > 0;) num = A.mul(num, theta) + zpoly(b, from_fp(T.psi[k]));
    Poly den = A.reduce(zpoly(b, from_fp(c)) + theta);
    Poly beta = A.mul(num, A.pow(A.inv(den), fqx::deg(T.psi)));
    long fl = 1;
    for (const auto& o : all) fl = std::lcm(fl, static_cast<long>(F.k() * fqx::deg(o.psi)));
    Poly e = A.reduce(A.one() - powmod(beta, ipow(p, fl) - 1, A.f));
    int iters = 4;
    for (long w = 1; w < 4L * cx.W * D; w *= 2) ++iters;
    Scalar three(b, 3L), two(b, 2L);
    for (int it = 0; it < iters; ++it) {
        Poly e2 = A.mul(e, e);
        e = A.reduce(three * e2 - two * A.mul(e2, e));
    }
    Scalar tr = A.trace(e) - Scalar(b, static_cast<long>(degree));
    if (!tr.is_zero() && tr.val() < cx.W) fail(Errc::precision, "p-adic idempotent lost precision");
    Poly P = charpoly(A.mult_matrix(A.mul(A.gamma(), e)));
    ZP out;
    for (int i = D - degree; i <= D; ++i) {
        Scalar x = P[i];
        if (x.is_zero()) {
            if (x.absprec() < cx.W) fail(Errc::precision, "p-adic factor coefficient below working precision");
            out.push_back(0);
            continue;
        }
        if (x.val() < 0 || x.absprec() < cx.W) fail(Errc::precision, "p-adic factor coefficient below working precision");
        mpq_class r = x.rational();
        mpz_class inv, den2 = r.get_den();
        mpz_invert(inv.get_mpz_t(), den2.get_mpz_t(), cx.PW.get_mpz_t());
        out.push_back(mpos(r.get_num() * inv, cx.PW));
    }
    return out;
}

void split_block(const ZP& G, const ZP& phi, const PadicCtx& cx, std::vector<PadicFactor>& out, int depth) {
    long p = cx.p;
    if (depth > 4 * cx.W) fail(Errc::precision, "p-adic refinement did not terminate");
    fqx::Field F{p, fpx::monic(to_fp(phi, p), p)};
    std::vector<PhiType> types = phi_types(G, phi, F, cx);
    int dphi = static_cast<int>(phi.size()) - 1, D = static_cast<int>(G.size()) - 1;
    if (types.size() == 1) {
        const PhiType& T = types[0];
        if (T.mult == 1) {
            PadicFactor pf;
            pf.gk = G;
            pf.W = cx.W;
            if (D == dphi) {
                pf.kind = PadicFactor::Unramified;
                pf.e = 1;
                pf.f = dphi;
            } else {
                pf.kind = PadicFactor::General;
                pf.h = T.h;
                pf.ep = T.e;
                pf.ell = 1;
                pf.e = static_cast<int>(T.e);
                pf.f = dphi * fqx::deg(T.psi);
                bezout(T.h, T.e, pf.s, pf.t);
                pf.phi = phi;
                pf.psi = T.psi;
            }
            if (pf.e * pf.f != D) fail(Errc::internal, "p-adic type degree mismatch");
            out.push_back(pf);
            return;
        }
        if (T.e == 1 && fqx::deg(T.psi) == 1) {
            fpx::FP rho = fpx::sub({}, T.psi[0], p);
            ZP next = phi;
            mpz_class ph = ipow(p, T.h);
            for (size_t i = 0; i < rho.size(); ++i) next[i] = mpos(next[i] - ph * rho[i], cx.PW);
            split_block(G, next, cx, out, depth + 1);
            return;
        }
        fail(Errc::unsupported, "p-adic block needs a second-order type");
    }
    int total = 0;
    for (const auto& T : types) {
        int degree = static_cast<int>(T.e) * fqx::deg(T.psi) * T.mult * dphi;
        total += degree;
        split_block(component(G, phi, T, types, F, cx, degree), phi, cx, out, depth + 1);
    }
    if (total != D) fail(Errc::internal, "p-adic type degrees do not add up");
}

}  // namespace

std::vector<PadicFactor> factor_qp(const Poly& f, long p, int prec) {
    Base qb = Base::qp(p, prec);
    Poly fm = f;
    if (!fm.lc().is_one()) fm = make_monic(fm);
    std::vector<mpq_class> a = fm.rationals();
    int n = static_cast<int>(a.size()) - 1;
    if (n < 1) return {};
    long k = kExactZero;
    for (int i = 1; i <= n; ++i) {
        const mpq_class& ai = a[n - i];
        if (ai == 0) continue;
        long v = vp(ai, p);
        long fl = v >= 0 ? v / i : -((-v + i - 1) / i);
        k = std::min(k, fl);
    }
    if (k == kExactZero) k = 0;
    std::vector<mpq_class> Fq(a.size());
    for (int i = 0; i <= n; ++i) {
        long e = -k * (n - i);
        mpq_class sc = e >= 0 ? mpq_class(ipow(p, e)) : mpq_class(1, ipow(p, -e));
        sc.canonicalize();
        Fq[i] = a[i] * sc;
        Fq[i].canonicalize();
    }
    Poly Fpoly = Poly::from_rationals(Base::rationals(), Fq);
    long vd = n > 1 ? vp(poly_discriminant(Fpoly).rational(), p) : 0;
    if (vd >= kExactZero) fail(Errc::domain, "p-adic factorization of an inseparable polynomial");
    PadicCtx cx{p, static_cast<int>(prec + 2 * vd + 4), 0};
    cx.PW = ipow(p, cx.W);
    ZP F;
    for (const auto& x : Fq) {
        mpz_class inv;
        mpz_class den = x.get_den();
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), cx.PW.get_mpz_t());
        F.push_back(mpos(x.get_num() * inv, cx.PW));
    }
    std::vector<mpz_class> roots;
    roots_rec(F, cx.W, 0, 0, cx, roots);
    std::vector<PadicFactor> out;
    ZP rest = F;
    for (const auto& r : roots) {
        ZP qq(rest.size() - 1);
        mpz_class acc = rest.back();
        qq[rest.size() - 2] = acc;
        for (size_t i = rest.size() - 2; i-- > 0;) {
            acc = mpos(rest[i + 1] + acc * r, cx.PW);
            qq[i] = acc;
        }
        rest = qq;
        PadicFactor pf;
        pf.kind = PadicFactor::Linear;
        pf.scale = k;
        pf.root = mpos(r, cx.PW);
        pf.gk = {mpos(-r, cx.PW), 1};
        pf.W = cx.W;
        out.push_back(pf);
    }
    if (rest.size() > 1) {
        auto fac = fpx::factor(to_fp(rest, p), p);
        std::vector<fpx::FP> blocks;
        for (auto& [phi, m] : fac) {
            fpx::FP b{1};
            for (int j = 0; j < m; ++j) b = fpx::mul(b, phi, p);
            blocks.push_back(b);
        }
        auto lifted = hensel_lift(rest, blocks, p, cx.W);
        for (size_t j = 0; j < fac.size(); ++j) {
            PadicFactor pf;
            pf.scale = k;
            pf.gk = lifted[j];
            pf.W = cx.W;
            int dphi = fpx::deg(fac[j].first), m = fac[j].second;
            if (m == 1) {
                pf.kind = PadicFactor::Unramified;
                pf.e = 1;
                pf.f = dphi;
            } else {
                bool done = false;
                if (dphi == 1) {
                    try {
                        one_segment(lifted[j], (p - fac[j].first[0]) % p, cx, pf);
                        done = true;
                    } catch (const Error& err) {
                        if (err.code() != Errc::unsupported) throw;
                    }
                }
                if (!done) {
                    std::vector<PadicFactor> parts;
                    split_block(lifted[j], from_fp(fac[j].first), cx, parts, 0);
                    for (auto& part : parts) {
                        part.scale = k;
                        out.push_back(part);
                    }
                    continue;
                }
            }
            out.push_back(pf);
        }
    }
    for (auto& pf : out) {
        int d = static_cast<int>(pf.gk.size()) - 1;
        std::vector<Scalar> c;
        for (int i = 0; i <= d; ++i) {
            long e = pf.scale * (d - i);
            mpq_class v = e >= 0 ? mpq_class(pf.gk[i] * ipow(p, e)) : mpq_class(pf.gk[i], ipow(p, -e));
            v.canonicalize();
            c.emplace_back(qb, v);
        }
        c.back() = Scalar(qb, 1L);
        pf.g = Poly(qb, c);
    }
    return out;
}

// ---------- real roots ----------

int sign_at(const Poly& f, const mpq_class& x) {
    mpq_class r = 0;
    for (int i = f.deg(); i >= 0; --i) r = r * x + f.c[i].rational();
    return sgn(r);
}

namespace {

std::vector<Poly> sturm_seq(const Poly& f0) {
    Poly f = f0.to_base(Base::rationals());
    std::vector<Poly> s{f, derivative(f)};
    while (!s.back().is_zero() && s.back().deg() > 0) {
        Poly r = -(s[s.size() - 2] % s.back());
        if (r.is_zero()) break;
        s.push_back(r);
    }
    return s;
}

int variations(const std::vector<Poly>& s, const mpq_class& x) {
    int v = 0, last = 0;
    for (const auto& p : s) {
        int sg = sign_at(p, x);
        if (sg == 0) continue;
        if (last != 0 && sg != last) ++v;
        last = sg;
    }
    return v;
}

}  // namespace

int sturm_count(const Poly& f, const mpq_class& lo, const mpq_class& hi) {
    auto s = sturm_seq(f);
    return variations(s, lo) - variations(s, hi);
}

std::vector<RealRoot> real_roots(const Poly& f0) {
    Poly f = make_monic(f0.to_base(Base::rationals()));
    std::vector<RealRoot> out;
    if (f.deg() < 1) return out;
    mpq_class M = 0;
    for (int i = 0; i < f.deg(); ++i) M = std::max(M, mpq_class(abs(f.c[i].rational())));
    M += 1;
    auto s = sturm_seq(f);
    std::function<void(mpq_class, mpq_class, int)> iso = [&](mpq_class lo, mpq_class hi, int cnt) {
        if (cnt == 0) return;
        if (cnt == 1) {
            out.push_back({lo, hi});
            return;
        }
        mpq_class mid = (lo + hi) / 2;
        mpq_class w = (hi - lo) / 7;
        while (sign_at(f, mid) == 0) mid += w, w /= 3;
        int c1 = variations(s, lo) - variations(s, mid);
        iso(lo, mid, c1);
        iso(mid, hi, cnt - c1);
    };
    iso(-M, M, variations(s, -M) - variations(s, M));
    return out;
}

}  // namespace orbitlab
