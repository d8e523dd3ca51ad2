#include <random>

#include "orbitlab/factor.hpp"

namespace orbitlab::fqx {

mpz_class Field::q() const { return ipow(p, k()); }

E reduce(const Field& F, const E& a) { return fpx::mod(a, F.m, F.p); }

E mul(const Field& F, const E& a, const E& b) { return fpx::mod(fpx::mul(a, b, F.p), F.m, F.p); }

E inv(const Field& F, const E& a) {
    if (reduce(F, a).empty()) fail(Errc::domain, "inverse of zero in a finite field");
    E s, t;
    fpx::xgcd(a, F.m, F.p, s, t);
    return reduce(F, s);
}

E pow(const Field& F, const E& a, const mpz_class& e) { return fpx::powmod(a, e, F.m, F.p); }

void trim(PX& a) {
    while (!a.empty() && a.back().empty()) a.pop_back();
}

int deg(const PX& a) { return static_cast<int>(a.size()) - 1; }

PX add(const Field& F, const PX& a, const PX& b) {
    PX r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i)
        r[i] = fpx::add(i < a.size() ? a[i] : E{}, i < b.size() ? b[i] : E{}, F.p);
    trim(r);
    return r;
}

PX sub(const Field& F, const PX& a, const PX& b) {
    PX r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i)
        r[i] = fpx::sub(i < a.size() ? a[i] : E{}, i < b.size() ? b[i] : E{}, F.p);
    trim(r);
    return r;
}

PX mul(const Field& F, const PX& a, const PX& b) {
    if (a.empty() || b.empty()) return {};
    PX r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].empty()) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = fpx::add(r[i + j], fpx::mul(a[i], b[j], F.p), F.p);
    }
    for (auto& c : r) c = reduce(F, c);
    trim(r);
    return r;
}

std::pair<PX, PX> divmod(const Field& F, const PX& a, const PX& b) {
    if (b.empty()) fail(Errc::domain, "division by zero polynomial over a finite field");
    PX r = a;
    trim(r);
    int db = deg(b);
    if (deg(r) < db) return {{}, r};
    PX q(static_cast<size_t>(deg(r) - db) + 1);
    E il = inv(F, b.back());
    for (int i = deg(r); i >= db; --i) {
        E f = mul(F, r[i], il);
        q[i - db] = f;
        if (!f.empty())
            for (int j = 0; j <= db; ++j) r[i - db + j] = fpx::sub(r[i - db + j], mul(F, f, b[j]), F.p);
    }
    r.resize(db);
    trim(r);
    trim(q);
    return {q, r};
}

PX mod(const Field& F, const PX& a, const PX& b) { return divmod(F, a, b).second; }

PX monic(const Field& F, const PX& a) {
    if (a.empty()) return a;
    E il = inv(F, a.back());
    PX r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mul(F, a[i], il);
    return r;
}

PX gcd(const Field& F, const PX& a, const PX& b) {
    PX x = a, y = b;
    trim(x);
    trim(y);
    while (!y.empty()) {
        PX r = mod(F, x, y);
        x = std::move(y);
        y = std::move(r);
    }
    return monic(F, x);
}

PX powmod(const Field& F, const PX& a, const mpz_class& e, const PX& m) {
    PX r = mod(F, PX{E{1}}, m), b = mod(F, a, m);
    if (e == 0) return r;
    for (size_t i = mpz_sizeinbase(e.get_mpz_t(), 2); i-- > 0;) {
        r = mod(F, mul(F, r, r), m);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mod(F, mul(F, r, b), m);
    }
    return r;
}

E eval(const Field& F, const PX& a, const E& x) {
    E r;
    for (size_t i = a.size(); i-- > 0;) r = fpx::add(mul(F, r, x), a[i], F.p);
    return r;
}

namespace {

PX deriv(const Field& F, const PX& a) {
    PX r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(mul(F, a[i], E{static_cast<long>(i) % F.p}));
    trim(r);
    return r;
}

PX pth_root(const Field& F, const PX& f) {
    mpz_class e = F.q() / F.p;
    PX g;
    for (size_t i = 0; i < f.size(); i += static_cast<size_t>(F.p)) g.push_back(pow(F, f[i], e));
    trim(g);
    return g;
}

void sqf_rec(const Field& F, const PX& f, int m, std::vector<std::pair<PX, int>>& out) {
    if (deg(f) <= 0) return;
    PX d = deriv(F, f);
    if (d.empty()) {
        sqf_rec(F, pth_root(F, f), m * static_cast<int>(F.p), out);
        return;
    }
    PX c = gcd(F, f, d);
    PX w = divmod(F, f, c).first;
    int i = 1;
    while (deg(w) > 0) {
        PX y = gcd(F, w, c);
        PX z = divmod(F, w, y).first;
        if (deg(z) > 0) out.push_back({monic(F, z), i * m});
        ++i;
        w = y;
        c = divmod(F, c, y).first;
    }
    if (deg(c) > 0) sqf_rec(F, pth_root(F, c), m * static_cast<int>(F.p), out);
}

std::vector<std::pair<PX, int>> ddf(const Field& F, const PX& g) {
    std::vector<std::pair<PX, int>> res;
    PX rem = g, x{E{}, E{1}};
    PX h = mod(F, x, rem);
    int d = 0;
    while (deg(rem) >= 2 * (d + 1)) {
        ++d;
        h = powmod(F, h, F.q(), rem);
        PX t = gcd(F, sub(F, h, x), rem);
        if (deg(t) > 0) {
            res.push_back({t, d});
            rem = divmod(F, rem, t).first;
            h = mod(F, h, rem);
        }
    }
    if (deg(rem) > 0) res.push_back({monic(F, rem), deg(rem)});
    return res;
}

void edf(const Field& F, const PX& g, int d, std::mt19937_64& rng, std::vector<PX>& out) {
    if (deg(g) == d) {
        out.push_back(monic(F, g));
        return;
    }
    int n = deg(g);
    mpz_class qd = 1;
    for (int i = 0; i < d; ++i) qd *= F.q();
    for (int tries = 0; tries < 10000; ++tries) {
        PX a(static_cast<size_t>(n));
        for (auto& c : a) {
            c.assign(static_cast<size_t>(F.k()), 0);
            for (auto& x : c) x = static_cast<long>(rng() % static_cast<uint64_t>(F.p));
            fpx::trim(c);
        }
        trim(a);
        if (deg(a) < 1) continue;
        PX b;
        if (F.p == 2) {
            PX s = a, cur = a;
            for (int i = 1; i < d * F.k(); ++i) {
                cur = mod(F, mul(F, cur, cur), g);
                s = add(F, s, cur);
            }
            b = s;
        } else {
            b = sub(F, powmod(F, a, (qd - 1) / 2, g), PX{E{1}});
        }
        PX t = gcd(F, b, g);
        if (deg(t) > 0 && deg(t) < n) {
            edf(F, t, d, rng, out);
            edf(F, divmod(F, g, t).first, d, rng, out);
            return;
        }
    }
    fail(Errc::internal, "equal-degree splitting over F_q did not converge");
}

}  // namespace

std::vector<std::pair<PX, int>> factor(const Field& F, const PX& f0) {
    PX f = f0;
    for (auto& c : f) c = reduce(F, c);
    trim(f);
    if (f.empty()) fail(Errc::domain, "factorization of the zero polynomial");
    f = monic(F, f);
    std::vector<std::pair<PX, int>> sq, out;
    sqf_rec(F, f, 1, sq);
    std::mt19937_64 rng(0xA5EED);
    for (auto& [g, m] : sq)
        for (auto& [h, d] : ddf(F, g)) {
            std::vector<PX> parts;
            edf(F, h, d, rng, parts);
            for (auto& part : parts) out.push_back({part, m});
        }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_square(const Field& F, const PX& modulus, const PX& a) {
    if (F.p == 2) return true;
    mpz_class Q = 1;
    for (int i = 0; i < deg(modulus); ++i) Q *= F.q();
    PX r = powmod(F, a, (Q - 1) / 2, modulus);
    if (r.empty()) fail(Errc::domain, "square test of zero");
    return r.size() == 1 && r[0] == E{1};
}

}  // namespace orbitlab::fqx
