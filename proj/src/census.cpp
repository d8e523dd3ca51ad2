#include "orbitlab/census.hpp"

#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "orbitlab/descent.hpp"
#include "orbitlab/etale.hpp"
#include "orbitlab/factor.hpp"
#include "orbitlab/orbits.hpp"

namespace orbitlab {

uint64_t census_seed() {
    const char* s = std::getenv("ORBITLAB_SEED");
    if (!s || !*s) return kDefaultSeed;
    try {
        return std::stoull(s, nullptr, 0);
    } catch (const std::exception&) {
        fail(Errc::usage, "ORBITLAB_SEED is not an integer");
    }
}

namespace {

long md(long a, long p) {
    a %= p;
    return a < 0 ? a + p : a;
}

bool is_sq(long a, long p) { return legendre(md(a, p), p) == 1; }

void check_prime(long p) {
    if (p < 3 || !is_prime_l(static_cast<uint64_t>(p))) fail(Errc::domain, "census needs an odd prime");
}

CensusRecord classify_cubic(long p, long a1, long a2, long e) {
    CensusRecord r;
    r.a = {a1, a2};
    r.e = e;
    r.e_zero = e == 0;
    long d = md(e * e, p);
    // discriminant of x^3 + b x^2 + c x + d
    long b = a1, c = a2;
    long b3 = md(b * b, p) * b % p, c3 = md(c * c, p) * c % p;
    long disc = md(18 * (md(b * c, p) * d % p) - 4 * (b3 * d % p) + md(b * b, p) * md(c * c, p) % p - 4 * c3 - 27 * md(d * d, p), p);
    bool sqfree = disc != 0;
    std::vector<long> roots;
    if (sqfree) {
        for (long x = 0; x < p; ++x) {
            long v = md(((x + b) * x % p + c) * x + d, p);
            if (v == 0) roots.push_back(x);
        }
        r.factors = roots.size() == 3 ? 3 : roots.size() == 1 ? 2 : 1;
        r.irreducible = r.factors == 1;
    }
    r.rs = sqfree && e != 0;
    if (r.rs) {
        r.minus_gamma_square = true;
        for (long x : roots) r.minus_gamma_square = r.minus_gamma_square && is_sq(-x, p);
    }
    if (r.e_zero && c != 0) {
        long dq = md(b * b - 4 * c, p);
        r.smallonetwo = dq != 0 && is_sq(dq, p) && is_sq(c, p);
    }
    return r;
}

CensusRecord classify_general(long p, const std::vector<long>& a, long e) {
    int n = static_cast<int>(a.size()) + 1;
    CensusRecord r;
    r.a = a;
    r.e = e;
    r.e_zero = e == 0;
    fpx::FP f(static_cast<size_t>(n) + 1, 0);
    f[n] = 1;
    for (int i = 1; i < n; ++i) f[n - i] = md(a[i - 1], p);
    f[0] = md(e * e, p);
    auto fac = fpx::factor(f, p);
    bool sqfree = true, all_linear = true;
    for (const auto& [g, mult] : fac) {
        if (mult > 1) sqfree = false;
        if (fpx::deg(g) != 1) all_linear = false;
    }
    if (sqfree) {
        r.factors = static_cast<int>(fac.size());
        r.irreducible = r.factors == 1;
    }
    r.rs = sqfree && e != 0;
    if (r.rs) {
        r.minus_gamma_square = true;
        for (const auto& [g, mult] : fac) r.minus_gamma_square = r.minus_gamma_square && is_sq(g[0], p);
    }
    if (r.e_zero && sqfree && all_linear) r.smallonetwo = is_sq(f[1], p);
    return r;
}

void tally(SweepReport& rep, const CensusRecord& r) {
    ++rep.total;
    if (r.rs) ++rep.rs;
    if (r.rs && r.irreducible) ++rep.rs_irreducible;
    if (!r.rs || r.minus_gamma_square) ++rep.twodist;
    if (r.rs && (1L << (r.factors - 1)) > (r.minus_gamma_square ? 1 : 2)) ++rep.good;
    if (r.smallonetwo) ++rep.smallonetwo;
    std::ostringstream key;
    key << "rs=" << r.rs << ",irr=" << r.irreducible << ",k=" << r.factors << ",sq=" << r.minus_gamma_square
        << ",e0=" << r.e_zero << ",s12=" << r.smallonetwo;
    ++rep.by_flags[key.str()];
}

void merge(SweepReport& into, const SweepReport& from) {
    into.total += from.total;
    into.rs += from.rs;
    into.good += from.good;
    into.rs_irreducible += from.rs_irreducible;
    into.twodist += from.twodist;
    into.smallonetwo += from.smallonetwo;
    for (const auto& [k, v] : from.by_flags) into.by_flags[k] += v;
}

std::vector<long> decode(long idx, long p, int n) {
    std::vector<long> t(static_cast<size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        t[i] = idx % p;
        idx /= p;
    }
    return t;
}

bool full_sweep_allowed(long p, int n) {
    if (n == 3) return p <= 97;
    if (n == 5) return p <= 23;
    double total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<double>(p);
    return total <= 1e6;
}

}  // namespace

mpq_class SweepReport::reducible() const { return 1 - mpq_class(good, total); }
mpq_class SweepReport::nontrivial_stab() const { return 1 - mpq_class(rs_irreducible, total); }
mpq_class SweepReport::twodist_density() const { return mpq_class(twodist, total); }
mpq_class SweepReport::smallonetwo_density() const { return mpq_class(smallonetwo, total); }

CensusRecord classify_fp(long p, const std::vector<long>& a, long e) {
    if (a.size() == 2) return classify_cubic(p, md(a[0], p), md(a[1], p), md(e, p));
    return classify_general(p, a, md(e, p));
}

SweepReport fp_sweep(long p, int n, int threads, long sample_size, const std::function<void(const CensusRecord&)>& sink) {
    check_prime(p);
    if (n < 3 || n % 2 == 0) fail(Errc::domain, "census needs odd n >= 3");
    SweepReport rep;
    rep.p = p;
    rep.n = n;
    rep.seed = census_seed();
    auto one = [&](const std::vector<long>& t) {
        std::vector<long> a(t.begin(), t.end() - 1);
        return classify_fp(p, a, t.back());
    };
    if (!full_sweep_allowed(p, n)) {
        rep.sampled = true;
        std::mt19937_64 rng(rep.seed);
        std::uniform_int_distribution<long> d(0, p - 1);
        for (long s = 0; s < sample_size; ++s) {
            std::vector<long> t(static_cast<size_t>(n));
            for (auto& x : t) x = d(rng);
            CensusRecord r = one(t);
            tally(rep, r);
            if (sink) sink(r);
        }
        return rep;
    }
    long total = 1;
    for (int i = 0; i < n; ++i) total *= p;
    if (sink || threads <= 1) {
        for (long idx = 0; idx < total; ++idx) {
            CensusRecord r = one(decode(idx, p, n));
            tally(rep, r);
            if (sink) sink(r);
        }
        return rep;
    }
    std::vector<SweepReport> parts(static_cast<size_t>(threads));
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) {
        pool.emplace_back([&, k] {
            long lo = total * k / threads, hi = total * (k + 1) / threads;
            for (long idx = lo; idx < hi; ++idx) tally(parts[k], one(decode(idx, p, n)));
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& part : parts) merge(rep, part);
    return rep;
}

long smallonetwo_oracle(long p) {
    long count = 0;
    for (long u = 1; u < p; ++u)
        for (long v = u + 1; v < p; ++v)
            if (legendre(u * v % p, p) == 1) ++count;
    return count;
}

// ---------- brute force over SO3 x SO3 ----------

namespace {

M3 mul3(const M3& a, const M3& b, int p) {
    M3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int s = 0;
            for (int k = 0; k < 3; ++k) s += a[3 * i + k] * b[3 * k + j];
            c[3 * i + j] = s % p;
        }
    return c;
}

// B g^t B, the inverse of g in SO(B)
M3 inv_so(const M3& g) {
    M3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[3 * i + j] = g[3 * (2 - j) + (2 - i)];
    return r;
}

uint32_t encode(const M3& a, int p) {
    uint32_t x = 0;
    for (int i = 0; i < 9; ++i) x = x * p + a[i];
    return x;
}

M3 decode3(uint32_t x, int p) {
    M3 a{};
    for (int i = 8; i >= 0; --i) {
        a[i] = x % p;
        x /= p;
    }
    return a;
}

int det3(const M3& a, int p) {
    long d = static_cast<long>(a[0]) * (a[4] * a[8] - a[5] * a[7]) - static_cast<long>(a[1]) * (a[3] * a[8] - a[5] * a[6]) +
             static_cast<long>(a[2]) * (a[3] * a[7] - a[4] * a[6]);
    return static_cast<int>(md(d, p));
}

void check_budget(long p) {
    if (p > 7) fail(Errc::budget, "brute-force orbit budget exceeded");
}

}  // namespace

std::vector<M3> so3(long p) {
    check_prime(p);
    check_budget(p);
    int q = static_cast<int>(p);
    uint32_t total = 1;
    for (int i = 0; i < 9; ++i) total *= q;
    std::vector<M3> out;
    for (uint32_t x = 0; x < total; ++x) {
        M3 g = decode3(x, q);
        M3 h = mul3(inv_so(g), g, q);
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i)
            for (int j = 0; j < 3 && ok; ++j) ok = h[3 * i + j] == (i == j ? 1 : 0);
        if (ok && det3(g, q) == 1) out.push_back(g);
    }
    return out;
}

long group_order_formula(long p, int n) {
    int m = n / 2;
    mpz_class r = ipow(p, static_cast<long>(m) * m);
    for (int i = 1; i <= m; ++i) r *= ipow(p, 2 * i) - 1;
    return r.get_si();
}

long group_order(long p, int n) {
    if (n != 3) return group_order_formula(p, n);
    long got = static_cast<long>(so3(p).size());
    if (got != group_order_formula(p, 3)) fail(Errc::internal, "orthogonal group order differs from the formula");
    return got;
}

std::array<int, 3> invariants3(long p, const M3& A) {
    int q = static_cast<int>(p);
    M3 As{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) As[3 * i + j] = md(-A[3 * (2 - j) + (2 - i)], q);
    M3 S = mul3(A, As, q);
    long tr = S[0] + S[4] + S[8];
    long m2 = static_cast<long>(S[0]) * S[4] - static_cast<long>(S[1]) * S[3] + static_cast<long>(S[0]) * S[8] -
              static_cast<long>(S[2]) * S[6] + static_cast<long>(S[4]) * S[8] - static_cast<long>(S[5]) * S[7];
    return {static_cast<int>(md(-tr, p)), static_cast<int>(md(m2, p)), det3(A, q)};
}

M3 to_m3(const Mat& A) {
    if (A.base().ring != Ring::Fp || A.rows() != 3 || A.cols() != 3) fail(Errc::domain, "expected a 3x3 matrix over F_p");
    M3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[3 * i + j] = static_cast<int>(A(i, j).residue());
    return r;
}

OrbitCensus bruteforce_all(long p) {
    auto G = so3(p);
    int q = static_cast<int>(p);
    std::vector<M3> Ginv;
    for (const auto& g : G) Ginv.push_back(inv_so(g));
    OrbitCensus out;
    out.p = p;
    out.group = static_cast<long>(G.size() * G.size());
    uint32_t total = 1;
    for (int i = 0; i < 9; ++i) total *= q;
    std::vector<char> seen(total, 0);
    std::map<std::array<int, 3>, bool> rs_cache;
    for (uint32_t x = 0; x < total; ++x) {
        if (seen[x]) continue;
        M3 A = decode3(x, q);
        auto key = invariants3(p, A);
        auto it = rs_cache.find(key);
        if (it == rs_cache.end()) it = rs_cache.emplace(key, classify_fp(p, {key[0], key[1]}, key[2]).rs).first;
        if (!it->second) continue;
        long size = 0, stab = 0;
        for (const auto& g1 : G) {
            M3 gA = mul3(g1, A, q);
            for (size_t j = 0; j < G.size(); ++j) {
                M3 img = mul3(gA, Ginv[j], q);
                uint32_t y = encode(img, q);
                if (!seen[y]) {
                    seen[y] = 1;
                    ++size;
                }
                if (img == A) ++stab;
            }
        }
        Fiber& F = out.fibers[key];
        F.c = key;
        F.reps.push_back(A);
        F.orbit_sizes.push_back(size);
        F.stabilizers.push_back(stab);
    }
    return out;
}

Fiber bruteforce_orbits(long p, const Invariants& c) {
    if (c.n() != 3) fail(Errc::budget, "brute-force orbits cover n = 3 only");
    std::array<int, 3> key{static_cast<int>(md(c.a[0].rational().get_num().get_si(), p)),
                           static_cast<int>(md(c.a[1].rational().get_num().get_si(), p)),
                           static_cast<int>(md(c.e.rational().get_num().get_si(), p))};
    if (c.base.ring == Ring::Fp) key = {static_cast<int>(c.a[0].residue()), static_cast<int>(c.a[1].residue()), static_cast<int>(c.e.residue())};
    OrbitCensus all = bruteforce_all(p);
    auto it = all.fibers.find(key);
    if (it == all.fibers.end()) fail(Errc::precondition, "fiber is not regular semisimple");
    return it->second;
}

bool conjugate(long p, const M3& A, const M3& B) {
    auto G = so3(p);
    int q = static_cast<int>(p);
    if (invariants3(p, A) != invariants3(p, B)) return false;
    for (const auto& g1 : G) {
        M3 gA = mul3(g1, A, q);
        for (const auto& g2 : G)
            if (mul3(gA, inv_so(g2), q) == B) return true;
    }
    return false;
}

// ---------- heights ----------

int height_exponent(int n) {
    long L = n;
    for (int i = 1; i < n; ++i) L = std::lcm(L, 2L * i);
    return static_cast<int>(L);
}

bool in_window(const Invariants& c, const mpq_class& X) {
    if (X <= 0) fail(Errc::domain, "height bound must be positive");
    int n = c.n();
    for (int i = 1; i < n; ++i) {
        mpq_class bound;
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), X.get_num().get_mpz_t(), 2 * i);
        mpz_pow_ui(den.get_mpz_t(), X.get_den().get_mpz_t(), 2 * i);
        bound = mpq_class(num, den);
        bound.canonicalize();
        if (!(abs(c.a[i - 1].rational()) < bound)) return false;
    }
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), X.get_num().get_mpz_t(), n);
    mpz_pow_ui(den.get_mpz_t(), X.get_den().get_mpz_t(), n);
    mpq_class bound(num, den);
    bound.canonicalize();
    return abs(c.e.rational()) < bound;
}

mpz_class height_power(const Invariants& c) {
    int n = c.n(), L = height_exponent(n);
    mpz_class best = 0;
    auto upd = [&](const mpq_class& v, int k) {
        if (v.get_den() != 1) fail(Errc::domain, "height needs integral invariants");
        mpz_class x;
        mpz_pow_ui(x.get_mpz_t(), mpz_class(abs(v.get_num())).get_mpz_t(), static_cast<unsigned long>(L / k));
        if (x > best) best = x;
    };
    for (int i = 1; i < n; ++i) upd(c.a[i - 1].rational(), 2 * i);
    upd(c.e.rational(), n);
    return best;
}

Invariants scale_invariants(const Invariants& c, long lambda) {
    Invariants r = c;
    int n = c.n();
    for (int i = 1; i < n; ++i) r.a[i - 1] = c.a[i - 1] * Scalar(c.base, ipow(lambda, 2 * i));
    r.e = c.e * Scalar(c.base, ipow(lambda, n));
    return r;
}

namespace {

// #{k in Z : |k| < Y}
mpz_class strict_count(const mpq_class& Y) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), Y.get_num().get_mpz_t(), Y.get_den().get_mpz_t());
    mpz_class below = Y.get_den() == 1 ? mpz_class(fl - 1) : fl;  // largest k with k < Y
    return 2 * below + 1;
}

mpq_class qpow(const mpq_class& X, int k) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), X.get_num().get_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), X.get_den().get_mpz_t(), k);
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

bool minimal(const Invariants& c) {
    int n = c.n();
    mpz_class pivot = 0;
    if (c.e.rational() != 0) pivot = c.e.rational().get_num();
    for (int i = 1; i < n && pivot == 0; ++i)
        if (c.a[i - 1].rational() != 0) pivot = c.a[i - 1].rational().get_num();
    if (pivot == 0) return false;
    for (const auto& q : prime_factors(abs(pivot))) {
        if (!q.fits_slong_p()) continue;
        long p = q.get_si();
        bool divides = true;
        for (int i = 1; i < n && divides; ++i) {
            mpq_class a = c.a[i - 1].rational();
            if (a != 0 && vp(a, p) < 2 * i) divides = false;
        }
        mpq_class e = c.e.rational();
        if (e != 0 && vp(e, p) < n) divides = false;
        if (divides) return false;
    }
    return true;
}

}  // namespace

mpz_class box_count(const mpq_class& X, int n) {
    if (X <= 0) fail(Errc::domain, "height bound must be positive");
    mpz_class r = 1;
    for (int i = 1; i < n; ++i) r *= strict_count(qpow(X, 2 * i));
    r *= strict_count(qpow(X, n));
    return r;
}

long height_enumerate(const mpq_class& X, int n, bool classify, const std::function<void(const HeightFlags&)>& sink) {
    if (n < 3 || n % 2 == 0) fail(Errc::domain, "heights need odd n >= 3");
    mpz_class vol = box_count(X, n);
    if (vol > 50000000) fail(Errc::budget, "height box exceeds the enumeration budget");
    std::vector<long> hi(static_cast<size_t>(n));
    for (int i = 1; i < n; ++i) hi[i - 1] = (strict_count(qpow(X, 2 * i)).get_si() - 1) / 2;
    hi[n - 1] = (strict_count(qpow(X, n)).get_si() - 1) / 2;
    std::vector<long> cur(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) cur[i] = -hi[i];
    Base q = Base::rationals();
    long count = 0;
    while (true) {
        ++count;
        if (sink) {
            HeightFlags h;
            h.c = Invariants::from_ints(q, std::vector<long>(cur.begin(), cur.end() - 1), cur.back());
            if (classify) {
                h.rs = h.c.regular_semisimple();
                h.coincide = h.rs && distinguished_coincide(h.c);
                h.minimal = minimal(h.c);
                if (h.rs) {
                    mpz_class bad = poly_discriminant(h.c.f()).rational().get_num() * h.c.e.rational().get_num();
                    for (long p = 3;; p += 2) {
                        if (!is_prime_l(static_cast<uint64_t>(p)) || mpz_divisible_ui_p(bad.get_mpz_t(), p)) continue;
                        h.has_proxy = true;
                        h.proxy_p = p;
                        h.coincide_mod_p = classify_fp(p, std::vector<long>(cur.begin(), cur.end() - 1), cur.back()).minus_gamma_square;
                        break;
                    }
                }
            }
            sink(h);
        }
        int k = n - 1;
        while (k >= 0 && cur[k] == hi[k]) {
            cur[k] = -hi[k];
            --k;
        }
        if (k < 0) break;
        ++cur[k];
    }
    return count;
}

// ---------- divergent family ----------

std::vector<DivergesMember> diverges_family(long p, int count) {
    check_prime(p);
    std::vector<DivergesMember> out;
    for (long k = 0; static_cast<int>(out.size()) < count; ++k) {
        if (k > 1000) fail(Errc::budget, "divergent family exhausted");
        for (long u = 1; u < p && static_cast<int>(out.size()) < count; ++u)
            for (long v = u + 1; v < p && static_cast<int>(out.size()) < count; ++v) {
                if (legendre(u * v % p, p) != 1) continue;
                for (long t = 1; t < p && static_cast<int>(out.size()) < count; ++t) {
                    DivergesMember m;
                    m.u = u + k * p;
                    m.v = v;
                    m.t = t;
                    m.c = diverges_member(p, m.u, m.v, m.t);
                    mpq_class fp = eval(m.c.f(), Scalar(Base::rationals(), p)).rational();
                    auto cls = rational_class(p * fp, Place::padic(p));
                    m.pfp_square = true;
                    for (int b : cls) m.pfp_square = m.pfp_square && b == 0;
                    out.push_back(m);
                }
            }
    }
    return out;
}

}  // namespace orbitlab
