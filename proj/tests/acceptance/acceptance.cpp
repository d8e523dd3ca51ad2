#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "orbitlab/census.hpp"
#include "orbitlab/descent.hpp"
#include "orbitlab/lattices.hpp"
#include "orbitlab/orbits.hpp"

using namespace orbitlab;

namespace {

// pinned tolerances and sample sizes
constexpr int kRoundTripSamples = 100;
constexpr int kWitnessSamples = 50;
constexpr int kPipelineOdd = 20;
constexpr int kPipelineTwo = 10;
constexpr int kDescentSamples = 50;
constexpr int kMaxIncompletePanel = 2;
constexpr int kVtempPairs = 20;
constexpr int kFamilySize = 30;
constexpr long kSweepPmax = 97;
constexpr double kDensityCeiling = 0.999;
constexpr double kSmallOneTwoLead = 0.25;
constexpr double kSmallOneTwoLow = 0.5, kSmallOneTwoHigh = 2.0;
constexpr int kHomogeneitySamples = 100;
constexpr uint32_t kSeed = 0xA5EED;

struct Outcome {
    bool ok = true;
    std::string detail;
};

Invariants random_rs(const Base& b, int n, std::mt19937& rng, long span = 11) {
    for (;;) {
        std::vector<long> a(n - 1);
        for (auto& x : a) x = static_cast<long>(rng() % span) - span / 2;
        long e = static_cast<long>(rng() % span) - span / 2;
        Invariants c = Invariants::from_ints(b, a, e);
        if (c.regular_semisimple()) return c;
    }
}

std::vector<std::array<long, 3>> rs_tuples(long p) {
    std::vector<std::array<long, 3>> out;
    for (long a1 = 0; a1 < p; ++a1)
        for (long a2 = 0; a2 < p; ++a2)
            for (long e = 0; e < p; ++e)
                if (classify_fp(p, {a1, a2}, e).rs) out.push_back({a1, a2, e});
    return out;
}

long kernel_classes(const Invariants& c) {
    EtaleAlgebra L = etale_build(c.f());
    long k = 0;
    for (const auto& nu : class_representatives(L))
        if (delta_map(c, nu, Place::of(c.base)).in_kernel) ++k;
    return k;
}

Outcome orbit_count() {
    Outcome o;
    long fibers = 0, bad = 0;
    for (long p : {3L, 5L}) {
        OrbitCensus oc = bruteforce_all(p);
        for (const auto& t : rs_tuples(p)) {
            ++fibers;
            std::array<int, 3> key{static_cast<int>(t[0]), static_cast<int>(t[1]), static_cast<int>(t[2])};
            auto it = oc.fibers.find(key);
            Invariants c = Invariants::from_ints(Base::fp(p), {t[0], t[1]}, t[2]);
            long want = 1L << (classify_fp(p, {t[0], t[1]}, t[2]).factors - 1);
            if (it == oc.fibers.end() || static_cast<long>(it->second.reps.size()) != want || kernel_classes(c) != want) ++bad;
        }
    }
    o.ok = bad == 0;
    o.detail = std::to_string(fibers) + " rs fibers, " + std::to_string(bad) + " mismatches";
    return o;
}

Outcome stabilizers() {
    Outcome o;
    long checked = 0, bad = 0;
    for (long p : {3L, 5L}) {
        OrbitCensus oc = bruteforce_all(p);
        for (const auto& [k, F] : oc.fibers) {
            Invariants c = Invariants::from_ints(Base::fp(p), {k[0], k[1]}, k[2]);
            long want = stabilizer_info(c).order;
            for (long s : F.stabilizers) {
                ++checked;
                if (s != want) ++bad;
            }
        }
    }
    o.ok = bad == 0;
    o.detail = std::to_string(checked) + " orbit stabilizers, " + std::to_string(bad) + " mismatches";
    return o;
}

Outcome round_trip() {
    Outcome o;
    std::mt19937 rng(kSeed);
    std::ostringstream os;
    for (Base b : {Base::fp(5), Base::rationals(), Base::qp(7, 20)}) {
        int ok = 0;
        for (int t = 0; t < kRoundTripSamples; ++t) {
            Invariants c = random_rs(b, t % 4 == 3 ? 5 : 3, rng);
            try {
                if (invariants_of(alpha1_construct(c).T).equal_up_to_sign(c)) ++ok;
            } catch (const Error&) {
            }
        }
        if (ok != kRoundTripSamples) o.ok = false;
        os << b.str() << " " << ok << "/" << kRoundTripSamples << " ";
    }
    o.detail = os.str();
    return o;
}

Outcome distinguished() {
    Outcome o;
    std::mt19937 rng(kSeed + 1);
    std::ostringstream os;
    for (Base b : {Base::fp(5), Base::rationals()}) {
        int ok = 0;
        for (int t = 0; t < kWitnessSamples; ++t) {
            Invariants c = random_rs(b, 3, rng);
            try {
                RepElement T1 = alpha1_construct(c).T;
                EtaleAlgebra L = etale_build(c.f());
                RepElement T2 = orbit_from_class(c, L.reduce(-L.gamma())).T;
                Witness w1 = distinguished_witness(T1, 1), w2 = distinguished_witness(T2, 2);
                if (w1.status == WitnessStatus::Found && w2.status == WitnessStatus::Found && is_witness(T1, 1, w1.X) &&
                    is_witness(T2, 2, w2.X))
                    ++ok;
            } catch (const Error&) {
            }
        }
        if (ok != kWitnessSamples) o.ok = false;
        os << b.str() << " " << ok << "/" << kWitnessSamples << " ";
    }
    o.detail = os.str();
    return o;
}

Outcome coincide() {
    Outcome o;
    long checked = 0, bad = 0;
    for (long p : {3L, 5L}) {
        Base b = Base::fp(p);
        for (const auto& t : rs_tuples(p)) {
            Invariants c = Invariants::from_ints(b, {t[0], t[1]}, t[2]);
            EtaleAlgebra L = etale_build(c.f());
            M3 one = to_m3(alpha1_construct(c).T.A);
            M3 two = to_m3(orbit_from_class(c, L.reduce(-L.gamma())).T.A);
            ++checked;
            if (distinguished_coincide(c) != conjugate(p, one, two)) ++bad;
        }
    }
    o.ok = bad == 0;
    o.detail = std::to_string(checked) + " fibers, " + std::to_string(bad) + " mismatches";
    return o;
}

Outcome lemma_two() {
    Outcome o;
    Base b2 = Base::qp(2, 20);
    Mat G = Mat::from_ints(b2, 2, 2, {2, 0, 0, 2});
    LatticeBasis L = self_dualize(LatticeBasis::of(Mat::identity(b2, 2)), G);
    Mat half = Mat::from_rationals(b2, 2, 2, {mpq_class(1, 2), mpq_class(1, 2), mpq_class(1, 2), mpq_class(-1, 2)});
    bool gram = L.basis.t() * G * L.basis == Mat::identity(b2, 2);
    bool basis = same_lattice(L, LatticeBasis::of(half));
    o.ok = gram && basis;
    o.detail = std::string("gram identity ") + (gram ? "yes" : "no") + ", spanned by (f1+-f2)/2 " + (basis ? "yes" : "no");
    return o;
}

bool good_at(const Invariants& c, long p) {
    Scalar d = poly_discriminant(c.g());
    return !d.is_zero() && vp(d.rational(), p) == 0;
}

Outcome pipeline() {
    Outcome o;
    std::mt19937 rng(kSeed + 2);
    std::ostringstream os;
    Base q = Base::rationals();
    for (long p : {3L, 5L, 7L}) {
        int ok = 0, tried = 0;
        while (tried < kPipelineOdd) {
            Invariants c = random_rs(q, 3, rng);
            if (!good_at(c, p)) continue;
            ++tried;
            Base bp = Base::qp(p, lattice_precision(c, p));
            try {
                IntegralResult R = integral_representative(c, Poly::constant(Scalar(bp, 1L)), LatticeBasis::of(Mat::identity(bp, 3)));
                if (R.report.ok) ++ok;
            } catch (const Error&) {
            }
        }
        if (ok != kPipelineOdd) o.ok = false;
        os << "p=" << p << " " << ok << "/" << kPipelineOdd << " ";
    }
    int ok = 0, tried = 0, skipped = 0;
    while (tried < kPipelineTwo) {
        Invariants c0 = random_rs(q, 3, rng);
        Invariants c = c0;
        for (int i = 1; i < 3; ++i) c.a[i - 1] = c.a[i - 1] * Scalar(q, ipow(16, i));
        c.e = c.e * Scalar(q, ipow(4, 3));
        Base b2 = Base::qp(2, lattice_precision(c, 2));
        Mat M(b2, 3, 3);
        for (int i = 0; i < 3; ++i) M(i, i) = 2 - 2 * i >= 0 ? Scalar(b2, ipow(4, 2 - 2 * i)) : Scalar(b2, mpq_class(1, ipow(4, 2 * i - 2)));
        try {
            IntegralResult R = integral_representative(c, Poly::constant(Scalar(b2, 1L)), LatticeBasis::of(M));
            ++tried;
            if (R.report.ok) ++ok;
        } catch (const Error& e) {
            if (e.code() != Errc::unsupported) ++tried;
            else ++skipped;
        }
    }
    if (ok != kPipelineTwo) o.ok = false;
    os << "p=2 " << ok << "/" << kPipelineTwo << " (" << skipped << " unsupported 2-adic factorizations redrawn)";
    o.detail = os.str();
    return o;
}

Outcome normalization() {
    Outcome o;
    std::mt19937 rng(kSeed + 3);
    std::ostringstream os;
    for (Place pl : {Place{Place::Finite, 5, 0}, Place::padic(3), Place::real()}) {
        Base b = pl.base();
        int ok = 0;
        for (int t = 0; t < kDescentSamples; ++t) {
            Invariants cq = random_rs(b.ring == Ring::Fp ? b : Base::rationals(), 3, rng);
            if (b.ring == Ring::Fp && cq.e.is_zero()) {
                --t;
                continue;
            }
            try {
                EtaleAlgebra L = local_algebra(cq, pl);
                Poly mg = L.reduce(-L.gamma());
                bool same = descent_class(L, CurvePoint::marked(), CurveKind::C1) == square_class(L, mg);
                Scalar N = L.norm(mg);
                Scalar e = cq.e;
                if (!e.base().same(N.base())) e = Scalar(N.base(), cq.e.rational());
                if (same && N == e * e && is_square_scalar(N)) ++ok;
            } catch (const Error&) {
            }
        }
        if (ok != kDescentSamples) o.ok = false;
        os << pl.str() << " " << ok << "/" << kDescentSamples << " ";
    }
    o.detail = os.str();
    return o;
}

Invariants from_roots(const std::vector<long>& r) {
    Base q = Base::rationals();
    Poly f = Poly::constant(Scalar(q, 1L));
    mpz_class prod = 1;
    for (long x : r) {
        f = f * Poly::from_ints(q, {x, 1});
        prod *= x;
    }
    return Invariants::from_f(f, Scalar(q, mpq_class(sqrt_q(mpq_class(prod)))));
}

Outcome local_sizes() {
    Outcome o;
    std::vector<std::vector<long>> panel = {{1, 4, 9},  {1, 2, 8},  {2, 3, 6},  {1, 3, 12}, {1, 5, 20},
                                            {2, 5, 10}, {3, 4, 12}, {1, 6, 24}, {2, 7, 14}, {3, 5, 15},
                                            {1, 2, 3, 4, 6}, {1, 2, 4, 8, 16}, {1, 3, 4, 9, 12}, {1, 2, 4, 5, 10}, {2, 3, 4, 6, 9}};
    int incomplete = 0, wrong = 0;
    std::ostringstream notes;
    for (const auto& roots : panel) {
        Invariants c = from_roots(roots);
        int n = c.n(), g = n / 2;
        long tors = 1L << (n - 1);
        long good = 3;
        while (!good_reduction(c, good, CurveKind::C1)) good += 2;
        struct Want {
            Place pl;
            long size;
        };
        std::vector<Want> wants = {{Place::padic(good), tors}, {Place::padic(2), tors << g}, {Place::real(), tors >> g}};
        bool complete = true;
        for (const auto& w : wants) {
            try {
                LocalImage I = sampled_image(c, w.pl, CurveKind::C1);
                if (!I.complete) complete = false;
                else if (static_cast<long>(I.classes.size()) != w.size || I.target != w.size) ++wrong;
            } catch (const Error&) {
                complete = false;
            }
        }
        if (!complete) {
            ++incomplete;
            notes << " incomplete:" << c.str();
        }
    }
    o.ok = wrong == 0 && incomplete <= kMaxIncompletePanel;
    o.detail = std::to_string(panel.size()) + " curves x 3 places, " + std::to_string(wrong) + " wrong sizes, " +
               std::to_string(incomplete) + " incomplete" + notes.str();
    return o;
}

Outcome vtemp() {
    Outcome o;
    std::mt19937 rng(kSeed + 4);
    Base q = Base::rationals();
    int pairs = 0, ok = 0;
    std::vector<long> primes = {3, 5, 7, 11, 13};
    while (pairs < kVtempPairs) {
        Invariants c = random_rs(q, pairs % 4 == 3 ? 5 : 3, rng);
        long p = primes[rng() % primes.size()];
        if (!good_reduction(c, p, CurveKind::C1)) continue;
        ++pairs;
        try {
            LocalImage I = sampled_image(c, Place::padic(p), CurveKind::C1);
            if (I.complete && I.classes == unramified_subgroup(local_algebra(c, Place::padic(p)))) ++ok;
        } catch (const Error&) {
        }
    }
    o.ok = ok == kVtempPairs;
    o.detail = std::to_string(ok) + "/" + std::to_string(kVtempPairs) + " images equal the unramified subgroup";
    return o;
}

bool padic_square(const mpq_class& x, long p) {
    if (x == 0) return false;
    long v = vp(x, p);
    if (v % 2) return false;
    mpq_class u = x;
    mpz_class pv = ipow(p, std::labs(v));
    if (v > 0) u /= pv;
    else u *= pv;
    mpz_class r = (u.get_num() * u.get_den()) % p;
    if (r < 0) r += p;
    return legendre(r.get_si(), p) == 1;
}

Outcome diverges() {
    Outcome o;
    std::ostringstream os;
    for (long p : {5L, 7L, 11L}) {
        auto fam = diverges_family(p, kFamilySize);
        int ok = 0;
        for (const auto& m : fam) {
            mpq_class val = 0;
            Poly f = m.c.f();
            mpq_class pw = 1;
            for (int i = 0; i <= f.deg(); ++i, pw *= p) val += f[i].rational() * pw;
            bool sq = padic_square(val * p, p);
            try {
                LocalImage s = sel12_local(m.c, Place::padic(p));
                LocalImage j = local_image(m.c, Place::padic(p), CurveKind::C1);
                bool sub = true;
                for (const auto& x : s.classes) sub = sub && j.classes.count(x);
                if (sq && sub && s.classes.size() < j.classes.size()) ++ok;
            } catch (const Error&) {
            }
        }
        if (ok != kFamilySize || static_cast<int>(fam.size()) != kFamilySize) o.ok = false;
        os << "p=" << p << " " << ok << "/" << kFamilySize << " ";
    }
    o.detail = os.str();
    return o;
}

Outcome densities() {
    Outcome o;
    double mx = 0, lo = 1e9, hi = 0;
    for (long p = 3; p <= kSweepPmax; p += 2) {
        if (!is_prime_l(static_cast<uint64_t>(p))) continue;
        SweepReport R = fp_sweep(p, 3);
        for (const auto& v : {R.reducible(), R.nontrivial_stab(), R.twodist_density()}) mx = std::max(mx, v.get_d());
        if (p >= 11) {
            double rp = R.smallonetwo_density().get_d() * p;
            lo = std::min(lo, rp);
            hi = std::max(hi, rp);
        }
    }
    bool band = lo >= kSmallOneTwoLow * kSmallOneTwoLead && hi <= kSmallOneTwoHigh * kSmallOneTwoLead;
    o.ok = mx <= kDensityCeiling && band;
    std::ostringstream os;
    os << std::setprecision(4) << "max proportion " << mx << ", r_p*p in [" << lo << ", " << hi << "] for 11<=p<=" << kSweepPmax;
    o.detail = os.str();
    return o;
}

bool zero_block(const Mat& A, int rows, int cols) {
    for (int i = 0; i < rows; ++i)
        for (int j = 3 - cols; j < 3; ++j)
            if (!A(i, j).is_zero()) return false;
    return true;
}

Outcome reducibility() {
    Outcome o;
    Base b = Base::fp(3);
    long red13 = 0, red13_bad = 0, red2 = 0, red2_bad = 0;
    std::vector<long> v(9);
    for (long code = 0; code < 19683; ++code) {
        long c = code;
        for (auto& x : v) {
            x = c % 3;
            c /= 3;
        }
        Mat A = Mat::from_ints(b, 3, 3, v);
        bool r1 = zero_block(A, 1, 3) || zero_block(A, 2, 2) || zero_block(A, 3, 1);
        bool r3 = zero_block(A, 1, 2) && zero_block(A, 2, 1);
        if (r1 || r3) {
            ++red13;
            if (!poly_discriminant(invariants_of(lift(A)).g()).is_zero()) ++red13_bad;
            continue;
        }
        for (int i : {1, 2}) {
            bool pattern = i == 1 ? zero_block(A, 1, 2) : zero_block(A, 2, 1);
            if (!pattern) continue;
            ++red2;
            Witness w = distinguished_witness(lift(A), i);
            if (w.status != WitnessStatus::Found || !is_witness(lift(A), i, w.X)) ++red2_bad;
        }
    }
    o.ok = red13_bad == 0 && red2_bad == 0;
    o.detail = std::to_string(red13) + " red1/red3 matrices (" + std::to_string(red13_bad) + " with nonzero disc), " +
               std::to_string(red2) + " red2 matrices (" + std::to_string(red2_bad) + " without witness)";
    return o;
}

Outcome group_orders() {
    Outcome o;
    long g3 = group_order(3, 3), g5 = group_order(5, 3);
    o.ok = g3 == 24 && g5 == 120 && g3 == 3 * (9 - 1) && g5 == 5 * (25 - 1);
    o.detail = "|SO3(F3)| = " + std::to_string(g3) + ", |SO3(F5)| = " + std::to_string(g5);
    return o;
}

Outcome heights() {
    Outcome o;
    std::ostringstream os;
    for (long X = 1; X <= 3; ++X) {
        mpz_class want = (2 * X * X - 1) * (2 * X * X * X * X - 1) * (2 * X * X * X - 1);
        long got = height_enumerate(X, 3, false, nullptr);
        if (want != got || box_count(X, 3) != want) o.ok = false;
        os << "X=" << X << " " << got << "/" << want.get_str() << " ";
    }
    std::mt19937 rng(kSeed + 5);
    int ok = 0;
    int L = height_exponent(3);
    Base q = Base::rationals();
    for (int t = 0; t < kHomogeneitySamples; ++t) {
        Invariants c = Invariants::from_ints(q, {static_cast<long>(rng() % 41) - 20, static_cast<long>(rng() % 41) - 20},
                                             static_cast<long>(rng() % 41) - 20);
        long lam = 2 + static_cast<long>(rng() % 5);
        if (height_power(scale_invariants(c, lam)) == height_power(c) * ipow(lam, L)) ++ok;
    }
    if (ok != kHomogeneitySamples) o.ok = false;
    os << "homogeneity " << ok << "/" << kHomogeneitySamples;
    o.detail = os.str();
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all = {
        {1, "orbit-count oracle", orbit_count},
        {2, "stabilizer oracle", stabilizers},
        {3, "round-trip", round_trip},
        {4, "distinguishedness", distinguished},
        {5, "coincidence vs conjugacy", coincide},
        {6, "2-adic diagonal of twos", lemma_two},
        {7, "self-dualization pipeline", pipeline},
        {8, "descent normalization", normalization},
        {9, "local sizes", local_sizes},
        {10, "unramified images", vtemp},
        {11, "divergent family witness", diverges},
        {12, "density lemmas", densities},
        {13, "reducibility patterns", reducibility},
        {14, "group order", group_orders},
        {15, "height window", heights},
    };
    int failed = 0;
    for (const auto& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.ok) ++failed;
        std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << std::setw(2) << std::setfill('0') << c.id << std::setfill(' ') << " " << c.name
                  << ": " << o.detail << " (" << std::fixed << std::setprecision(1) << secs << "s)" << std::defaultfloat << "\n";
        std::cout.flush();
    }
    return failed == 0 ? 0 : 1;
}
