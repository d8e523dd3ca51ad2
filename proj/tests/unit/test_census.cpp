#include <doctest.h>

#include <cstdlib>
#include <set>

#include "orbitlab/census.hpp"

using namespace orbitlab;

namespace {

long cubic_value(long a1, long a2, long c, long x, long p) { return ((((x + a1) % p * x + a2) % p * x + c) % p + p) % p; }

// factor pattern of a monic cubic by root counting
struct Pattern {
    int roots = 0;
    bool repeated = false;
};

Pattern pattern(long p, long a1, long a2, long c) {
    Pattern out;
    std::vector<long> rs;
    for (long x = 0; x < p; ++x)
        if (cubic_value(a1, a2, c, x, p) == 0) rs.push_back(x);
    out.roots = static_cast<int>(rs.size());
    for (long r : rs) {
        long d = ((3 * r * r + 2 * a1 * r + a2) % p + p) % p;
        if (d == 0) out.repeated = true;
    }
    return out;
}

bool is_sq(long a, long p) {
    for (long x = 0; x < p; ++x)
        if (x * x % p == ((a % p) + p) % p) return true;
    return false;
}

}  // namespace

TEST_CASE("orthogonal group orders") {
    CHECK(group_order(3, 3) == 24);
    CHECK(group_order(5, 3) == 120);
    CHECK(group_order(7, 3) == 7 * 48);
    CHECK(group_order_formula(5, 5) == 9360000);
    CHECK(static_cast<long>(so3(3).size()) == 24);
}

TEST_CASE("classification agrees with root counting") {
    for (long p : {3L, 5L, 7L, 11L}) {
        for (long a1 = 0; a1 < p; ++a1)
            for (long a2 = 0; a2 < p; ++a2)
                for (long e = 0; e < p; ++e) {
                    long c = e * e % p;
                    CensusRecord r = classify_fp(p, {a1, a2}, e);
                    Pattern pt = pattern(p, a1, a2, c);
                    CHECK(r.rs == (c != 0 && !pt.repeated));
                    if (!r.rs) continue;
                    CHECK(r.factors == (pt.roots == 0 ? 1 : pt.roots == 1 ? 2 : 3));
                    CHECK(r.irreducible == (pt.roots == 0));
                    bool sq = true;
                    for (long x = 0; x < p; ++x)
                        if (cubic_value(a1, a2, c, x, p) == 0 && !is_sq(-x, p)) sq = false;
                    CHECK(r.minus_gamma_square == sq);
                    CHECK(r.e_zero == (e == 0));
                }
    }
}

TEST_CASE("sweep totals and determinism across threads") {
    SweepReport one = fp_sweep(13, 3, 1);
    SweepReport four = fp_sweep(13, 3, 4);
    CHECK(one.total == 13 * 13 * 13);
    CHECK(one.rs == four.rs);
    CHECK(one.good == four.good);
    CHECK(one.twodist == four.twodist);
    CHECK(one.by_flags == four.by_flags);
    CHECK(one.reducible() == four.reducible());
}

TEST_CASE("small-one-two count against root multisets") {
    for (long p : {5L, 7L, 11L, 13L}) {
        long brute = 0;
        for (long u = 1; u < p; ++u)
            for (long v = u + 1; v < p; ++v)
                if (is_sq(u * v, p)) ++brute;
        CHECK(smallonetwo_oracle(p) == brute);
        CHECK(fp_sweep(p, 3).smallonetwo == brute);
    }
}

TEST_CASE("sampled sweeps record their seed") {
    SweepReport r = fp_sweep(101, 5, 1, 2000);
    CHECK(r.sampled);
    CHECK(r.total == 2000);
    CHECK(r.seed == census_seed());
    SweepReport s = fp_sweep(101, 5, 2, 2000);
    CHECK(r.by_flags == s.by_flags);
}

TEST_CASE("brute-force orbits obey orbit-stabilizer") {
    OrbitCensus oc = bruteforce_all(3);
    CHECK(oc.group == 576);
    for (const auto& [k, F] : oc.fibers) {
        long sum = 0;
        for (size_t i = 0; i < F.reps.size(); ++i) {
            CHECK(F.orbit_sizes[i] * F.stabilizers[i] == oc.group);
            CHECK(invariants3(3, F.reps[i]) == k);
            sum += F.orbit_sizes[i];
        }
        CHECK(sum > 0);
        for (size_t i = 0; i < F.reps.size(); ++i)
            for (size_t j = i + 1; j < F.reps.size(); ++j) CHECK_FALSE(conjugate(3, F.reps[i], F.reps[j]));
    }
}

TEST_CASE("box counts by direct enumeration") {
    for (int X = 1; X <= 3; ++X) {
        long brute = 0;
        long b1 = 1L * X * X, b2 = 1L * X * X * X * X, b3 = 1L * X * X * X;
        for (long a1 = -b1; a1 <= b1; ++a1)
            for (long a2 = -b2; a2 <= b2; ++a2)
                for (long e = -b3; e <= b3; ++e)
                    if (std::labs(a1) < b1 && std::labs(a2) < b2 && std::labs(e) < b3) ++brute;
        CHECK(box_count(X, 3) == brute);
        CHECK(height_enumerate(X, 3, false, nullptr) == brute);
    }
}

TEST_CASE("height is homogeneous of degree one") {
    Base q = Base::rationals();
    Invariants c = Invariants::from_ints(q, {3, -7}, 5);
    mpz_class h = height_power(c);
    int L = height_exponent(3);
    for (long lam : {2L, 3L, 5L}) {
        Invariants s = scale_invariants(c, lam);
        mpz_class hl = height_power(s);
        CHECK(hl == h * ipow(lam, L));
    }
    CHECK(in_window(c, 2));
    CHECK_FALSE(in_window(c, 1));
}

TEST_CASE("divergent family certificates") {
    auto fam = diverges_family(7, 10);
    CHECK(fam.size() == 10);
    for (const auto& m : fam) {
        Scalar val = m.c.f()[0];
        CHECK(m.pfp_square);
        CHECK(m.c.e * m.c.e == m.c.f()[0]);
        CHECK_FALSE(val.is_zero());
    }
}
