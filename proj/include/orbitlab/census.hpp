#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "orbitlab/theta.hpp"

namespace orbitlab {

constexpr uint64_t kDefaultSeed = 0xA5EED;
uint64_t census_seed();  // ORBITLAB_SEED overrides the default

struct CensusRecord {
    std::vector<long> a;  // a_1 .. a_{n-1} mod p
    long e = 0;
    bool rs = false, irreducible = false, minus_gamma_square = false, e_zero = false, smallonetwo = false;
    int factors = 0;      // distinct irreducible factors of f
};

struct SweepReport {
    long p = 0;
    int n = 3;
    bool sampled = false;
    uint64_t seed = kDefaultSeed;
    long total = 0;
    long rs = 0, good = 0, rs_irreducible = 0, twodist = 0, smallonetwo = 0;
    std::map<std::string, long> by_flags;  // "rs=1,irr=0,k=3,sq=1,e0=0"

    mpq_class reducible() const;      // 1 - good/total
    mpq_class nontrivial_stab() const;  // 1 - rs_irreducible/total
    mpq_class twodist_density() const;  // (non-rs or -gamma square)/total
    mpq_class smallonetwo_density() const;
};

CensusRecord classify_fp(long p, const std::vector<long>& a, long e);
SweepReport fp_sweep(long p, int n, int threads = 1, long sample_size = 200000,
                     const std::function<void(const CensusRecord&)>& sink = nullptr);
long smallonetwo_oracle(long p);  // root multisets {0, u, v}, uv a nonzero square

// 3x3 matrices over F_p as row-major residue arrays
using M3 = std::array<int, 9>;
std::vector<M3> so3(long p);
long group_order(long p, int n);
long group_order_formula(long p, int n);

struct Fiber {
    std::array<int, 3> c{};        // a1, a2, e
    std::vector<M3> reps;          // one per orbit
    std::vector<long> orbit_sizes;
    std::vector<long> stabilizers; // counted directly as #{(g1, g2) : g1 A = A g2}
};

struct OrbitCensus {
    long p = 0;
    long group = 0;                // |SO3 x SO3|
    std::map<std::array<int, 3>, Fiber> fibers;  // regular semisimple fibers only
};

OrbitCensus bruteforce_all(long p);
Fiber bruteforce_orbits(long p, const Invariants& c);
bool conjugate(long p, const M3& A, const M3& B);
std::array<int, 3> invariants3(long p, const M3& A);
M3 to_m3(const Mat& A);

struct HeightFlags {
    Invariants c;
    bool rs = false, coincide = false, minimal = true;
    bool has_proxy = false, coincide_mod_p = false;
    long proxy_p = 0;
};

bool in_window(const Invariants& c, const mpq_class& X);
mpz_class height_power(const Invariants& c);  // h(c)^L, L = lcm(2, 4, .., 2(n-1), n)
int height_exponent(int n);
Invariants scale_invariants(const Invariants& c, long lambda);
mpz_class box_count(const mpq_class& X, int n);
long height_enumerate(const mpq_class& X, int n, bool classify, const std::function<void(const HeightFlags&)>& sink);

struct DivergesMember {
    Invariants c;
    long u = 0, v = 0, t = 0;
    bool pfp_square = false;
};
std::vector<DivergesMember> diverges_family(long p, int count);

}  // namespace orbitlab
