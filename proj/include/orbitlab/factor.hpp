#pragma once

#include <utility>
#include <vector>

#include "orbitlab/poly.hpp"

namespace orbitlab {

// polynomials over F_p as ascending residue vectors
namespace fpx {
using FP = std::vector<long>;
void trim(FP& a);
FP add(const FP& a, const FP& b, long p);
FP sub(const FP& a, const FP& b, long p);
FP mul(const FP& a, const FP& b, long p);
std::pair<FP, FP> divmod(const FP& a, const FP& b, long p);
FP mod(const FP& a, const FP& b, long p);
FP monic(const FP& a, long p);
FP gcd(const FP& a, const FP& b, long p);
FP xgcd(const FP& a, const FP& b, long p, FP& s, FP& t);
FP powmod(const FP& a, const mpz_class& e, const FP& m, long p);
FP deriv(const FP& a, long p);
long eval(const FP& a, long x, long p);
int deg(const FP& a);
std::vector<std::pair<FP, int>> factor(const FP& f, long p);  // monic irreducible factors with multiplicity
bool is_irreducible(const FP& f, long p);
}  // namespace fpx

// polynomials over F_q = F_p[t]/(m), m monic irreducible; elements are fpx residues mod m
namespace fqx {
struct Field {
    long p = 0;
    fpx::FP m;
    int k() const { return fpx::deg(m); }
    mpz_class q() const;
};
using E = fpx::FP;
using PX = std::vector<E>;  // ascending
E reduce(const Field& F, const E& a);
E mul(const Field& F, const E& a, const E& b);
E inv(const Field& F, const E& a);
E pow(const Field& F, const E& a, const mpz_class& e);
void trim(PX& a);
int deg(const PX& a);
PX add(const Field& F, const PX& a, const PX& b);
PX sub(const Field& F, const PX& a, const PX& b);
PX mul(const Field& F, const PX& a, const PX& b);
std::pair<PX, PX> divmod(const Field& F, const PX& a, const PX& b);
PX mod(const Field& F, const PX& a, const PX& b);
PX monic(const Field& F, const PX& a);
PX gcd(const Field& F, const PX& a, const PX& b);
PX powmod(const Field& F, const PX& a, const mpz_class& e, const PX& m);
E eval(const Field& F, const PX& a, const E& x);
std::vector<std::pair<PX, int>> factor(const Field& F, const PX& f);  // monic irreducible factors with multiplicity
bool is_square(const Field& F, const PX& modulus, const PX& a);         // a nonzero in F[z]/(modulus), modulus irreducible
}  // namespace fqx

using ZP = std::vector<mpz_class>;  // integer polynomial, ascending

std::vector<std::pair<Poly, int>> factor_fp(const Poly& f);
std::vector<std::pair<Poly, int>> factor_q(const Poly& f);  // monic rational factors
std::vector<ZP> factor_z_squarefree(const ZP& f);             // primitive irreducible factors

// F = lc * prod(facs) mod p with facs monic pairwise coprime; returns monic lifts mod p^k
std::vector<ZP> hensel_lift(const ZP& F, const std::vector<fpx::FP>& facs, long p, int k);

struct PadicFactor {
    enum Kind { Linear, Unramified, OneSegment, General } kind = Unramified;
    Poly g;               // monic factor in x over Q_p
    int e = 1, f = 1;     // ramification index and residue degree
    long scale = 0;       // g(x) = p^{scale*deg} gk(x/p^scale)
    ZP gk;                // integral monic factor in y, mod p^W
    int W = 0;
    mpz_class root;       // Linear: root of gk
    mpz_class shift;      // OneSegment: y = z + shift
    long h = 0, ep = 1, ell = 1, s = 0, t = 0;
    fpx::FP R;            // OneSegment residual polynomial
    ZP phi;               // General: key polynomial in y, monic, mod p^W
    fqx::PX psi;          // General: residual factor over F_p[t]/(phi mod p)
};

std::vector<PadicFactor> factor_qp(const Poly& f, long p, int prec);

struct RealRoot {
    mpq_class lo, hi;  // isolating interval (lo, hi], endpoints are not roots
};
std::vector<RealRoot> real_roots(const Poly& f);  // f squarefree with rational coefficients
int sturm_count(const Poly& f, const mpq_class& lo, const mpq_class& hi);  // roots in (lo, hi]
int sign_at(const Poly& f, const mpq_class& x);

}  // namespace orbitlab
