#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orbitlab {

enum class Errc { domain, precondition, precision, budget, usage, unsupported, internal };

class Error : public std::runtime_error {
public:
    Error(Errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
    Errc code() const { return code_; }
    const char* code_name() const;
    int exit_code() const;

private:
    Errc code_;
};

[[noreturn]] void fail(Errc c, const std::string& msg);

// R carries rational coefficients; real questions are answered by root isolation.
enum class Ring { Q, R, Fp, Qp };

struct Base {
    Ring ring = Ring::Q;
    long p = 0;
    int prec = 20;

    static Base rationals() { return {Ring::Q, 0, 0}; }
    static Base reals() { return {Ring::R, 0, 0}; }
    static Base fp(long p) { return {Ring::Fp, p, 0}; }
    static Base qp(long p, int prec = 20) { return {Ring::Qp, p, prec}; }

    bool exact() const { return ring != Ring::Qp; }
    bool same(const Base& o) const { return ring == o.ring && p == o.p; }
    std::string str() const;
};

constexpr long kExactZero = 1L << 40;

class Scalar {
public:
    Scalar() = default;
    Scalar(const Base& b, long v);
    Scalar(const Base& b, const mpz_class& v);
    Scalar(const Base& b, const mpq_class& v);

    static Scalar padic(const Base& b, long val, const mpz_class& unit, int rel);
    static Scalar padic_zero(const Base& b, long absprec);

    const Base& base() const { return b_; }
    bool is_zero() const;
    bool is_one() const;

    // Qp: valuation (absolute precision if zero). Q: p-adic valuation w.r.t. base p when set.
    long val() const;
    long absprec() const;
    int rel() const { return rel_; }
    const mpz_class& unit() const { return u_; }
    long residue() const { return r_; }
    const mpq_class& q() const { return q_; }

    // exact representative: the rational for Q/R, residue in [0,p) for Fp, p^v*u for Qp
    mpq_class rational() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    Scalar inv() const;
    Scalar pow(long e) const;
    Scalar with_rel(int rel) const;

    // equality to precision (Qp), exact otherwise
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    int sign() const;  // Q/R only
    std::string str() const;

private:
    Base b_;
    mpq_class q_;
    long r_ = 0;
    long v_ = 0;
    mpz_class u_;
    int rel_ = 0;

    void check(const Scalar& o) const;
    void normalize_padic();
};

inline Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
inline Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
inline Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
inline Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

// integer helpers
long vp(const mpz_class& a, long p);  // valuation; kExactZero for 0
long vp(const mpq_class& a, long p);
mpz_class ipow(long p, long e);
long powmod_l(long a, long e, long m);
long invmod_l(long a, long m);
long legendre(long a, long p);
long sqrtmod_l(long a, long p);  // Tonelli-Shanks, a a QR mod odd p
bool is_prime_l(uint64_t n);
mpz_class padic_sqrt_unit(const mpz_class& u, long p, int prec);  // u unit square mod p^prec
bool is_square_q(const mpq_class& a);
mpq_class sqrt_q(const mpq_class& a);  // exact, a a perfect square
Scalar sqrt_scalar(const Scalar& a);   // exact sqrt, precondition square
bool is_square_scalar(const Scalar& a);

}  // namespace orbitlab
