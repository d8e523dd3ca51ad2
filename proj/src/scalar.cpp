#include "orbitlab/scalar.hpp"

#include <algorithm>
#include <sstream>

namespace orbitlab {

const char* Error::code_name() const {
    switch (code_) {
        case Errc::domain: return "domain";
        case Errc::precondition: return "precondition";
        case Errc::precision: return "precision";
        case Errc::budget: return "budget";
        case Errc::usage: return "usage";
        case Errc::unsupported: return "unsupported";
        case Errc::internal: return "internal";
    }
    return "internal";
}

int Error::exit_code() const {
    switch (code_) {
        case Errc::usage: return 2;
        case Errc::domain:
        case Errc::precondition:
        case Errc::unsupported: return 3;
        case Errc::precision: return 4;
        case Errc::budget: return 5;
        case Errc::internal: return 1;
    }
    return 1;
}

void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

std::string Base::str() const {
    switch (ring) {
        case Ring::Q: return "Q";
        case Ring::R: return "R";
        case Ring::Fp: return "F" + std::to_string(p);
        case Ring::Qp: return "Q" + std::to_string(p) + ":" + std::to_string(prec);
    }
    return "?";
}

long vp(const mpz_class& a, long p) {
    if (a == 0) return kExactZero;
    mpz_class t = a, pp = p;
    return static_cast<long>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), pp.get_mpz_t()));
}

long vp(const mpq_class& a, long p) {
    if (a == 0) return kExactZero;
    return vp(a.get_num(), p) - vp(a.get_den(), p);
}

mpz_class ipow(long p, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return r;
}

static mpz_class mod_pos(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

static mpz_class inv_mod(const mpz_class& a, const mpz_class& m) {
    mpz_class r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t())) fail(Errc::domain, "not invertible mod p^k");
    return r;
}

long powmod_l(long a, long e, long m) {
    long long r = 1 % m, b = ((a % m) + m) % m;
    while (e > 0) {
        if (e & 1) r = static_cast<long long>((__int128)r * b % m);
        b = static_cast<long long>((__int128)b * b % m);
        e >>= 1;
    }
    return static_cast<long>(r);
}

long invmod_l(long a, long m) {
    long long g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
    if (a1 == 0) fail(Errc::domain, "division by zero mod p");
    while (a1) {
        long long q = g / a1;
        std::swap(g, a1);
        a1 -= q * g;
        std::swap(x, x1);
        x1 -= q * x;
    }
    if (g != 1) fail(Errc::domain, "not invertible");
    return static_cast<long>(((x % m) + m) % m);
}

long legendre(long a, long p) {
    a = ((a % p) + p) % p;
    if (a == 0) return 0;
    if (p == 2) return 1;
    return powmod_l(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

long sqrtmod_l(long a, long p) {
    a = ((a % p) + p) % p;
    if (a == 0 || p == 2) return a;
    if (legendre(a, p) != 1) fail(Errc::domain, "not a square mod p");
    long q = p - 1, s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    long z = 2;
    while (legendre(z, p) != -1) ++z;
    long m = s;
    long long c = powmod_l(z, q, p), t = powmod_l(a, q, p), r = powmod_l(a, (q + 1) / 2, p);
    while (t != 1) {
        long i = 0;
        long long tt = t;
        while (tt != 1) { tt = (__int128)tt * tt % p; ++i; }
        long long b = c;
        for (long j = 0; j < m - i - 1; ++j) b = (__int128)b * b % p;
        m = i;
        c = (__int128)b * b % p;
        t = (__int128)t * c % p;
        r = (__int128)r * b % p;
    }
    return static_cast<long>(std::min<long long>(r, p - r));
}

bool is_prime_l(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    auto mulm = [n](uint64_t a, uint64_t b) { return static_cast<uint64_t>((unsigned __int128)a * b % n); };
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = 1, b = a % n, e = d;
        while (e) {
            if (e & 1) x = mulm(x, b);
            b = mulm(b, b);
            e >>= 1;
        }
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulm(x, x);
            if (x == n - 1) { comp = false; break; }
        }
        if (comp) return false;
    }
    return true;
}

mpz_class padic_sqrt_unit(const mpz_class& u, long p, int prec) {
    mpz_class m = ipow(p, prec);
    mpz_class uu = mod_pos(u, m);
    if (p == 2) {
        if (prec >= 3 && mod_pos(uu, 8) != 1) fail(Errc::domain, "unit is not a square in Q2");
        mpz_class r = 1;
        for (int k = 3; k < prec; ++k) {
            mpz_class mk = ipow(2, k + 1);
            if (mod_pos(r * r - uu, mk) != 0) r += ipow(2, k - 1);
        }
        return mod_pos(r, m);
    }
    long r0 = sqrtmod_l(mpz_class(mod_pos(uu, p)).get_si(), p);
    mpz_class r = r0;
    int k = 1;
    while (k < prec) {
        k = std::min(2 * k, prec);
        mpz_class mk = ipow(p, k);
        r = mod_pos(r - (r * r - uu) * inv_mod(2 * r, mk), mk);
    }
    return r;
}

bool is_square_q(const mpq_class& a) {
    if (a < 0) return false;
    return mpz_perfect_square_p(a.get_num().get_mpz_t()) && mpz_perfect_square_p(a.get_den().get_mpz_t());
}

mpq_class sqrt_q(const mpq_class& a) {
    if (!is_square_q(a)) fail(Errc::domain, "rational is not a square");
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), a.get_num().get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), a.get_den().get_mpz_t());
    return mpq_class(n, d);
}

Scalar::Scalar(const Base& b, long v) : Scalar(b, mpq_class(v)) {}
Scalar::Scalar(const Base& b, const mpz_class& v) : Scalar(b, mpq_class(v)) {}

Scalar::Scalar(const Base& b, const mpq_class& v) : b_(b) {
    switch (b.ring) {
        case Ring::Q:
        case Ring::R: q_ = v; q_.canonicalize(); break;
        case Ring::Fp: {
            mpz_class pm = b.p;
            mpz_class n = mod_pos(v.get_num(), pm), d = mod_pos(v.get_den(), pm);
            if (d == 0) fail(Errc::domain, "denominator divisible by p");
            r_ = static_cast<long>((__int128)n.get_si() * invmod_l(d.get_si(), b.p) % b.p);
            break;
        }
        case Ring::Qp: {
            if (v == 0) { rel_ = 0; v_ = kExactZero; break; }
            mpz_class n = v.get_num(), d = v.get_den(), pp = b.p;
            long a = mpz_remove(n.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
            long c = mpz_remove(d.get_mpz_t(), d.get_mpz_t(), pp.get_mpz_t());
            v_ = a - c;
            rel_ = b.prec;
            mpz_class m = ipow(b.p, rel_);
            u_ = mod_pos(n * inv_mod(d, m), m);
            break;
        }
    }
}

Scalar Scalar::padic(const Base& b, long val, const mpz_class& unit, int rel) {
    Scalar s;
    s.b_ = b;
    s.v_ = val;
    s.u_ = unit;
    s.rel_ = rel;
    s.normalize_padic();
    return s;
}

Scalar Scalar::padic_zero(const Base& b, long absprec) {
    Scalar s;
    s.b_ = b;
    s.rel_ = 0;
    s.v_ = std::min(absprec, kExactZero);
    return s;
}

void Scalar::normalize_padic() {
    if (rel_ <= 0) { rel_ = 0; u_ = 0; v_ = std::min(v_, kExactZero); return; }
    mpz_class m = ipow(b_.p, rel_);
    u_ = mod_pos(u_, m);
    if (u_ == 0) { v_ = v_ + rel_; rel_ = 0; return; }
    long k = vp(u_, b_.p);
    if (k > 0) {
        u_ /= ipow(b_.p, k);
        v_ += k;
        rel_ -= static_cast<int>(k);
    }
}

bool Scalar::is_zero() const {
    switch (b_.ring) {
        case Ring::Q:
        case Ring::R: return q_ == 0;
        case Ring::Fp: return r_ == 0;
        case Ring::Qp: return rel_ == 0;
    }
    return false;
}

bool Scalar::is_one() const {
    switch (b_.ring) {
        case Ring::Q:
        case Ring::R: return q_ == 1;
        case Ring::Fp: return r_ == 1;
        case Ring::Qp: return rel_ > 0 && v_ == 0 && u_ == 1;
    }
    return false;
}

long Scalar::val() const {
    switch (b_.ring) {
        case Ring::Qp: return v_;
        case Ring::Fp: return r_ == 0 ? kExactZero : 0;
        default:
            if (b_.p > 1) return vp(q_, b_.p);
            fail(Errc::domain, "valuation needs a prime");
    }
}

long Scalar::absprec() const {
    if (b_.ring != Ring::Qp) return kExactZero;
    return rel_ == 0 ? v_ : std::min(v_ + rel_, kExactZero);
}

mpq_class Scalar::rational() const {
    switch (b_.ring) {
        case Ring::Q:
        case Ring::R: return q_;
        case Ring::Fp: return mpq_class(r_);
        case Ring::Qp: {
            if (rel_ == 0) return 0;
            if (v_ >= 0) return mpq_class(u_ * ipow(b_.p, v_));
            mpq_class r(u_, ipow(b_.p, -v_));
            r.canonicalize();
            return r;
        }
    }
    return 0;
}

void Scalar::check(const Scalar& o) const {
    if (!b_.same(o.b_)) fail(Errc::internal, "base mismatch: " + b_.str() + " vs " + o.b_.str());
}

Scalar Scalar::operator-() const {
    Scalar s = *this;
    switch (b_.ring) {
        case Ring::Q:
        case Ring::R: s.q_ = -q_; break;
        case Ring::Fp: s.r_ = r_ == 0 ? 0 : b_.p - r_; break;
        case Ring::Qp:
            if (rel_ > 0) s.u_ = mod_pos(-u_, ipow(b_.p, rel_));
            break;
    }
    return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    check(o);
    switch (b_.ring) {
        case Ring::Q:
        case Ring::R: q_ += o.q_; break;
        case Ring::Fp: r_ = (r_ + o.r_) % b_.p; break;
        case Ring::Qp: {
            long a1 = absprec(), a2 = o.absprec();
            long A = std::min(a1, a2);
            if (o.rel_ == 0) {
                if (rel_ == 0) { v_ = A; break; }
                if (A <= v_) { *this = padic_zero(b_, A); break; }
                rel_ = static_cast<int>(A - v_);
                normalize_padic();
                break;
            }
            if (rel_ == 0) {
                Scalar t = o;
                if (A <= t.v_) { *this = padic_zero(b_, A); break; }
                t.rel_ = static_cast<int>(A - t.v_);
                t.normalize_padic();
                *this = t;
                break;
            }
            long vm = std::min(v_, o.v_);
            long span = A - vm;
            mpz_class m = ipow(b_.p, span);
            mpz_class s = 0;
            if (v_ - vm < span) s += u_ * ipow(b_.p, v_ - vm);
            if (o.v_ - vm < span) s += o.u_ * ipow(b_.p, o.v_ - vm);
            s = mod_pos(s, m);
            if (s == 0) { *this = padic_zero(b_, A); break; }
            v_ = vm;
            u_ = s;
            rel_ = static_cast<int>(span);
            normalize_padic();
            break;
        }
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
    check(o);
    switch (b_.ring) {
        case Ring::Q:
        case Ring::R: q_ *= o.q_; break;
        case Ring::Fp: r_ = static_cast<long>((__int128)r_ * o.r_ % b_.p); break;
        case Ring::Qp: {
            if (rel_ == 0 || o.rel_ == 0) {
                long A = std::min(kExactZero, v_ + o.v_);
                *this = padic_zero(b_, A);
                break;
            }
            v_ += o.v_;
            rel_ = std::min(rel_, o.rel_);
            u_ = mod_pos(u_ * o.u_, ipow(b_.p, rel_));
            break;
        }
    }
    return *this;
}

Scalar Scalar::inv() const {
    Scalar s = *this;
    switch (b_.ring) {
        case Ring::Q:
        case Ring::R:
            if (q_ == 0) fail(Errc::domain, "division by zero");
            s.q_ = 1 / q_;
            break;
        case Ring::Fp: s.r_ = invmod_l(r_, b_.p); break;
        case Ring::Qp:
            if (rel_ == 0) {
                if (v_ >= kExactZero) fail(Errc::domain, "division by zero");
                fail(Errc::precision, "inverting a p-adic zero at precision " + std::to_string(v_));
            }
            s.v_ = -v_;
            s.u_ = inv_mod(u_, ipow(b_.p, rel_));
            break;
    }
    return s;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inv(); }

Scalar Scalar::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    Scalar r(b_, 1L), b = *this;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

Scalar Scalar::with_rel(int rel) const {
    if (b_.ring != Ring::Qp || rel_ == 0 || rel >= rel_) return *this;
    Scalar s = *this;
    s.rel_ = std::max(rel, 0);
    s.normalize_padic();
    return s;
}

bool Scalar::operator==(const Scalar& o) const {
    if (!b_.same(o.b_)) return false;
    return (*this - o).is_zero();
}

int Scalar::sign() const {
    if (b_.ring != Ring::Q && b_.ring != Ring::R) fail(Errc::domain, "sign needs an ordered field");
    return sgn(q_);
}

std::string Scalar::str() const {
    switch (b_.ring) {
        case Ring::Q:
        case Ring::R: return q_.get_str();
        case Ring::Fp: return std::to_string(r_);
        case Ring::Qp: {
            std::ostringstream os;
            if (rel_ == 0) {
                if (v_ >= kExactZero / 2) return "0";
                os << "O(" << b_.p << "^" << v_ << ")";
                return os.str();
            }
            os << b_.p << "^" << v_ << " * " << u_.get_str() << " mod " << b_.p << "^" << rel_;
            return os.str();
        }
    }
    return "";
}

bool is_square_scalar(const Scalar& a) {
    const Base& b = a.base();
    switch (b.ring) {
        case Ring::Q: return is_square_q(a.q());
        case Ring::R: return a.q() >= 0;
        case Ring::Fp: return a.is_zero() || b.p == 2 || legendre(a.residue(), b.p) == 1;
        case Ring::Qp: {
            if (a.is_zero()) return true;
            if (a.val() % 2 != 0) return false;
            if (b.p == 2) {
                if (a.rel() < 3) fail(Errc::precision, "need 3 bits to test squares in Q2");
                return mpz_class(a.unit() % 8) == 1;
            }
            mpz_class r = a.unit() % b.p;
            return legendre(r.get_si(), b.p) == 1;
        }
    }
    return false;
}

Scalar sqrt_scalar(const Scalar& a) {
    const Base& b = a.base();
    switch (b.ring) {
        case Ring::Q:
        case Ring::R: return Scalar(b, sqrt_q(a.q()));
        case Ring::Fp: return Scalar(b, sqrtmod_l(a.residue(), b.p));
        case Ring::Qp: {
            if (a.is_zero()) return Scalar::padic_zero(b, a.val() / 2);
            if (!is_square_scalar(a)) fail(Errc::domain, "p-adic number is not a square");
            int rel = a.rel();
            int out = b.p == 2 ? rel - 1 : rel;
            mpz_class r = padic_sqrt_unit(a.unit(), b.p, rel);
            return Scalar::padic(b, a.val() / 2, r, out);
        }
    }
    return a;
}

}  // namespace orbitlab
