#include "orbitlab/poly.hpp"

#include <sstream>

#include "orbitlab/matrix.hpp"

namespace orbitlab {

Poly::Poly(const Base& base, std::vector<Scalar> coeffs) : b(base), c(std::move(coeffs)) { trim(); }

Poly Poly::from_ints(const Base& base, const std::vector<long>& v) {
    std::vector<Scalar> c;
    for (long x : v) c.emplace_back(base, x);
    return Poly(base, c);
}

Poly Poly::from_rationals(const Base& base, const std::vector<mpq_class>& v) {
    std::vector<Scalar> c;
    for (const auto& x : v) c.emplace_back(base, x);
    return Poly(base, c);
}

Poly Poly::constant(const Scalar& s) { return Poly(s.base(), {s}); }

Poly Poly::x(const Base& base) { return Poly(base, {Scalar(base, 0L), Scalar(base, 1L)}); }

Poly Poly::monomial(const Base& base, int d, const Scalar& coef) {
    std::vector<Scalar> c(static_cast<size_t>(d) + 1, Scalar(base, 0L));
    c[d] = coef;
    return Poly(base, c);
}

Scalar Poly::operator[](int i) const {
    if (i < 0 || i > deg()) return Scalar(b, 0L);
    return c[i];
}

Scalar Poly::lc() const {
    if (c.empty()) return Scalar(b, 0L);
    return c.back();
}

void Poly::trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Poly Poly::to_base(const Base& nb) const {
    std::vector<Scalar> v;
    for (const auto& x : c) v.emplace_back(nb, x.rational());
    return Poly(nb, v);
}

std::vector<mpq_class> Poly::rationals() const {
    std::vector<mpq_class> v;
    for (const auto& x : c) v.push_back(x.rational());
    return v;
}

std::string Poly::str() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) os << ",";
        os << c[i].rational().get_str();
    }
    return os.str();
}

bool Poly::operator==(const Poly& o) const { return (*this - o).is_zero(); }

Poly operator+(const Poly& a, const Poly& b) {
    size_t n = std::max(a.c.size(), b.c.size());
    std::vector<Scalar> c(n, Scalar(a.b, 0L));
    for (size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) c[i] += b.c[i];
    return Poly(a.b, c);
}

Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& x : r.c) x = -x;
    return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.b);
    std::vector<Scalar> c(a.c.size() + b.c.size() - 1, Scalar(a.b, 0L));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
    return Poly(a.b, c);
}

Poly operator*(const Scalar& s, const Poly& a) {
    Poly r = a;
    for (auto& x : r.c) x *= s;
    r.trim();
    return r;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) fail(Errc::domain, "polynomial division by zero");
    Poly r = a;
    int db = b.deg();
    if (a.deg() < db) return {Poly(a.b), r};
    std::vector<Scalar> q(static_cast<size_t>(a.deg() - db) + 1, Scalar(a.b, 0L));
    Scalar il = b.lc().inv();
    for (int i = a.deg(); i >= db; --i) {
        if (static_cast<int>(r.c.size()) <= i) continue;
        Scalar f = r.c[i] * il;
        q[i - db] = f;
        for (int j = 0; j <= db; ++j) r.c[i - db + j] -= f * b.c[j];
        r.c.resize(i);
        r.trim();
    }
    return {Poly(a.b, q), r};
}

Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

Poly make_monic(const Poly& a) {
    if (a.is_zero()) return a;
    return a.lc().inv() * a;
}

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x % y;
        x = y;
        y = r;
    }
    return make_monic(x);
}

Poly derivative(const Poly& a) {
    if (a.deg() < 1) return Poly(a.b);
    std::vector<Scalar> c;
    for (int i = 1; i <= a.deg(); ++i) c.push_back(Scalar(a.b, static_cast<long>(i)) * a.c[i]);
    return Poly(a.b, c);
}

Scalar eval(const Poly& a, const Scalar& x) {
    Scalar r(a.b, 0L);
    for (int i = a.deg(); i >= 0; --i) r = r * x + a.c[i];
    return r;
}

Poly compose(const Poly& a, const Poly& b) {
    Poly r(a.b);
    for (int i = a.deg(); i >= 0; --i) r = r * b + Poly::constant(a.c[i]);
    return r;
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

Poly powmod(const Poly& a, const mpz_class& e, const Poly& m) {
    Poly r = Poly::constant(Scalar(a.b, 1L)) % m, base = a % m;
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        r = mulmod(r, r, m);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(r, base, m);
    }
    return r;
}

Poly even_lift(const Poly& f) {
    std::vector<Scalar> c(f.c.empty() ? 0 : 2 * f.c.size() - 1, Scalar(f.b, 0L));
    for (size_t i = 0; i < f.c.size(); ++i) c[2 * i] = f.c[i];
    return Poly(f.b, c);
}

Scalar resultant(const Poly& f, const Poly& g, int df, int dg) {
    const Base& b = f.b;
    if (df == 0) return f[0].pow(dg);
    if (dg == 0) return g[0].pow(df);
    int N = df + dg;
    Mat s(b, N, N);
    for (int r = 0; r < dg; ++r)
        for (int i = 0; i <= df; ++i) s(r, r + i) = f[df - i];
    for (int r = 0; r < df; ++r)
        for (int i = 0; i <= dg; ++i) s(dg + r, r + i) = g[dg - i];
    return det(s);
}

Scalar poly_discriminant(const Poly& f) {
    if (f.is_zero()) fail(Errc::domain, "discriminant of the zero polynomial");
    int d = f.deg();
    if (d == 0) return Scalar(f.b, 1L);
    Scalar r = resultant(f, derivative(f), d, d - 1);
    if ((static_cast<long>(d) * (d - 1) / 2) % 2) r = -r;
    return r / f.lc();
}

}  // namespace orbitlab
