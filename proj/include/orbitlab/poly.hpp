#pragma once

#include <utility>
#include <vector>

#include "orbitlab/scalar.hpp"

namespace orbitlab {

// Dense polynomial, ascending coefficients, trailing zeros trimmed.
struct Poly {
    Base b;
    std::vector<Scalar> c;

    Poly() = default;
    explicit Poly(const Base& base) : b(base) {}
    Poly(const Base& base, std::vector<Scalar> coeffs);
    static Poly from_ints(const Base& base, const std::vector<long>& coeffs);
    static Poly from_rationals(const Base& base, const std::vector<mpq_class>& coeffs);
    static Poly constant(const Scalar& s);
    static Poly x(const Base& base);
    static Poly monomial(const Base& base, int d, const Scalar& coef);

    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    Scalar operator[](int i) const;
    Scalar lc() const;
    bool monic() const { return !c.empty() && c.back().is_one(); }
    void trim();
    Poly to_base(const Base& nb) const;
    std::vector<mpq_class> rationals() const;
    std::string str() const;
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator-(const Poly& a);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Scalar& s, const Poly& a);
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);  // monic, exact fields
Poly make_monic(const Poly& a);
Poly derivative(const Poly& a);
Scalar eval(const Poly& a, const Scalar& x);
Poly compose(const Poly& a, const Poly& b);  // a(b(x))
Poly powmod(const Poly& a, const mpz_class& e, const Poly& m);
Poly mulmod(const Poly& a, const Poly& b, const Poly& m);
Poly even_lift(const Poly& f);  // f(x^2)

Scalar resultant(const Poly& f, const Poly& g, int df, int dg);  // Sylvester with formal degrees
Scalar poly_discriminant(const Poly& f);

}  // namespace orbitlab
