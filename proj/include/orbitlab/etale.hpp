#pragma once

#include <string>
#include <vector>

#include "orbitlab/factor.hpp"
#include "orbitlab/matrix.hpp"

namespace orbitlab {

struct Place {
    enum Kind { Finite, Real, Padic, Global } kind = Global;
    long p = 0;
    int prec = 20;

    static Place of(const Base& b);
    static Place real() { return {Real, 0, 0}; }
    static Place padic(long p, int prec = 20) { return {Padic, p, prec}; }
    static Place global() { return {Global, 0, 0}; }
    Base base() const;
    std::string str() const;
};

struct Factor {
    enum Kind { Exact, Padic, RealLine, ComplexPair } kind = Exact;
    Poly g;
    int degree = 1;
    PadicFactor pad;
    RealRoot root;
};

struct EtaleAlgebra {
    Base base;
    Poly f;
    std::vector<Factor> factors;

    int n() const { return f.deg(); }
    Poly gamma() const;
    Poly one() const;
    Poly elem(const std::vector<long>& coeffs) const;
    Poly reduce(const Poly& a) const;
    Poly mul(const Poly& a, const Poly& b) const;
    Poly inv(const Poly& a) const;
    Poly pow(const Poly& a, long e) const;
    Mat mult_matrix(const Poly& a) const;
    Mat coords(const Poly& a) const;  // column vector in the power basis
    Poly from_coords(const Mat& v) const;
    Scalar norm(const Poly& a) const;
    Scalar trace(const Poly& a) const;
    int real_root_count() const;
};

EtaleAlgebra etale_build(const Poly& f, bool factorize = true);  // factorize = false: arithmetic only
EtaleAlgebra base_change(const EtaleAlgebra& L, const Base& b);
std::pair<Scalar, Scalar> etale_norm_trace(const EtaleAlgebra& L, const Poly& a);

struct SquareClass {
    Place place;
    std::vector<std::vector<int>> labels;  // one F2-vector per factor
    std::vector<int> norm;                 // class of the norm in k^x/k^x2

    bool trivial() const;
    bool norm_trivial() const;
    SquareClass operator*(const SquareClass& o) const;
    bool operator==(const SquareClass& o) const { return labels == o.labels; }
    bool operator!=(const SquareClass& o) const { return !(*this == o); }
    bool operator<(const SquareClass& o) const { return labels < o.labels; }
    std::string str() const;
};

SquareClass square_class(const EtaleAlgebra& L, const Poly& a);
std::vector<int> scalar_class(const Scalar& a, const Place& pl);
std::vector<int> rational_class(const mpq_class& a, const Place& pl);

int hilbert_q(const mpq_class& a, const mpq_class& b, long p);  // p = 0 is the real place
int hilbert_symbol(const Scalar& a, const Scalar& b, const Place& pl);

// exact tests over Q
bool is_square_in_field(const Poly& h, const Poly& a);  // a a square in Q[x]/(h), h irreducible
mpz_class squarefree_kernel(const mpz_class& n);
std::vector<mpz_class> prime_factors(const mpz_class& n);

}  // namespace orbitlab
