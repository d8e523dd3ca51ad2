#pragma once

#include <string>
#include <vector>

#include "orbitlab/matrix.hpp"
#include "orbitlab/poly.hpp"

namespace orbitlab {

// T = [[0, A], [A*, 0]] on V1 + V2 with Gram diag(B, -B)
struct RepElement {
    Mat A, Astar, T;
    int n() const { return A.rows(); }
    const Base& base() const { return A.base(); }
};

Mat star(const Mat& A);  // A* = -B A^t B
Mat ambient_gram(const Base& b, int n);
RepElement lift(const Mat& A);

struct Invariants {
    Base base;
    std::vector<Scalar> a;  // a_1 .. a_{n-1}
    Scalar e;

    int n() const { return static_cast<int>(a.size()) + 1; }
    Poly f() const;  // x^n + a_1 x^{n-1} + ... + a_{n-1} x + e^2
    Poly g() const;  // f(x^2)
    bool regular_semisimple() const;
    std::string str() const;  // "a1,...,a_{n-1};e"
    Invariants negated_e() const;
    bool equal_up_to_sign(const Invariants& o) const;
    bool operator==(const Invariants& o) const;
    static Invariants from_f(const Poly& f, const Scalar& e);  // checks f(0) = e^2
    static Invariants from_ints(const Base& b, const std::vector<long>& a, long e);
};

Scalar pfaffian(const Mat& S);  // recursive expansion along the first row
Invariants invariants_of(const RepElement& T);

struct NilpotentData {
    int n = 0;
    Mat E[2], H[2], F[2];          // 2n x 2n operators
    Mat EA[2];                     // top-right blocks of E_1, E_2
    std::vector<Mat> slice[2];     // top-right blocks spanning z(F_i) in g_1
};

NilpotentData regular_nilpotents(int n, const Base& b);

enum class WitnessStatus { Found, None, Undecidable };
struct Witness {
    WitnessStatus status = WitnessStatus::Undecidable;
    Mat X;  // columns span X in V_i
};

bool is_witness(const RepElement& T, int i, const Mat& X);
Mat standard_block(const Base& b, int n, bool last);  // first or last m basis vectors
Witness distinguished_witness(const RepElement& T, int i, const std::vector<Mat>& candidates = {});

enum class Cusp { DiscZeroForced, Distinguished1, Distinguished2, None };
const char* cusp_name(Cusp c);
Cusp cusp_classify(const Mat& A);
bool top_right_zero(const Mat& A, int rows, int cols);

// coordinates a_ij with row r <-> i = m - r and column c <-> j = c - m
struct WeightSystem {
    int m = 1;
    explicit WeightSystem(int n) : m((n - 1) / 2) {}
    std::vector<int> exponent(int i, int j) const;  // exponents of r_1..r_m, s_1..s_m
    bool precedes(int i, int j, int i2, int j2) const;  // a_ij <= a_i2j2
    int row(int i) const { return m - i; }
    int col(int j) const { return j + m; }
};

}  // namespace orbitlab
