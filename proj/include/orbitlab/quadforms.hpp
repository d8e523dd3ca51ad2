#pragma once

#include <optional>
#include <vector>

#include "orbitlab/etale.hpp"
#include "orbitlab/matrix.hpp"

namespace orbitlab {

struct Diagonalization {
    Mat P;                  // P^t G P = diag(d)
    std::vector<Scalar> d;
};

// char != 2; degenerate input raises a domain error naming the radical
Diagonalization diagonalize(const Mat& G);

struct FormInvariants {
    int rank = 0;
    std::vector<int> disc;  // square class of det at the place
    bool has_hasse = false;
    int hasse = 1;          // prod_{i<j} (d_i, d_j)
    bool has_signature = false;
    int pos = 0, neg = 0;
};

FormInvariants form_invariants(const Mat& G, const Place& pl);
int hasse_of_diagonal(const std::vector<mpq_class>& d, const Place& pl);

// maximal Witt index at the place; Global applies Hasse-Minkowski over the relevant places
bool is_split(const Mat& G, const Place& pl);
std::vector<long> relevant_primes(const Mat& G);

std::optional<Mat> isotropic_vector(const Mat& G);
Mat to_standard(const Mat& G);                        // P^t G P = antidiagonal B
Mat complete_from_isotropic(const Mat& G, const Mat& X);  // same, with the first m columns spanning X
Mat split_isometry(const Mat& Q, const Mat& target);  // P^t Q P = target
Mat max_isotropic(const Mat& G);                      // columns span a maximal isotropic subspace

}  // namespace orbitlab
