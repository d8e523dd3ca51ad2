#pragma once

#include <vector>

#include "orbitlab/scalar.hpp"

namespace orbitlab {

struct Poly;

class Mat {
public:
    Mat() = default;
    Mat(const Base& b, int rows, int cols);
    static Mat identity(const Base& b, int n);
    static Mat antidiag(const Base& b, int n);  // the split form B
    static Mat from_ints(const Base& b, int rows, int cols, const std::vector<long>& rowmajor);
    static Mat from_rationals(const Base& b, int rows, int cols, const std::vector<mpq_class>& rowmajor);

    const Base& base() const { return b_; }
    int rows() const { return r_; }
    int cols() const { return c_; }
    Scalar& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const Scalar& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    Mat col(int j) const;
    void set_col(int j, const Mat& v);
    Mat cols_range(int j0, int j1) const;
    Mat block(int i0, int j0, int nr, int nc) const;
    void set_block(int i0, int j0, const Mat& m);
    Mat t() const;
    bool is_zero() const;
    bool operator==(const Mat& o) const;
    bool operator!=(const Mat& o) const { return !(*this == o); }
    Mat to_base(const Base& b) const;  // reinterpret rational entries
    std::vector<mpq_class> rationals() const;

private:
    Base b_;
    int r_ = 0, c_ = 0;
    std::vector<Scalar> a_;
};

Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator-(const Mat& a);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(const Scalar& s, const Mat& a);
Mat hcat(const Mat& a, const Mat& b);
Mat commutator(const Mat& a, const Mat& b);

Scalar det(const Mat& a);
Mat inverse(const Mat& a);
Mat solve(const Mat& a, const Mat& rhs);  // a square invertible
Mat kernel(const Mat& a);                 // columns span the right nullspace
int rank(const Mat& a);
Scalar trace(const Mat& a);
Scalar bilinear(const Mat& gram, const Mat& x, const Mat& y);  // x^t G y for column vectors
Poly charpoly(const Mat& a);              // Berkowitz, monic, division free

}  // namespace orbitlab
