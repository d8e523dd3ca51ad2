#include "orbitlab/matrix.hpp"

#include "orbitlab/poly.hpp"

namespace orbitlab {

Mat::Mat(const Base& b, int rows, int cols)
    : b_(b), r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, Scalar(b, 0L)) {}

Mat Mat::identity(const Base& b, int n) {
    Mat m(b, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Scalar(b, 1L);
    return m;
}

Mat Mat::antidiag(const Base& b, int n) {
    Mat m(b, n, n);
    for (int i = 0; i < n; ++i) m(i, n - 1 - i) = Scalar(b, 1L);
    return m;
}

Mat Mat::from_ints(const Base& b, int rows, int cols, const std::vector<long>& v) {
    Mat m(b, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Scalar(b, v.at(static_cast<size_t>(i) * cols + j));
    return m;
}

Mat Mat::from_rationals(const Base& b, int rows, int cols, const std::vector<mpq_class>& v) {
    Mat m(b, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Scalar(b, v.at(static_cast<size_t>(i) * cols + j));
    return m;
}

Mat Mat::col(int j) const { return block(0, j, r_, 1); }

void Mat::set_col(int j, const Mat& v) { set_block(0, j, v); }

Mat Mat::cols_range(int j0, int j1) const { return block(0, j0, r_, j1 - j0); }

Mat Mat::block(int i0, int j0, int nr, int nc) const {
    Mat m(b_, nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) m(i, j) = (*this)(i0 + i, j0 + j);
    return m;
}

void Mat::set_block(int i0, int j0, const Mat& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) (*this)(i0 + i, j0 + j) = m(i, j);
}

Mat Mat::t() const {
    Mat m(b_, c_, r_);
    for (int i = 0; i < r_; ++i)
        for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

bool Mat::is_zero() const {
    for (const auto& x : a_)
        if (!x.is_zero()) return false;
    return true;
}

bool Mat::operator==(const Mat& o) const {
    if (r_ != o.r_ || c_ != o.c_) return false;
    for (size_t i = 0; i < a_.size(); ++i)
        if (a_[i] != o.a_[i]) return false;
    return true;
}

Mat Mat::to_base(const Base& b) const {
    Mat m(b, r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = Scalar(b, a_[i].rational());
    return m;
}

std::vector<mpq_class> Mat::rationals() const {
    std::vector<mpq_class> v;
    for (const auto& x : a_) v.push_back(x.rational());
    return v;
}

Mat operator+(const Mat& a, const Mat& b) {
    Mat m = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) += b(i, j);
    return m;
}

Mat operator-(const Mat& a) {
    Mat m = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = -a(i, j);
    return m;
}

Mat operator-(const Mat& a, const Mat& b) { return a + (-b); }

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) fail(Errc::internal, "matrix shape mismatch");
    Mat m(a.base(), a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero() && a.base().exact()) continue;
            for (int j = 0; j < b.cols(); ++j) m(i, j) += a(i, k) * b(k, j);
        }
    return m;
}

Mat operator*(const Scalar& s, const Mat& a) {
    Mat m = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = s * a(i, j);
    return m;
}

Mat hcat(const Mat& a, const Mat& b) {
    Mat m(a.base(), a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

namespace {

// best pivot row for column k among rows [k, n)
int pick_pivot(const Mat& m, int k, int col) {
    int best = -1;
    long bv = 0;
    for (int i = k; i < m.rows(); ++i) {
        const Scalar& x = m(i, col);
        if (x.is_zero()) continue;
        if (m.base().ring != Ring::Qp) return i;
        if (best < 0 || x.val() < bv) { best = i; bv = x.val(); }
    }
    return best;
}

[[noreturn]] void singular(const Mat& m) {
    if (m.base().ring == Ring::Qp) fail(Errc::precision, "matrix singular to working precision");
    fail(Errc::domain, "singular matrix");
}

void swap_rows(Mat& m, int i, int j) {
    if (i == j) return;
    for (int c = 0; c < m.cols(); ++c) std::swap(m(i, c), m(j, c));
}

}  // namespace

Scalar det(const Mat& a) {
    int n = a.rows();
    Mat m = a;
    Scalar d(a.base(), 1L);
    for (int k = 0; k < n; ++k) {
        int p = pick_pivot(m, k, k);
        if (p < 0) {
            if (a.base().ring == Ring::Qp) {
                long ap = kExactZero;
                for (int i = k; i < n; ++i) ap = std::min(ap, m(i, k).absprec());
                Scalar z = Scalar::padic_zero(a.base(), ap);
                return z * d;
            }
            return Scalar(a.base(), 0L);
        }
        if (p != k) { swap_rows(m, p, k); d = -d; }
        Scalar piv = m(k, k);
        d *= piv;
        Scalar ip = piv.inv();
        for (int i = k + 1; i < n; ++i) {
            if (m(i, k).is_zero()) continue;
            Scalar f = m(i, k) * ip;
            for (int j = k; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return d;
}

Mat solve(const Mat& a, const Mat& rhs) {
    int n = a.rows();
    Mat m = hcat(a, rhs);
    int w = m.cols();
    for (int k = 0; k < n; ++k) {
        int p = pick_pivot(m, k, k);
        if (p < 0) singular(a);
        swap_rows(m, p, k);
        Scalar ip = m(k, k).inv();
        for (int j = k; j < w; ++j) m(k, j) *= ip;
        for (int i = 0; i < n; ++i) {
            if (i == k || m(i, k).is_zero()) continue;
            Scalar f = m(i, k);
            for (int j = k; j < w; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return m.block(0, n, n, rhs.cols());
}

Mat inverse(const Mat& a) { return solve(a, Mat::identity(a.base(), a.rows())); }

namespace {

std::vector<int> rref(Mat& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int c = 0; c < m.cols() && row < m.rows(); ++c) {
        int p = pick_pivot(m, row, c);
        if (p < 0) continue;
        swap_rows(m, p, row);
        Scalar ip = m(row, c).inv();
        for (int j = c; j < m.cols(); ++j) m(row, j) *= ip;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, c).is_zero()) continue;
            Scalar f = m(i, c);
            for (int j = c; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

}  // namespace

Mat kernel(const Mat& a) {
    Mat m = a;
    std::vector<int> piv = rref(m);
    std::vector<bool> is_piv(a.cols(), false);
    for (int c : piv) is_piv[c] = true;
    std::vector<int> free;
    for (int c = 0; c < a.cols(); ++c)
        if (!is_piv[c]) free.push_back(c);
    Mat k(a.base(), a.cols(), static_cast<int>(free.size()));
    for (size_t f = 0; f < free.size(); ++f) {
        int fc = free[f];
        k(fc, static_cast<int>(f)) = Scalar(a.base(), 1L);
        for (size_t r = 0; r < piv.size(); ++r) k(piv[r], static_cast<int>(f)) = -m(static_cast<int>(r), fc);
    }
    return k;
}

int rank(const Mat& a) {
    Mat m = a;
    return static_cast<int>(rref(m).size());
}

Scalar trace(const Mat& a) {
    Scalar t(a.base(), 0L);
    for (int i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

Scalar bilinear(const Mat& g, const Mat& x, const Mat& y) { return (x.t() * g * y)(0, 0); }

Poly charpoly(const Mat& a) {
    const Base& b = a.base();
    int n = a.rows();
    if (n == 0) return Poly::constant(Scalar(b, 1L));
    std::vector<Scalar> v{Scalar(b, 1L), -a(0, 0)};
    for (int r = 1; r < n; ++r) {
        Mat R = a.block(r, 0, 1, r), C = a.block(0, r, r, 1), S = a.block(0, 0, r, r);
        std::vector<Scalar> t{Scalar(b, 1L), -a(r, r)};
        Mat cur = C;
        for (int k = 0; k < r; ++k) {
            t.push_back(-(R * cur)(0, 0));
            if (k + 1 < r) cur = S * cur;
        }
        std::vector<Scalar> nv(static_cast<size_t>(r) + 2, Scalar(b, 0L));
        for (int i = 0; i < r + 2; ++i)
            for (int j = 0; j <= std::min(i, r); ++j) nv[i] += t[i - j] * v[j];
        v = nv;
    }
    std::vector<Scalar> asc(v.rbegin(), v.rend());
    return Poly(b, asc);
}

}  // namespace orbitlab
