#include "orbitlab/theta.hpp"

#include <sstream>

namespace orbitlab {

Mat star(const Mat& A) {
    Mat B = Mat::antidiag(A.base(), A.rows());
    return -(B * A.t() * B);
}

Mat ambient_gram(const Base& b, int n) {
    Mat G(b, 2 * n, 2 * n);
    Mat B = Mat::antidiag(b, n);
    G.set_block(0, 0, B);
    G.set_block(n, n, -B);
    return G;
}

RepElement lift(const Mat& A) {
    int n = A.rows();
    if (A.cols() != n) fail(Errc::domain, "representation element must be square");
    if (n % 2 == 0) fail(Errc::domain, "representation needs odd n");
    RepElement r;
    r.A = A;
    r.Astar = star(A);
    r.T = Mat(A.base(), 2 * n, 2 * n);
    r.T.set_block(0, n, A);
    r.T.set_block(n, 0, r.Astar);
    Mat G = ambient_gram(A.base(), n);
    Mat GT = G * r.T;
    if (GT != GT.t()) fail(Errc::internal, "lift is not self-adjoint");
    return r;
}

// ---------- invariants ----------

Poly Invariants::f() const {
    int N = n();
    std::vector<Scalar> c(static_cast<size_t>(N) + 1, Scalar(base, 0L));
    c[N] = Scalar(base, 1L);
    for (int i = 1; i < N; ++i) c[N - i] = a[i - 1];
    c[0] = e * e;
    return Poly(base, c);
}

Poly Invariants::g() const { return even_lift(f()); }

bool Invariants::regular_semisimple() const {
    if (e.is_zero()) return false;
    return !poly_discriminant(f()).is_zero();
}

std::string Invariants::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i].rational().get_str();
    os << ";" << e.rational().get_str();
    return os.str();
}

Invariants Invariants::negated_e() const {
    Invariants r = *this;
    r.e = -e;
    return r;
}

bool Invariants::operator==(const Invariants& o) const {
    if (a.size() != o.a.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != o.a[i]) return false;
    return e == o.e;
}

bool Invariants::equal_up_to_sign(const Invariants& o) const { return *this == o || *this == o.negated_e(); }

Invariants Invariants::from_f(const Poly& f, const Scalar& e) {
    int N = f.deg();
    if (N < 1 || !f.lc().is_one()) fail(Errc::domain, "f must be monic of positive degree");
    if (f[0] != e * e) fail(Errc::domain, "constant term of f must equal e^2");
    Invariants r;
    r.base = f.b;
    for (int i = 1; i < N; ++i) r.a.push_back(f[N - i]);
    r.e = e;
    return r;
}

Invariants Invariants::from_ints(const Base& b, const std::vector<long>& a, long e) {
    Invariants r;
    r.base = b;
    for (long x : a) r.a.emplace_back(b, x);
    r.e = Scalar(b, e);
    return r;
}

Scalar pfaffian(const Mat& S) {
    int k = S.rows();
    const Base& b = S.base();
    if (k % 2) return Scalar(b, 0L);
    if (k == 0) return Scalar(b, 1L);
    if (k == 2) return S(0, 1);
    Scalar acc(b, 0L);
    for (int j = 1; j < k; ++j) {
        if (S(0, j).is_zero()) continue;
        std::vector<int> keep;
        for (int t = 1; t < k; ++t)
            if (t != j) keep.push_back(t);
        Mat minor(b, k - 2, k - 2);
        for (int r = 0; r < k - 2; ++r)
            for (int c = 0; c < k - 2; ++c) minor(r, c) = S(keep[r], keep[c]);
        Scalar term = S(0, j) * pfaffian(minor);
        if (j % 2 == 0) term = -term;
        acc += term;
    }
    return acc;
}

Invariants invariants_of(const RepElement& T) {
    int n = T.n();
    const Base& b = T.base();
    Poly g = charpoly(T.T);
    for (int i = 1; i <= 2 * n; i += 2)
        if (!g[i].is_zero()) fail(Errc::internal, "characteristic polynomial of T is not even");
    Invariants r;
    r.base = b;
    for (int i = 1; i < n; ++i) r.a.push_back(g[2 * (n - i)]);
    Mat Tp(b, 2 * n, 2 * n);
    Tp.set_block(0, n, T.A);
    Tp.set_block(n, 0, -T.Astar);
    r.e = pfaffian(ambient_gram(b, n) * Tp);
    if (g[0] != r.e * r.e) fail(Errc::internal, "pfaffian square differs from the constant invariant");
    return r;
}

// ---------- regular nilpotents ----------

namespace {

Mat vec_of(const Mat& M) {
    Mat v(M.base(), M.rows() * M.cols(), 1);
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) v(i * M.cols() + j, 0) = M(i, j);
    return v;
}

Mat unit_block(const Base& b, int n, int k, int l) {
    Mat U(b, n, n);
    U(k, l) = Scalar(b, 1L);
    return U;
}

// solves M x = rhs for a consistent system
Mat solve_consistent(const Mat& M, const Mat& rhs) {
    Mat K = kernel(hcat(M, -rhs));
    int last = M.cols();
    for (int c = 0; c < K.cols(); ++c) {
        if (K(last, c).is_zero()) continue;
        Mat x = K(last, c).inv() * K.col(c);
        return x.block(0, 0, last, 1);
    }
    fail(Errc::precondition, "no sl2 completion for the nilpotent");
}

Mat chain_weights(const Mat& E) {
    const Base& b = E.base();
    int N = E.rows();
    // head of the long chain: a basis vector with E^{N-2} e != 0
    Mat P = Mat::identity(b, N);
    for (int k = 0; k < N - 2; ++k) P = E * P;
    int head = -1;
    for (int c = 0; c < N && head < 0; ++c)
        if (!P.col(c).is_zero()) head = c;
    if (head < 0) fail(Errc::internal, "nilpotent is not regular");
    Mat H(b, N, N);
    int cur = head;
    for (int pos = 0; pos < N - 1; ++pos) {
        H(cur, cur) = Scalar(b, static_cast<long>(2 * pos - (N - 2)));
        Mat v = E.col(cur);
        int nxt = -1;
        for (int r = 0; r < N; ++r)
            if (!v(r, 0).is_zero()) nxt = r;
        if (nxt < 0) break;
        cur = nxt;
    }
    return H;
}

}  // namespace

NilpotentData regular_nilpotents(int n, const Base& b) {
    if (n < 3 || n % 2 == 0) fail(Errc::domain, "regular nilpotents need odd n >= 3");
    if (b.ring == Ring::Fp && b.p < 2 * n) fail(Errc::domain, "characteristic must exceed 2n - 1");
    int m = (n - 1) / 2;
    NilpotentData out;
    out.n = n;
    Mat A1(b, n, n), A2(b, n, n);
    Scalar one(b, 1L);
    // 1-based: f'_j -> f_{j+1} (j <= m), f'_j -> f_j (j >= m+2)
    for (int j = 1; j <= m; ++j) A1(j, j - 1) = one;
    for (int j = m + 2; j <= n; ++j) A1(j - 1, j - 1) = one;
    // f'_j -> f_j (j <= m), f'_j -> f_{j+1} (m+1 <= j <= 2m)
    for (int j = 1; j <= m; ++j) A2(j - 1, j - 1) = one;
    for (int j = m + 1; j <= 2 * m; ++j) A2(j, j - 1) = one;
    out.EA[0] = A1;
    out.EA[1] = A2;
    for (int i = 0; i < 2; ++i) {
        Mat E = lift(out.EA[i]).T;
        Mat H = chain_weights(E);
        int N2 = n * n;
        Mat M(b, 2 * 4 * N2, N2), rhs(b, 2 * 4 * N2, 1);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                Mat F = lift(unit_block(b, n, k, l)).T;
                Mat c1 = vec_of(commutator(H, F) + Scalar(b, 2L) * F);
                Mat c2 = vec_of(commutator(E, F));
                M.set_block(0, k * n + l, c1);
                M.set_block(4 * N2, k * n + l, c2);
            }
        rhs.set_block(4 * N2, 0, vec_of(H));
        Mat x = solve_consistent(M, rhs);
        Mat AF(b, n, n);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) AF(k, l) = x(k * n + l, 0);
        Mat F = lift(AF).T;
        if (commutator(H, E) != Scalar(b, 2L) * E || commutator(E, F) != H || commutator(H, F) != -(Scalar(b, 2L) * F))
            fail(Errc::internal, "sl2 relations fail");
        out.E[i] = E;
        out.H[i] = H;
        out.F[i] = F;
        Mat Z(b, 4 * N2, N2);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) Z.set_block(0, k * n + l, vec_of(commutator(lift(unit_block(b, n, k, l)).T, F)));
        Mat K = kernel(Z);
        for (int c = 0; c < K.cols(); ++c) {
            Mat S(b, n, n);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) S(k, l) = K(k * n + l, c);
            out.slice[i].push_back(S);
        }
    }
    return out;
}

// ---------- distinguished witnesses ----------

Mat standard_block(const Base& b, int n, bool last) {
    int m = (n - 1) / 2;
    Mat X(b, n, m);
    for (int k = 0; k < m; ++k) X(last ? n - m + k : k, k) = Scalar(b, 1L);
    return X;
}

bool is_witness(const RepElement& T, int i, const Mat& X) {
    int n = T.n(), m = (n - 1) / 2;
    if (X.rows() != n || X.cols() != m || rank(X) != m) return false;
    Mat B = Mat::antidiag(T.base(), n);
    if (!(X.t() * B * X).is_zero()) return false;
    Mat S = i == 1 ? T.A * T.Astar : T.Astar * T.A;
    return (X.t() * B * S * X).is_zero();
}

Witness distinguished_witness(const RepElement& T, int i, const std::vector<Mat>& candidates) {
    if (i != 1 && i != 2) fail(Errc::domain, "witness index must be 1 or 2");
    const Base& b = T.base();
    int n = T.n();
    for (const auto& X : candidates)
        if (is_witness(T, i, X)) return {WitnessStatus::Found, X};
    for (bool last : {false, true}) {
        Mat X = standard_block(b, n, last);
        if (is_witness(T, i, X)) return {WitnessStatus::Found, X};
    }
    if (b.ring == Ring::Fp && b.p <= 13 && n == 3) {
        long p = b.p;
        Mat S = i == 1 ? T.A * T.Astar : T.Astar * T.A;
        // isotropic lines, normalized with leading coordinate 1
        for (long idx = 0; idx < p * p * p; ++idx) {
            long x[3] = {idx / (p * p), (idx / p) % p, idx % p};
            int lead = 0;
            while (lead < 3 && x[lead] == 0) ++lead;
            if (lead == 3 || x[lead] != 1) continue;
            Mat X(b, 3, 1);
            for (int r = 0; r < 3; ++r) X(r, 0) = Scalar(b, x[r]);
            if (is_witness(T, i, X)) return {WitnessStatus::Found, X};
        }
        return {WitnessStatus::None, Mat()};
    }
    return {WitnessStatus::Undecidable, Mat()};
}

// ---------- cusp lemmas ----------

const char* cusp_name(Cusp c) {
    switch (c) {
        case Cusp::DiscZeroForced: return "disc-zero-forced";
        case Cusp::Distinguished1: return "distinguished-forced-1";
        case Cusp::Distinguished2: return "distinguished-forced-2";
        case Cusp::None: return "none";
    }
    return "none";
}

bool top_right_zero(const Mat& A, int rows, int cols) {
    int n = A.cols();
    for (int r = 0; r < rows; ++r)
        for (int c = n - cols; c < n; ++c)
            if (!A(r, c).is_zero()) return false;
    return true;
}

Cusp cusp_classify(const Mat& A) {
    int n = A.rows(), m = (n - 1) / 2;
    for (int i = 1; i <= 2 * m + 1; ++i)
        if (top_right_zero(A, i, 2 * m + 2 - i)) return Cusp::DiscZeroForced;
    for (int i = 1; 2 * i < 2 * m + 1; ++i) {
        int j = 2 * m + 1 - i;
        if (top_right_zero(A, i, j) && top_right_zero(A, j, i)) return Cusp::DiscZeroForced;
    }
    if (top_right_zero(A, m, m + 1)) return Cusp::Distinguished1;
    if (top_right_zero(A, m + 1, m)) return Cusp::Distinguished2;
    return Cusp::None;
}

std::vector<int> WeightSystem::exponent(int i, int j) const {
    std::vector<int> e(static_cast<size_t>(2 * m), 0);
    for (int k = 1; k <= m; ++k) {
        if (i > 0 && k <= i) e[k - 1] = -1;
        if (i < 0 && k <= -i) e[k - 1] = 1;
        if (j > 0 && k <= j) e[m + k - 1] = -1;
        if (j < 0 && k <= -j) e[m + k - 1] = 1;
    }
    return e;
}

bool WeightSystem::precedes(int i, int j, int i2, int j2) const { return i2 <= i && j2 <= j; }

}  // namespace orbitlab
