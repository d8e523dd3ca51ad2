#pragma once

#include <string>
#include <vector>

#include "orbitlab/etale.hpp"
#include "orbitlab/theta.hpp"

namespace orbitlab {

// columns are coordinates in the power basis of L
struct LatticeBasis {
    Mat basis;
    long p = 0;
    int prec = 20;
    bool ideal = false;

    int n() const { return basis.cols(); }
    static LatticeBasis of(const Mat& M);
};

bool is_integral(const Mat& M);                       // all valuations >= 0 to precision
bool contains(const LatticeBasis& outer, const LatticeBasis& inner);
bool same_lattice(const LatticeBasis& a, const LatticeBasis& b);
LatticeBasis dual_lattice(const LatticeBasis& L, const Mat& G);  // against the ambient Gram G
bool is_self_dual(const LatticeBasis& L, const Mat& G);
bool gamma_stable(const LatticeBasis& I, const EtaleAlgebra& A);
LatticeBasis scaled(const LatticeBasis& I, const Poly& lambda, const EtaleAlgebra& A);

struct CasselsBlock {
    enum Kind { Unit, H, H0 } kind = Unit;
    int start = 0;   // first column of the block
    long val = 0;    // block = p^val * {u, H, H0}
    Scalar unit;     // Unit blocks only
    int size() const { return kind == Unit ? 1 : 2; }
};

struct CasselsResult {
    Mat P;           // P^t Q P is block diagonal
    Mat D;
    std::vector<CasselsBlock> blocks;
    std::string str() const;
};

CasselsResult cassels_diagonalize(const Mat& Q);

// Gram of the form Tr(nu l m / f'(gamma)) in the power basis
Mat lattice_form(const EtaleAlgebra& A, const Poly& nu);

LatticeBasis self_dualize(const LatticeBasis& I1, const Mat& B2);

struct IdealTriple {
    LatticeBasis I1, I2;
    Poly nu;
};

struct TripleReport {
    bool cond[6] = {false, false, false, false, false, false};
    bool ok = false;
    std::string str() const;
};

TripleReport ideal_triple_verify(const Invariants& c, const IdealTriple& t);

struct IntegralResult {
    IdealTriple triple;
    TripleReport report;
};

int lattice_precision(const Invariants& c, long p);
IntegralResult integral_representative(const Invariants& c, const Poly& nu, const LatticeBasis& I1);

}  // namespace orbitlab
