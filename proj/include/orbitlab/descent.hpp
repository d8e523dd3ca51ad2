#pragma once

#include <set>
#include <vector>

#include "orbitlab/etale.hpp"
#include "orbitlab/theta.hpp"

namespace orbitlab {

enum class CurveKind { C1, C2 };  // y^2 = f(x) and y^2 = x f(x)

struct MarkedCurve {
    Invariants c;
    CurveKind which = CurveKind::C1;
    int genus() const { return c.n() / 2; }
    Poly rhs() const;  // f or x f
};

struct CurvePoint {
    enum Kind { Affine, MarkedDivisor } kind = Affine;
    Scalar x, y;
    static CurvePoint affine(const Scalar& x, const Scalar& y) { return {Affine, x, y}; }
    static CurvePoint marked() { return {MarkedDivisor, Scalar(), Scalar()}; }
};

struct LocalImage {
    Place place;
    std::set<SquareClass> classes;
    long target = 0;
    bool complete = false;
    long samples = 0;
};

// f over the completion at the place
EtaleAlgebra local_algebra(const Invariants& c, const Place& pl);

long two_torsion_size(const Invariants& c, const Place& pl);
long local_mw_size(const Invariants& c, const Place& pl, CurveKind which);

// class of x0 - gamma (C1) or -x0 gamma (x0 - gamma) (C2); -gamma for the marked divisor
Poly descent_element(const EtaleAlgebra& L, const CurvePoint& P, CurveKind which);
SquareClass descent_class(const EtaleAlgebra& L, const CurvePoint& P, CurveKind which);
bool on_curve(const MarkedCurve& C, const CurvePoint& P);

bool good_reduction(const Invariants& c, long p, CurveKind which);
std::set<SquareClass> unramified_subgroup(const EtaleAlgebra& L);

LocalImage local_image(const Invariants& c, const Place& pl, CurveKind which, long budget = 2000);
// always samples points and degree-2 divisors; no good-reduction shortcut
LocalImage sampled_image(const Invariants& c, const Place& pl, CurveKind which, long budget = 2000);
LocalImage sel12_local(const Invariants& c, const Place& pl, long budget = 2000);

void close_subgroup(std::set<SquareClass>& S, const SquareClass& g);

// (x - p^2 w)(x - u)(x - v) with w = -u v t^2 and e = p t u v
Invariants diverges_member(long p, long u, long v, long t);

}  // namespace orbitlab
