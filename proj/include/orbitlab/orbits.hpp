#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbitlab/etale.hpp"
#include "orbitlab/theta.hpp"

namespace orbitlab {

// B_nu(l, m) = Tr_L(f'(gamma) nu l m) in the power basis of L = k[x]/(f)
Mat trace_form(const EtaleAlgebra& L, const Poly& nu);

struct OrbitClass {
    Invariants c;
    Poly nu;                   // element of L representing the class
    SquareClass label;
    std::optional<RepElement> representative;
};

struct Construction {
    RepElement T;
    Mat P1, P2;                // standard coordinates -> power basis of L
    int e_sign = 1;            // invariants_of(T).e = e_sign * c.e
    Scalar disc1, disc2;       // (-1)^m det of the forms on L and on L beta
};

Construction alpha1_construct(const Invariants& c);
Construction orbit_from_class(const Invariants& c, const Poly& nu);

struct StabilizerInfo {
    std::vector<int> degrees;  // factor degrees of f over the base
    long order = 1;            // 2^{r-1}
    long order_closure = 1;    // 2^{n-1}
    std::string str() const;
};
StabilizerInfo stabilizer_info(const Invariants& c);
StabilizerInfo stabilizer_info(const Invariants& c, const Place& pl);

struct DeltaResult {
    Mat G1, G2;                // B_nu and B_{-nu gamma}
    bool split1 = false, split2 = false;
    bool in_kernel = false;
};
DeltaResult delta_map(const Invariants& c, const Poly& nu, const Place& pl);

// class of T read off the form data; returns an element nu of L
Poly recompute_class(const RepElement& T, const EtaleAlgebra& L);

// all classes in (L^x/L^x2)_{N=1} over F_p, each with a representative element
std::vector<Poly> class_representatives(const EtaleAlgebra& L);

bool distinguished_coincide(const Invariants& c);

struct PencilPair {
    int i = 1;
    Mat Q, QT;                 // (n+1) x (n+1)
};
PencilPair pencil_of(const RepElement& T, int i);
Poly pencil_polynomial(const PencilPair& P);  // det(Q - t QT)

}  // namespace orbitlab
