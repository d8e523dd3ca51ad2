#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "orbitlab/descent.hpp"
#include "orbitlab/etale.hpp"
#include "orbitlab/theta.hpp"

namespace orbitlab {

std::string trim(const std::string& s);
Base parse_base(const std::string& s);  // q | Q | R | Qp:<p>[:<prec>] | F:<q> | F<q>
mpq_class parse_q(const std::string& s);
std::vector<mpq_class> parse_list(const std::string& s);  // comma separated rationals
Poly parse_poly(const Base& b, const std::string& s);      // monic, descending coefficients
std::string sstr(const Scalar& s);
Invariants parse_invariants(const Base& b, const std::string& f, const std::string& e);
const char* witness_name(WitnessStatus s);
Place parse_place(const std::string& s, const Base& b);
// trivial | minus-gamma | per-factor labels over F_q; nu (descending in gamma) wins when nonempty
Poly class_element(const Invariants& c, const EtaleAlgebra& L, const std::string& cls, const std::string& nu);

}  // namespace orbitlab
