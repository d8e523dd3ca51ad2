#include "orbitlab/io.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "orbitlab/factor.hpp"
#include "orbitlab/orbits.hpp"

namespace orbitlab {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\n");
    return s.substr(a, b - a + 1);
}

Base parse_base(const std::string& s0) {
    std::string s = trim(s0);
    if (s == "q" || s == "Q") return Base::rationals();
    if (s == "R" || s == "r") return Base::reals();
    try {
        if (s.rfind("Qp:", 0) == 0) {
            std::string rest = s.substr(3);
            size_t colon = rest.find(':');
            long p = std::stol(rest.substr(0, colon));
            int prec = colon == std::string::npos ? 20 : std::stoi(rest.substr(colon + 1));
            if (!is_prime_l(static_cast<uint64_t>(p)) || prec < 1) fail(Errc::usage, "bad p-adic base " + s);
            return Base::qp(p, prec);
        }
        std::string digits;
        if (s.rfind("F:", 0) == 0) digits = s.substr(2);
        else if (!s.empty() && (s[0] == 'F' || s[0] == 'f')) digits = s.substr(1);
        if (!digits.empty()) {
            long q = std::stol(digits);
            if (!is_prime_l(static_cast<uint64_t>(q))) fail(Errc::unsupported, "finite fields of prime order only");
            return Base::fp(q);
        }
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
    fail(Errc::usage, "unknown base " + s);
}

mpq_class parse_q(const std::string& s0) {
    std::string s = trim(s0);
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0) fail(Errc::usage, "malformed number '" + s + "'");
    q.canonicalize();
    return q;
}

std::vector<mpq_class> parse_list(const std::string& s) {
    std::vector<mpq_class> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_q(tok));
    if (out.empty()) fail(Errc::usage, "empty coefficient list");
    return out;
}

// descending coefficients, monic
Poly parse_poly(const Base& b, const std::string& s) {
    auto c = parse_list(s);
    std::reverse(c.begin(), c.end());
    Poly f = Poly::from_rationals(b, c);
    if (f.is_zero() || !f.monic()) fail(Errc::usage, "malformed polynomial: expected monic descending coefficients");
    return f;
}

std::string sstr(const Scalar& s) {
    if (s.base().ring == Ring::Qp) return s.str();
    return s.rational().get_str();
}

Invariants parse_invariants(const Base& b, const std::string& fs, const std::string& es) {
    Poly f = parse_poly(b, fs);
    if (f.deg() < 3 || f.deg() % 2 == 0) fail(Errc::usage, "f must have odd degree n >= 3");
    Scalar e(b, parse_q(es));
    return Invariants::from_f(f, e);
}

const char* witness_name(WitnessStatus s) {
    switch (s) {
        case WitnessStatus::Found: return "found";
        case WitnessStatus::None: return "none";
        case WitnessStatus::Undecidable: return "undecidable";
    }
    return "undecidable";
}

Place parse_place(const std::string& s, const Base& b) {
    std::string t = trim(s);
    if (t.empty()) return Place::of(b);
    if (t == "R" || t == "r" || t == "inf") return Place::real();
    if (t == "Q" || t == "global") return Place::global();
    try {
        long p = std::stol(t);
        if (!is_prime_l(static_cast<uint64_t>(p))) fail(Errc::usage, "place must be a prime");
        if (b.ring == Ring::Fp) return {Place::Finite, p, 0};
        return Place::padic(p, b.ring == Ring::Qp ? b.prec : 20);
    } catch (const std::invalid_argument&) {
        fail(Errc::usage, "unknown place " + t);
    }
}

Poly class_element(const Invariants& c, const EtaleAlgebra& L, const std::string& cls, const std::string& nu) {
    if (!nu.empty()) {
        auto co = parse_list(nu);
        std::reverse(co.begin(), co.end());
        return L.reduce(Poly::from_rationals(c.base, co));
    }
    if (cls.empty() || cls == "trivial") return L.one();
    if (cls == "minus-gamma") return L.reduce(-L.gamma());
    if (c.base.ring != Ring::Fp) fail(Errc::usage, "class labels are accepted over finite fields; use --nu elsewhere");
    std::vector<int> want;
    for (char ch : cls)
        if (ch == '0' || ch == '1') want.push_back(ch - '0');
    for (const auto& r : class_representatives(L)) {
        SquareClass sc = square_class(L, r);
        std::vector<int> flat;
        for (const auto& l : sc.labels) flat.insert(flat.end(), l.begin(), l.end());
        if (flat == want) return r;
    }
    fail(Errc::precondition, "no norm-one class with labels " + cls);
}

}  // namespace orbitlab
