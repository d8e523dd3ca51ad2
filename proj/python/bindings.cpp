#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "orbitlab/census.hpp"
#include "orbitlab/descent.hpp"
#include "orbitlab/io.hpp"
#include "orbitlab/lattices.hpp"
#include "orbitlab/orbits.hpp"
#include "orbitlab/theta.hpp"

namespace py = pybind11;
using namespace orbitlab;

namespace {

std::string entry_str(const py::handle& h) { return py::str(h).cast<std::string>(); }

std::string join(const py::sequence& xs) {
    std::ostringstream os;
    bool first = true;
    for (const auto& x : xs) {
        os << (first ? "" : ",") << entry_str(x);
        first = false;
    }
    return os.str();
}

Mat to_mat(const Base& b, const py::sequence& rows) {
    if (py::len(rows) == 0) fail(Errc::usage, "matrix must hold at least one row");
    int r = static_cast<int>(py::len(rows));
    int c = -1;
    std::vector<mpq_class> v;
    for (const auto& row : rows) {
        auto seq = row.cast<py::sequence>();
        if (c < 0) c = static_cast<int>(py::len(seq));
        if (static_cast<int>(py::len(seq)) != c || c == 0) fail(Errc::usage, "ragged matrix");
        for (const auto& x : seq) v.push_back(parse_q(entry_str(x)));
    }
    return Mat::from_rationals(b, r, c, v);
}

py::list mat_list(const Mat& M) {
    py::list rows;
    for (int i = 0; i < M.rows(); ++i) {
        py::list r;
        for (int j = 0; j < M.cols(); ++j) r.append(sstr(M(i, j)));
        rows.append(r);
    }
    return rows;
}

py::dict inv_dict(const Invariants& c) {
    py::list a, f;
    for (const auto& x : c.a) a.append(sstr(x));
    Poly fp = c.f();
    for (int i = fp.deg(); i >= 0; --i) f.append(sstr(fp[i]));
    py::dict d;
    d["n"] = c.n();
    d["a"] = a;
    d["e"] = sstr(c.e);
    d["f"] = f;
    d["rs"] = c.regular_semisimple();
    d["base"] = c.base.str();
    return d;
}

Invariants inv_of(const py::sequence& f, const py::object& e, const std::string& base) {
    return parse_invariants(parse_base(base), join(f), entry_str(e));
}

py::dict invariants(const py::sequence& A, const std::string& base) {
    Mat M = to_mat(parse_base(base), A);
    if (M.rows() != M.cols()) fail(Errc::usage, "A must be square");
    py::dict d = inv_dict(invariants_of(lift(M)));
    d["cusp"] = cusp_name(cusp_classify(M));
    return d;
}

py::dict construct(const py::sequence& f, const py::object& e, const std::string& base, const std::string& cls,
                   const py::object& nu) {
    Invariants c = inv_of(f, e, base);
    EtaleAlgebra L = etale_build(c.f());
    Poly v = class_element(c, L, cls, nu.is_none() ? "" : join(nu.cast<py::sequence>()));
    Construction C = orbit_from_class(c, v);
    StabilizerInfo st = stabilizer_info(c);
    py::dict d;
    d["A"] = mat_list(C.T.A);
    d["invariants"] = inv_dict(invariants_of(C.T));
    d["e_sign"] = C.e_sign;
    d["stabilizer_degrees"] = st.degrees;
    d["stabilizer_order"] = st.order;
    d["witness1"] = witness_name(distinguished_witness(C.T, 1).status);
    d["witness2"] = witness_name(distinguished_witness(C.T, 2).status);
    if (c.base.ring != Ring::R) {
        d["class"] = square_class(L, v).str();
        d["recomputed_class"] = square_class(L, recompute_class(C.T, L)).str();
    }
    return d;
}

py::list classes(const py::sequence& f, const py::object& e, const std::string& base) {
    Invariants c = inv_of(f, e, base);
    EtaleAlgebra L = etale_build(c.f());
    py::list out;
    for (const auto& r : class_representatives(L)) {
        py::dict d;
        d["class"] = square_class(L, r).str();
        d["in_kernel"] = delta_map(c, r, Place::of(c.base)).in_kernel;
        out.append(d);
    }
    return out;
}

py::dict pencil(const py::sequence& f, const py::object& e, const std::string& base, int i) {
    if (i != 1 && i != 2) fail(Errc::usage, "pencil index must be 1 or 2");
    PencilPair P = pencil_of(alpha1_construct(inv_of(f, e, base)).T, i);
    py::dict d;
    d["i"] = P.i;
    d["Q"] = mat_list(P.Q);
    d["QT"] = mat_list(P.QT);
    return d;
}

py::dict local_image_py(const py::sequence& f, const py::object& e, const std::string& place, const std::string& curve,
                        const std::string& base, long budget) {
    Invariants c = inv_of(f, e, base);
    Place pl = parse_place(place, c.base);
    LocalImage I;
    if (curve == "sel12") I = sel12_local(c, pl, budget);
    else if (curve == "C1" || curve == "C2") I = local_image(c, pl, curve == "C1" ? CurveKind::C1 : CurveKind::C2, budget);
    else fail(Errc::usage, "curve must be C1, C2 or sel12");
    py::list cls;
    for (const auto& s : I.classes) cls.append(s.str());
    py::dict d;
    d["place"] = I.place.str();
    d["classes"] = cls;
    d["size"] = I.classes.size();
    d["target"] = I.target;
    d["complete"] = I.complete;
    d["samples"] = I.samples;
    return d;
}

Mat gram_of(const py::sequence& gram, long p, int prec) {
    if (!is_prime_l(static_cast<uint64_t>(p))) fail(Errc::usage, "p must be a prime");
    Mat G = to_mat(Base::qp(p, prec), gram);
    if (G.rows() != G.cols()) fail(Errc::usage, "Gram matrix must be square");
    return G;
}

py::dict cassels(const py::sequence& gram, long p, int prec) {
    CasselsResult C = cassels_diagonalize(gram_of(gram, p, prec));
    py::dict d;
    d["P"] = mat_list(C.P);
    d["D"] = mat_list(C.D);
    d["blocks"] = C.str();
    return d;
}

py::dict selfdual(const py::sequence& gram, long p, int prec) {
    Mat G = gram_of(gram, p, prec);
    LatticeBasis I = LatticeBasis::of(Mat::identity(G.base(), G.rows()));
    LatticeBasis out = self_dualize(I, G);
    py::dict d;
    d["basis"] = mat_list(out.basis);
    d["gram"] = mat_list(out.basis.t() * G * out.basis);
    d["self_dual"] = is_self_dual(out, G);
    d["contains_input"] = contains(out, I);
    return d;
}

py::dict sweep(long p, int n, int threads, long sample) {
    if (!is_prime_l(static_cast<uint64_t>(p)) || p == 2) fail(Errc::usage, "p must be an odd prime");
    SweepReport R;
    {
        py::gil_scoped_release nogil;
        R = fp_sweep(p, n, threads, sample);
    }
    py::dict d;
    d["p"] = R.p;
    d["n"] = R.n;
    d["total"] = R.total;
    d["sampled"] = R.sampled;
    d["seed"] = R.seed;
    d["rs"] = R.rs;
    d["redmod"] = R.reducible().get_str();
    d["bigstab"] = R.nontrivial_stab().get_str();
    d["twodist"] = R.twodist_density().get_str();
    d["smallonetwo"] = R.smallonetwo_density().get_str();
    d["by_flags"] = R.by_flags;
    return d;
}

py::list orbit_census(long p) {
    OrbitCensus oc = bruteforce_all(p);
    py::list out;
    for (const auto& [k, F] : oc.fibers) {
        py::dict d;
        d["c"] = k;
        d["orbits"] = F.reps.size();
        d["orbit_sizes"] = F.orbit_sizes;
        d["stabilizers"] = F.stabilizers;
        out.append(d);
    }
    return out;
}

std::string box(const py::object& X, int n) { return box_count(parse_q(entry_str(X)), n).get_str(); }

}  // namespace

PYBIND11_MODULE(_orbitlab, m) {
    m.doc() = "Orbits of SO_n x SO_n on n x n matrices: invariants, constructions, descent, lattices, census";

    static py::handle exc = py::exception<Error>(m, "OrbitlabError", PyExc_ValueError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = py::reinterpret_borrow<py::object>(exc)(e.what());
            err.attr("code") = e.code_name();
            err.attr("exit_code") = e.exit_code();
            PyErr_SetObject(exc.ptr(), err.ptr());
        }
    });

    m.def("invariants", &invariants, py::arg("A"), py::arg("base") = "Q",
          "Invariants of T = [[0, A], [A*, 0]] with the cusp pattern of A");
    m.def("construct", &construct, py::arg("f"), py::arg("e"), py::arg("base") = "Q", py::arg("cls") = "trivial",
          py::arg("nu") = py::none(), "Orbit representative for a square class; f descending, monic");
    m.def("classes", &classes, py::arg("f"), py::arg("e"), py::arg("base"),
          "Norm-one square classes with their kernel membership");
    m.def("pencil", &pencil, py::arg("f"), py::arg("e"), py::arg("base") = "Q", py::arg("i") = 1);
    m.def("local_image", &local_image_py, py::arg("f"), py::arg("e"), py::arg("place"), py::arg("curve") = "C1",
          py::arg("base") = "Q", py::arg("budget") = 2000);
    m.def("cassels", &cassels, py::arg("gram"), py::arg("p"), py::arg("prec") = 20);
    m.def("selfdual", &selfdual, py::arg("gram"), py::arg("p"), py::arg("prec") = 20);
    m.def("sweep", &sweep, py::arg("p"), py::arg("n") = 3, py::arg("threads") = 1, py::arg("sample") = 200000);
    m.def("orbit_census", &orbit_census, py::arg("p"), "Brute-force orbit census for n = 3");
    m.def("group_order", &group_order, py::arg("p"), py::arg("n") = 3);
    m.def("group_order_formula", &group_order_formula, py::arg("p"), py::arg("n") = 3);
    m.def("box_count", &box, py::arg("X"), py::arg("n") = 3);
}
