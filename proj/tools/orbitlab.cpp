#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "orbitlab/census.hpp"
#include "orbitlab/descent.hpp"
#include "orbitlab/io.hpp"
#include "orbitlab/lattices.hpp"
#include "orbitlab/orbits.hpp"
#include "orbitlab/quadforms.hpp"
#include "orbitlab/theta.hpp"

using json = nlohmann::json;
using namespace orbitlab;

namespace {

json mat_json(const Mat& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json r = json::array();
        for (int j = 0; j < M.cols(); ++j) r.push_back(sstr(M(i, j)));
        rows.push_back(r);
    }
    return rows;
}

Mat read_matrix(const Base& b, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::usage, "cannot read " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(Errc::usage, std::string("malformed JSON: ") + e.what());
    }
    if (j.is_object()) {
        for (const char* key : {"A", "gram", "matrix"})
            if (j.contains(key)) {
                j = j[key];
                break;
            }
    }
    if (!j.is_array() || j.empty() || !j[0].is_array()) fail(Errc::usage, "matrix file must hold a list of rows");
    int r = static_cast<int>(j.size()), c = static_cast<int>(j[0].size());
    std::vector<mpq_class> v;
    for (const auto& row : j) {
        if (!row.is_array() || static_cast<int>(row.size()) != c) fail(Errc::usage, "ragged matrix");
        for (const auto& x : row) {
            if (x.is_number_integer()) v.emplace_back(x.get<long>());
            else if (x.is_string()) v.push_back(parse_q(x.get<std::string>()));
            else fail(Errc::usage, "matrix entries must be integers or rational strings");
        }
    }
    return Mat::from_rationals(b, r, c, v);
}

json inv_json(const Invariants& c) {
    json a = json::array();
    for (const auto& x : c.a) a.push_back(sstr(x));
    json f = json::array();
    Poly fp = c.f();
    for (int i = fp.deg(); i >= 0; --i) f.push_back(sstr(fp[i]));
    return {{"n", c.n()}, {"a", a}, {"e", sstr(c.e)}, {"f", f}, {"rs", c.regular_semisimple()}, {"base", c.base.str()}};
}

json image_json(const LocalImage& I) {
    json cls = json::array();
    for (const auto& c : I.classes) cls.push_back(c.str());
    return {{"place", I.place.str()}, {"classes", cls}, {"size", I.classes.size()}, {"target", I.target},
            {"complete", I.complete}, {"samples", I.samples}};
}

std::string qstr(const mpq_class& q) { return q.get_str(); }

void emit(const json& j) { std::cout << j.dump() << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orbitlab: orbit parametrization toolkit"};
    app.require_subcommand(1);
    std::string base_s = "Q", format = "json";
    int threads = 1;
    app.add_option("--base", base_s, "q | Q | Qp:<p>:<prec> | R | F:<q>");
    app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", threads, "census worker threads")->check(CLI::Range(1, 256));

    auto* inv = app.add_subcommand("invariants", "invariants of T from its block A");
    std::string a_file;
    inv->add_option("--A", a_file, "JSON file with the n x n block A")->required();

    auto* orbit = app.add_subcommand("orbit", "orbit constructions");
    orbit->require_subcommand(1);
    std::string f_s, e_s, cls_s, nu_s;
    int pencil_i = 1;
    auto* construct = orbit->add_subcommand("construct", "representative for a class");
    for (auto* sc : {construct}) {
        sc->add_option("--f", f_s, "monic f, descending coefficients")->required();
        sc->add_option("--e", e_s, "pfaffian e with f(0) = e^2")->required();
        sc->add_option("--class", cls_s, "trivial | minus-gamma | per-factor labels");
        sc->add_option("--nu", nu_s, "explicit class element, descending coefficients in gamma");
    }
    auto* classes = orbit->add_subcommand("classes", "all norm-one classes over a finite field");
    classes->add_option("--f", f_s)->required();
    classes->add_option("--e", e_s)->required();
    auto* pencil = orbit->add_subcommand("pencil", "pencil of quadrics of the base orbit");
    pencil->add_option("--f", f_s)->required();
    pencil->add_option("--e", e_s)->required();
    pencil->add_option("--i", pencil_i)->check(CLI::IsMember({1, 2}));

    auto* descent = app.add_subcommand("descent", "2-descent data");
    descent->require_subcommand(1);
    auto* dlocal = descent->add_subcommand("local", "local image of the descent map");
    std::string place_s, curve_s = "C1";
    long budget = 2000;
    dlocal->add_option("--f", f_s)->required();
    dlocal->add_option("--e", e_s)->required();
    dlocal->add_option("--place", place_s, "prime p or R");
    dlocal->add_option("--curve", curve_s)->check(CLI::IsMember({"C1", "C2", "sel12"}));
    dlocal->add_option("--budget", budget)->check(CLI::PositiveNumber);

    auto* lattice = app.add_subcommand("lattice", "p-adic lattices");
    lattice->require_subcommand(1);
    std::string gram_file;
    long lp = 0;
    int lprec = 20;
    auto* selfdual = lattice->add_subcommand("selfdual", "self-dual refinement of the standard lattice");
    auto* cassels = lattice->add_subcommand("cassels", "Cassels block diagonalization");
    for (auto* sc : {selfdual, cassels}) {
        sc->add_option("--gram", gram_file)->required();
        sc->add_option("--p", lp)->required();
        sc->add_option("--prec", lprec)->check(CLI::Range(4, 400));
    }

    auto* census = app.add_subcommand("census", "finite-field statistics");
    census->require_subcommand(1);
    long cp = 5, pmax = 0, sample = 200000;
    int cn = 3, count = 30;
    std::string lemma = "all";
    bool records = false;
    auto* sweep = census->add_subcommand("sweep", "exhaustive invariant sweep");
    sweep->add_option("--p", cp);
    sweep->add_option("--pmax", pmax, "sweep every odd prime up to pmax");
    sweep->add_option("--n", cn);
    sweep->add_option("--lemma", lemma)->check(CLI::IsMember({"all", "redmod", "bigstab", "twodist", "smallonetwo"}));
    sweep->add_option("--sample", sample)->check(CLI::PositiveNumber);
    sweep->add_flag("--records", records, "stream one record per tuple");
    auto* corbits = census->add_subcommand("orbits", "brute-force orbits, n = 3");
    corbits->add_option("--p", cp)->required();
    auto* cgroup = census->add_subcommand("group", "order of SO_n(F_p)");
    cgroup->add_option("--p", cp)->required();
    cgroup->add_option("--n", cn);
    auto* cdiv = census->add_subcommand("diverges", "divergent family members");
    cdiv->add_option("--p", cp)->required();
    cdiv->add_option("--count", count)->check(CLI::PositiveNumber);

    auto* heights = app.add_subcommand("heights", "integral invariants of bounded height");
    std::string X_s = "1";
    bool classify = false;
    heights->add_option("--X", X_s)->required();
    heights->add_option("--n", cn);
    heights->add_flag("--classify", classify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit({{"error", {{"code", "usage"}, {"message", e.what()}, {"exit", 2}}}});
        return 2;
    }

    try {
        Base base = parse_base(base_s);
        if (*inv) {
            Mat A = read_matrix(base, a_file);
            RepElement T = lift(A);
            Invariants c = invariants_of(T);
            json out = inv_json(c);
            out["cusp"] = cusp_name(cusp_classify(A));
            emit(out);
        } else if (*orbit) {
            Invariants c = parse_invariants(base, f_s, e_s);
            EtaleAlgebra L = etale_build(c.f());
            if (*construct) {
                Poly nu = class_element(c, L, cls_s, nu_s);
                Construction C = orbit_from_class(c, nu);
                StabilizerInfo st = stabilizer_info(c);
                json out{{"A", mat_json(C.T.A)},
                         {"invariants", inv_json(invariants_of(C.T))},
                         {"requested", inv_json(c)},
                         {"e_sign", C.e_sign},
                         {"stabilizer", {{"degrees", st.degrees}, {"order", st.order}}},
                         {"witness1", witness_name(distinguished_witness(C.T, 1).status)},
                         {"witness2", witness_name(distinguished_witness(C.T, 2).status)}};
                if (base.ring != Ring::R) {
                    out["class"] = square_class(L, nu).str();
                    out["recomputed_class"] = square_class(L, recompute_class(C.T, L)).str();
                }
                emit(out);
            } else if (*classes) {
                json list = json::array();
                for (const auto& r : class_representatives(L)) {
                    DeltaResult d = delta_map(c, r, Place::of(base));
                    list.push_back({{"class", square_class(L, r).str()}, {"in_kernel", d.in_kernel}});
                }
                emit({{"invariants", inv_json(c)}, {"classes", list}, {"coincide", distinguished_coincide(c)}});
            } else if (*pencil) {
                Construction C = alpha1_construct(c);
                PencilPair P = pencil_of(C.T, pencil_i);
                emit({{"i", P.i}, {"Q", mat_json(P.Q)}, {"QT", mat_json(P.QT)}});
            }
        } else if (*descent) {
            Invariants c = parse_invariants(base, f_s, e_s);
            Place pl = parse_place(place_s, base);
            if (curve_s == "sel12") emit(image_json(sel12_local(c, pl, budget)));
            else emit(image_json(local_image(c, pl, curve_s == "C1" ? CurveKind::C1 : CurveKind::C2, budget)));
        } else if (*lattice) {
            if (!is_prime_l(static_cast<uint64_t>(lp))) fail(Errc::usage, "--p must be a prime");
            Base bp = Base::qp(lp, lprec);
            Mat G = read_matrix(bp, gram_file);
            if (G.rows() != G.cols()) fail(Errc::usage, "Gram matrix must be square");
            if (*cassels) {
                CasselsResult C = cassels_diagonalize(G);
                emit({{"p", lp}, {"prec", lprec}, {"P", mat_json(C.P)}, {"D", mat_json(C.D)}, {"blocks", C.str()}});
            } else {
                LatticeBasis I = LatticeBasis::of(Mat::identity(bp, G.rows()));
                LatticeBasis out = self_dualize(I, G);
                emit({{"p", lp},
                      {"prec", lprec},
                      {"basis", mat_json(out.basis)},
                      {"gram", mat_json(out.basis.t() * G * out.basis)},
                      {"self_dual", is_self_dual(out, G)},
                      {"contains_input", contains(out, I)}});
            }
        } else if (*census) {
            if (*sweep) {
                std::vector<long> ps;
                if (pmax > 0) {
                    for (long p = 3; p <= pmax; p += 2)
                        if (is_prime_l(static_cast<uint64_t>(p))) ps.push_back(p);
                } else {
                    ps.push_back(cp);
                }
                if (format == "csv") std::cout << "p,n,total,sampled,reducible,nontrivial_stab,twodist,smallonetwo,smallonetwo_times_p\n";
                json summary = json::array();
                for (long p : ps) {
                    std::function<void(const CensusRecord&)> sink;
                    if (records) {
                        sink = [](const CensusRecord& r) {
                            emit({{"a", r.a}, {"e", r.e}, {"rs", r.rs}, {"irreducible", r.irreducible}, {"factors", r.factors},
                                  {"minus_gamma_square", r.minus_gamma_square}, {"e_zero", r.e_zero}, {"smallonetwo", r.smallonetwo}});
                        };
                    }
                    SweepReport R = fp_sweep(p, cn, threads, sample, sink);
                    mpq_class s12p = R.smallonetwo_density() * p;
                    if (format == "csv") {
                        std::cout << p << "," << cn << "," << R.total << "," << R.sampled << "," << qstr(R.reducible()) << ","
                                  << qstr(R.nontrivial_stab()) << "," << qstr(R.twodist_density()) << ","
                                  << qstr(R.smallonetwo_density()) << "," << qstr(s12p) << "\n";
                        continue;
                    }
                    json d;
                    if (lemma == "all" || lemma == "redmod") d["redmod"] = qstr(R.reducible());
                    if (lemma == "all" || lemma == "bigstab") d["bigstab"] = qstr(R.nontrivial_stab());
                    if (lemma == "all" || lemma == "twodist") d["twodist"] = qstr(R.twodist_density());
                    if (lemma == "all" || lemma == "smallonetwo") {
                        d["smallonetwo"] = qstr(R.smallonetwo_density());
                        d["smallonetwo_times_p"] = qstr(s12p);
                    }
                    summary.push_back({{"p", p}, {"n", cn}, {"total", R.total}, {"sampled", R.sampled}, {"seed", R.seed},
                                       {"rs", R.rs}, {"densities", d}, {"by_flags", R.by_flags}});
                }
                if (format == "json") emit(summary.size() == 1 ? summary[0] : json{{"sweeps", summary}});
            } else if (*corbits) {
                OrbitCensus oc = bruteforce_all(cp);
                json fibers = json::array();
                for (const auto& [k, F] : oc.fibers)
                    fibers.push_back({{"c", k}, {"orbits", F.reps.size()}, {"orbit_sizes", F.orbit_sizes}, {"stabilizers", F.stabilizers}});
                emit({{"p", cp}, {"group", oc.group}, {"fibers", fibers}});
            } else if (*cgroup) {
                emit({{"p", cp}, {"n", cn}, {"order", group_order(cp, cn)}, {"formula", group_order_formula(cp, cn)}});
            } else if (*cdiv) {
                json list = json::array();
                for (const auto& m : diverges_family(cp, count)) {
                    LocalImage s = sel12_local(m.c, Place::padic(cp));
                    LocalImage j1 = local_image(m.c, Place::padic(cp), CurveKind::C1);
                    list.push_back({{"invariants", inv_json(m.c)}, {"pfp_square", m.pfp_square}, {"sel12", s.classes.size()},
                                    {"image1", j1.classes.size()}, {"proper", s.classes.size() < j1.classes.size()}});
                }
                emit({{"p", cp}, {"members", list}});
            }
        } else if (*heights) {
            mpq_class X = parse_q(X_s);
            long rs = 0, coincide = 0, minimal = 0;
            long total = height_enumerate(X, cn, classify, [&](const HeightFlags& h) {
                json rec = inv_json(h.c);
                if (classify) {
                    rec["coincide"] = h.coincide;
                    rec["minimal"] = h.minimal;
                    if (h.has_proxy) rec["coincide_mod_p"] = {{"p", h.proxy_p}, {"value", h.coincide_mod_p}};
                    rs += h.rs;
                    coincide += h.coincide;
                    minimal += h.minimal;
                }
                emit(rec);
            });
            json s{{"summary", true}, {"X", qstr(X)}, {"n", cn}, {"count", total}, {"box", box_count(X, cn).get_str()}};
            if (classify) {
                s["rs"] = rs;
                s["coincide"] = coincide;
                s["minimal"] = minimal;
            }
            emit(s);
        }
    } catch (const Error& e) {
        emit({{"error", {{"code", e.code_name()}, {"message", e.what()}, {"exit", e.exit_code()}}}});
        return e.exit_code();
    } catch (const std::exception& e) {
        emit({{"error", {{"code", "internal"}, {"message", e.what()}, {"exit", 1}}}});
        return 1;
    }
    return 0;
}
