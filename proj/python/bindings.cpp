#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latticefm/io.hpp"
#include "latticefm/k3.hpp"

namespace py = pybind11;
using namespace latfm;

namespace {

py::int_ to_py_int(const Int& x) {
    PyObject* obj = PyLong_FromString(x.get_str().c_str(), nullptr, 10);
    if (!obj) throw py::error_already_set();
    return py::reinterpret_steal<py::int_>(obj);
}

Int to_int(const py::int_& v) {
    Int x;
    std::string s = py::str(v);
    if (mpz_set_str(x.get_mpz_t(), s.c_str(), 10) != 0)
        throw py::value_error("bad integer");
    return x;
}

IntMat gram_from_rows(const std::vector<std::vector<py::int_>>& rows) {
    std::size_t n = rows.size();
    IntMat m(n, n == 0 ? 0 : rows[0].size());
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != m.cols()) throw py::value_error("ragged Gram matrix");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = to_int(rows[i][j]);
    }
    return m;
}

py::list gram_to_rows(const IntMat& m) {
    py::list rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        py::list row;
        for (std::size_t j = 0; j < m.cols(); ++j) row.append(to_py_int(m(i, j)));
        rows.append(row);
    }
    return rows;
}

IntVec vec_from_py(const std::vector<py::int_>& v) {
    IntVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_int(v[i]);
    return out;
}

py::dict form_to_dict(const FiniteQuadraticForm& q) {
    py::dict d;
    d["invariant_factors"] = q.invariant_factors();
    py::list qv;
    for (std::size_t i = 0; i < q.gens(); ++i) qv.append(q.gen_q(i).get_str());
    d["q_values"] = qv;
    d["order"] = to_py_int(q.order());
    return d;
}

} // namespace

PYBIND11_MODULE(_latticefm, m) {
    m.doc() = "exact even-lattice arithmetic: discriminant forms, gluing, partner counts";

    py::register_exception<ParseError>(m, "LatticeParseError");
    py::register_exception<ValidationError>(m, "LatticeValidationError");
    py::register_exception<PreconditionError>(m, "LatticePreconditionError");

    py::class_<Lattice>(m, "Lattice")
        .def(py::init([](const std::vector<std::vector<py::int_>>& gram, const std::string& label) {
                 return Lattice(gram_from_rows(gram), label);
             }),
             py::arg("gram"), py::arg("label") = "")
        .def_property_readonly("rank", &Lattice::rank)
        .def_property_readonly("label", &Lattice::label)
        .def_property_readonly("gram", [](const Lattice& l) { return gram_to_rows(l.gram()); })
        .def_property_readonly("det", [](const Lattice& l) { return to_py_int(l.det()); })
        .def("__repr__", [](const Lattice& l) {
            return "<Lattice " + (l.label().empty() ? "rank " + std::to_string(l.rank()) : l.label()) +
                   ">";
        });

    m.def("standard_lattice", [](const std::string& name) { return standard_lattice(name); },
          "named lattice: U, E8, E8(-1), E6(-1), A2, A2(-1), D16plus(-1), K3, L2d(d), <n>");
    m.def("lattice_from_spec", &lattice_from_spec,
          "name, diag(...), sum(...), inline JSON or a file path");
    m.def("direct_sum", [](const Lattice& a, const Lattice& b) { return direct_sum(a, b); });
    m.def("twist", [](const Lattice& l, long n) { return twist(l, Int(n)); });

    m.def("signature", [](const Lattice& l) {
        Signature s = signature(l);
        return py::make_tuple(s.plus, s.minus);
    });

    m.def("discriminant_form", [](const Lattice& l) { return form_to_dict(discriminant_form(l).form); });

    m.def("same_genus",
          [](const Lattice& a, const Lattice& b, long limit) { return same_genus(a, b, limit); },
          py::arg("a"), py::arg("b"), py::arg("limit") = kDefaultGroupLimit);

    m.def("nikulin_unique_in_genus", [](const Lattice& l) {
        return nikulin_unique_in_genus(l) == GenusUniqueness::Yes ? "yes" : "unknown";
    });

    m.def("is_isomorphic_definite", [](const Lattice& a, const Lattice& b) -> py::object {
        auto s = is_isomorphic_definite(a, b);
        if (!s) return py::none();
        return gram_to_rows(*s);
    });

    m.def("short_vectors", [](const Lattice& l, long n) {
        py::list out;
        for (const IntVec& v : short_vectors(l, Int(n))) {
            py::list pv;
            for (const Int& x : v) pv.append(to_py_int(x));
            out.append(pv);
        }
        return out;
    });

    m.def("represents",
          [](const Lattice& l, long n, long bound) {
              RepresentResult r = represents(l, Int(n), bound);
              py::dict d;
              if (r.status == RepresentResult::Status::Witness) {
                  d["status"] = "witness";
                  py::list w;
                  for (const Int& x : r.witness) w.append(to_py_int(x));
                  d["witness"] = w;
                  d["primitive"] = r.witness_primitive;
              } else if (r.status == RepresentResult::Status::ObstructedMod) {
                  d["status"] = "obstructed";
                  d["modulus"] = to_py_int(r.obstruction_modulus);
              } else {
                  d["status"] = "not-found";
                  d["complete"] = r.complete;
              }
              return d;
          },
          py::arg("l"), py::arg("n"), py::arg("bound") = 100);

    m.def("divisor", [](const Lattice& l, const std::vector<py::int_>& v) {
        return to_py_int(divisor(l, vec_from_py(v)));
    });

    m.def("complement_of_span", [](const Lattice& l, const std::vector<std::vector<py::int_>>& cols) {
        IntMat m_cols(l.rank(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != l.rank()) throw py::value_error("vector length mismatch");
            for (std::size_t i = 0; i < l.rank(); ++i) m_cols(i, j) = to_int(cols[j][i]);
        }
        Embedding e = orthogonal_complement(span_embedding(l, m_cols));
        return py::make_tuple(e.domain(), gram_to_rows(e.matrix()));
    });

    m.def("glue", [](const Lattice& l, const std::vector<std::vector<long>>& gens) {
        DiscriminantForm df = discriminant_form(l);
        std::vector<FqfElement> elems;
        for (const auto& g : gens) elems.push_back(df.form.reduce(g));
        OverlatticeResult res = glue(l, df, subgroup_closure(df.form, elems));
        return py::make_tuple(res.lattice, to_py_int(res.index));
    });

    m.def("count_gluings",
          [](const Lattice& t, const Lattice& k, py::object target, long limit) {
              FiniteQuadraticForm tq;
              if (!target.is_none()) tq = discriminant_form(target.cast<Lattice>()).form;
              return enumerate_gluings(t, k, tq, limit).size();
          },
          py::arg("t"), py::arg("k"), py::arg("target") = py::none(),
          py::arg("limit") = kDefaultGroupLimit);

    m.def("prime_count", &prime_count);
    m.def("oguiso_count", [](long d) { return to_py_int(oguiso_count(d)); });
    m.def("stable_covering_degree",
          [](long d, long limit) { return to_py_int(stable_covering_degree(d, limit)); },
          py::arg("d"), py::arg("limit") = kDefaultGroupLimit);
    m.def("fm_count_rank_one",
          [](long d, long limit) { return to_py_int(fm_count_rank_one(d, limit)); }, py::arg("d"),
          py::arg("limit") = kDefaultGroupLimit);

    m.def("count_vc_orbits", [](long p) {
        VcOrbitCount c = count_vc_orbits(p);
        return py::make_tuple(c.stable_orbits, c.full_orbit_lower_bound);
    });

    m.def("eichler_invariant", [](const Lattice& l, const std::vector<py::int_>& v) {
        EichlerInvariant inv = eichler_invariant(l, vec_from_py(v));
        return py::make_tuple(to_py_int(inv.length), inv.cls);
    });

    m.def("paper_suite", [](const std::string& filter) {
        py::list out;
        for (const ReportClaim& c : run_paper_suite(filter)) {
            py::dict d;
            d["id"] = c.id;
            d["description"] = c.description;
            d["pass"] = c.pass;
            out.append(d);
        }
        return out;
    }, py::arg("filter") = "");
}
