#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weylmod/acceptance.hpp"
#include "weylmod/hermite.hpp"
#include "weylmod/lattice_norms.hpp"
#include "weylmod/phase_space.hpp"
#include "weylmod/pseudodiff.hpp"
#include "weylmod/sweep.hpp"

namespace py = pybind11;
using namespace weylmod;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

CArray to_numpy(const SampledSymbol& s) {
    std::vector<py::ssize_t> shape(static_cast<std::size_t>(s.grid.d), s.grid.n);
    CArray out(shape);
    std::copy(s.values.begin(), s.values.end(), out.mutable_data());
    return out;
}

SampledSymbol from_numpy(const Grid& g, const CArray& a) {
    if (static_cast<std::size_t>(a.size()) != g.size()) throw InvalidArgument("array size does not match the grid");
    return SampledSymbol(g, CVec(a.data(), a.data() + a.size()));
}

CalculusParam calculus(const py::object& c) {
    if (py::isinstance<py::str>(c)) {
        const auto s = c.cast<std::string>();
        if (s == "weyl") return CalculusParam::weyl();
        if (s == "kn" || s == "kohn-nirenberg") return CalculusParam::kohn_nirenberg();
        throw InvalidArgument("unknown calculus " + s);
    }
    return CalculusParam::scalar(c.cast<double>());
}

double exponent(const py::object& v) {
    if (py::isinstance<py::str>(v)) return exponent_from_json(v.cast<std::string>());
    return v.cast<double>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weyl products, modulation spaces and Gabor matrices";
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<GridError>(m, "GridError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<Grid>(m, "Grid")
        .def(py::init<int, int, double>(), py::arg("d"), py::arg("n"), py::arg("L"))
        .def_readonly("d", &Grid::d)
        .def_readonly("n", &Grid::n)
        .def_readonly("L", &Grid::L)
        .def_property_readonly("h", &Grid::h)
        .def("dual", &Grid::dual)
        .def("axis", [](const Grid& g) {
            py::array_t<double> x(g.n);
            for (int k = 0; k < g.n; ++k) x.mutable_at(k) = g.x(k);
            return x;
        })
        .def("__repr__", [](const Grid& g) { return "Grid(" + g.to_json().dump() + ")"; });

    py::class_<SampledSymbol>(m, "SampledSymbol")
        .def(py::init(&from_numpy), py::arg("grid"), py::arg("values"))
        .def_readonly("grid", &SampledSymbol::grid)
        .def_property_readonly("values", &to_numpy)
        .def("l2_norm", &SampledSymbol::l2_norm)
        .def("max_abs", &SampledSymbol::max_abs);

    m.def("gaussian_window", &gaussian_window, py::arg("grid"), py::arg("sigma") = 1.0);
    m.def("gaussian_symbol", &gaussian_symbol, py::arg("lam"), py::arg("mu"), py::arg("grid"));
    m.def("fourier", [](const SampledSymbol& f) { return fourier(f); });
    m.def("inverse_fourier", [](const SampledSymbol& f) { return inverse_fourier(f); });
    m.def("symplectic_fourier", [](const SampledSymbol& a) { return symplectic_fourier(a); });
    m.def("stft", [](const SampledSymbol& f, const SampledSymbol& phi, const RVec& X) { return stft(f, phi, X); });
    m.def("wigner", py::overload_cast<const SampledSymbol&, const SampledSymbol&>(&wigner));
    m.def("evaluate", [](const SampledSymbol& f, const RVec& x) { return evaluate(f, x); });
    m.def("relative_l2", &relative_l2);
    m.def("continuous_modnorm", [](const SampledSymbol& a, const py::object& p, const py::object& q) {
        return continuous_modnorm(a, MixedExponent(exponent(p), exponent(q)));
    });
    m.def("gaussian_weyl_product", [](double l, double mu, const RVec& X) { return gaussian_weyl_product(l, mu, X); });
    m.def("gaussian_modnorm", [](double l, const py::object& p, const py::object& q, int d) {
        return gaussian_modnorm(l, exponent(p), exponent(q), d);
    }, py::arg("lam"), py::arg("p"), py::arg("q"), py::arg("d") = 1);

    m.def("sharp_product", [](const SampledSymbol& a, const SampledSymbol& b, const py::object& c) {
        return sharp_product_kernel(a, b, calculus(c));
    }, py::arg("a"), py::arg("b"), py::arg("calculus") = "weyl");
    m.def("apply_op", [](const SampledSymbol& a, const py::object& c, const SampledSymbol& f) {
        return apply_op(a, calculus(c), f);
    });
    m.def("calculi_transfer", [](const SampledSymbol& a, const py::object& from, const py::object& to) {
        return calculi_transfer(a, calculus(from), calculus(to));
    });

    m.def("mixed_norm", [](const CArray& c, double theta, const py::object& p, const py::object& q) {
        if (c.ndim() != 2 || c.shape(0) != c.shape(1) || c.shape(0) % 2 == 0)
            throw InvalidArgument("expected a square array of odd side (positions x frequencies)");
        const Lattice L(theta, 1, static_cast<int>(c.shape(0) / 2));
        return mixed_norm(LatticeSequence(L, L, CVec(c.data(), c.data() + c.size())),
                          MixedExponent(exponent(p), exponent(q)));
    }, py::arg("values"), py::arg("theta"), py::arg("p"), py::arg("q"));

    m.def("hermite_function", [](const std::vector<int>& alpha, const RVec& x) { return hermite_function(alpha, x); });

    m.def("gaussian_ratio", [](double lambda, const std::vector<std::pair<py::object, py::object>>& t, int d) {
        if (t.size() != 3) throw InvalidArgument("expected three (p, q) pairs");
        ExponentTriple tr{{exponent(t[0].first), exponent(t[0].second)},
                          {exponent(t[1].first), exponent(t[1].second)},
                          {exponent(t[2].first), exponent(t[2].second)}};
        const auto r = gaussian_ratio(lambda, tr, d);
        return py::dict(py::arg("lambda") = r.lambda, py::arg("lhs") = r.lhs, py::arg("rhs1") = r.rhs1,
                        py::arg("rhs2") = r.rhs2, py::arg("ratio") = r.ratio);
    }, py::arg("lam"), py::arg("triple"), py::arg("d") = 1);

    m.def("run_acceptance", [](const std::vector<int>& only) {
        py::list out;
        for (const auto& r : run_acceptance(only))
            out.append(py::dict(py::arg("id") = r.id, py::arg("name") = r.name, py::arg("pass") = r.pass,
                                py::arg("detail") = r.detail, py::arg("seconds") = r.seconds));
        return out;
    }, py::arg("only") = std::vector<int>{});
}
