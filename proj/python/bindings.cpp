// Python bindings for the core operations: lattice normal forms, action
// analysis, and theorem-engine queries. Matrices cross the boundary as
// lists of rows of ints; structured results as JSON-shaped dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kla/assembly.hpp"
#include "kla/groupcat.hpp"
#include "kla/oracles.hpp"

namespace py = pybind11;
using namespace kla;

namespace {

IntMatrix toMatrix(const std::vector<std::vector<long>>& rows) {
    if (rows.empty()) return IntMatrix(0, 0);
    return IntMatrix::fromRows(rows);
}

std::vector<std::vector<std::string>> fromMatrix(const IntMatrix& m) {
    std::vector<std::vector<std::string>> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out[i].push_back(m.at(i, j).get_str());
    return out;
}

py::object jsonToPy(const nlohmann::json& j) {
    py::module_ json = py::module_::import("json");
    return json.attr("loads")(j.dump());
}

} // namespace

PYBIND11_MODULE(_kla, m) {
    m.doc() = "K- and L-theory calculator core";

    py::register_exception<Error>(m, "KlaError");

    m.def("hnf", [](const std::vector<std::vector<long>>& rows) {
        return fromMatrix(hnf(toMatrix(rows)));
    }, "Canonical column Hermite normal form");

    m.def("snf", [](const std::vector<std::vector<long>>& rows) {
        SNFResult s = snf(toMatrix(rows));
        std::vector<std::string> d;
        for (const Int& x : s.d) d.push_back(x.get_str());
        return py::make_tuple(d, fromMatrix(s.U), fromMatrix(s.V));
    }, "Smith normal form: (diagonal, U, V) with U*M*V diagonal");

    m.def("kernel", [](const std::vector<std::vector<long>>& rows) {
        return fromMatrix(kernelSaturated(toMatrix(rows)).basis);
    }, "Basis of the saturated integer kernel, as columns");

    m.def("h1", [](const std::vector<std::vector<long>>& rho, unsigned p) {
        std::vector<std::string> out;
        for (const Int& e : h1Cyclic(toMatrix(rho), p).elementaryDivisors)
            out.push_back(e.get_str());
        return out;
    }, "Elementary divisors of H^1(Z/p; Z^d) for an order-p action");

    m.def("analyze", [](const std::vector<std::vector<long>>& rho, unsigned p,
                        bool split) {
        IntMatrix m2 = toMatrix(rho);
        return jsonToPy(
            analyzeAction(static_cast<unsigned>(m2.rows()), p, m2, split)
                .toJson());
    }, py::arg("rho"), py::arg("p"), py::arg("split") = true,
       "Conjugation-action invariants as a dict");

    m.def("compute", [](const std::string& group, const std::string& ring,
                        const std::string& theory, int nFrom, int nTo,
                        bool localize2) {
        Query q;
        q.group = groupFromJson(nlohmann::json::parse(group));
        q.ring = RingSpec::preset(ring);
        q.theory = theoryFromName(theory);
        q.nFrom = nFrom;
        q.nTo = nTo;
        q.localize2 = localize2;
        py::list rows;
        for (const auto& r : evaluate(q)) rows.append(jsonToPy(r.toJson()));
        return rows;
    }, py::arg("group"), py::arg("ring"), py::arg("theory"),
       py::arg("n_from"), py::arg("n_to"), py::arg("localize2") = false,
       "Evaluate a query; group is a JSON descriptor string, ring a preset name");

    m.def("oracle_suite", [](std::uint64_t seed, bool quick) {
        py::list out;
        for (const auto& r : oracles::runSuite(seed, quick))
            out.append(jsonToPy(r.toJson()));
        return out;
    }, py::arg("seed") = 1, py::arg("quick") = true,
       "Cross-validation reports; every entry should have agree=True");
}
