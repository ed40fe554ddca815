#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polydist/io.hpp"
#include "polydist/version.hpp"

namespace py = pybind11;
using namespace polydist;

namespace {

MatrixPolynomial to_poly(const std::vector<ComplexMatrix>& coeffs) {
    return MatrixPolynomial(coeffs);
}

// Weights as a list of floats or one of the named selections.
WeightSet to_weights(const py::object& weights, const MatrixPolynomial& p) {
    if (weights.is_none()) {
        return WeightSet::coefficient_norms(p);
    }
    if (py::isinstance<py::str>(weights)) {
        return io::resolve_weights(weights.cast<std::string>(), p);
    }
    return WeightSet(weights.cast<std::vector<double>>());
}

py::dict result_to_dict(const PerturbationResult& r) {
    py::dict d;
    d["branch"] = to_string(r.branch);
    d["gamma_star"] = r.gamma_star;
    d["s_star"] = r.s_star;
    d["beta_low"] = r.beta_low;
    d["beta_up"] = r.beta_up ? py::cast(*r.beta_up) : py::none();
    d["delta"] = r.delta_coeffs;
    d["q"] = r.q ? py::cast(r.q->coeffs()) : py::none();
    d["x1"] = r.x1;
    d["x2"] = r.x2;
    d["zero_branch_bound"] = r.zero_branch_bound ? py::cast(*r.zero_branch_bound) : py::none();
    d["warnings"] = r.warnings;
    d["construction_error"] = r.construction_error ? py::cast(*r.construction_error) : py::none();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Distance bounds to matrix polynomials with two prescribed eigenvalues";
    m.attr("__version__") = POLYDIST_VERSION;

    static py::exception<Error> base(m, "PolydistError", PyExc_RuntimeError);
    static py::exception<InvalidInput> invalid(m, "InvalidInput", base.ptr());
    static py::exception<DegenerateTargets> degenerate(m, "DegenerateTargets", base.ptr());
    static py::exception<SingularLeadingCoefficient> singular(m, "SingularLeadingCoefficient", base.ptr());
    static py::exception<ConstructionFailure> construction(m, "ConstructionFailure", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const InvalidInput& e) {
            PyErr_SetString(invalid.ptr(), e.what());
        } catch (const DegenerateTargets& e) {
            PyErr_SetString(degenerate.ptr(), e.what());
        } catch (const SingularLeadingCoefficient& e) {
            PyErr_SetString(singular.ptr(), e.what());
        } catch (const ConstructionFailure& e) {
            PyErr_SetString(construction.ptr(), e.what());
        } catch (const Error& e) {
            PyErr_SetString(base.ptr(), e.what());
        }
    });

    m.def(
        "compute_distance",
        [](const std::vector<ComplexMatrix>& coeffs, Complex mu1, Complex mu2, const py::object& weights,
           std::optional<double> gamma_max, int samples, bool optimize_gamma) {
            const MatrixPolynomial p = to_poly(coeffs);
            DistanceOptions opts;
            opts.profile.gamma_max = gamma_max;
            opts.profile.grid_points = samples;
            opts.optimize_gamma = optimize_gamma;
            return result_to_dict(compute_distance(p, to_weights(weights, p), mu1, mu2, opts));
        },
        py::arg("coeffs"), py::arg("mu1"), py::arg("mu2"), py::arg("weights") = py::none(),
        py::arg("gamma_max") = py::none(), py::arg("samples") = 200, py::arg("optimize_gamma") = false);

    m.def(
        "s_penultimate",
        [](const std::vector<ComplexMatrix>& coeffs, Complex mu1, Complex mu2, double gamma) {
            return s_penultimate_value(TargetBlocks::from(to_poly(coeffs), mu1, mu2), gamma);
        },
        py::arg("coeffs"), py::arg("mu1"), py::arg("mu2"), py::arg("gamma"));

    m.def(
        "beta_low",
        [](const std::vector<ComplexMatrix>& coeffs, Complex mu1, Complex mu2, double gamma,
           const py::object& weights) {
            const MatrixPolynomial p = to_poly(coeffs);
            return beta_low(p, to_weights(weights, p), mu1, mu2, gamma);
        },
        py::arg("coeffs"), py::arg("mu1"), py::arg("mu2"), py::arg("gamma"), py::arg("weights") = py::none());

    m.def(
        "eigenvalues",
        [](const std::vector<ComplexMatrix>& coeffs) {
            return eigenvalues(MatrixPolynomial::allow_singular_leading(coeffs));
        },
        py::arg("coeffs"));
}
