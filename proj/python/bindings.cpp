#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

#include "fracwave/errors.hpp"
#include "fracwave/experiment.hpp"
#include "fracwave/forward.hpp"
#include "fracwave/mittag_leffler.hpp"
#include "fracwave/param_select.hpp"

namespace py = pybind11;
using namespace fracwave;

namespace {

ExperimentSpec spec_from(const std::string& example, const std::map<std::string, std::string>& settings) {
    ExperimentSpec spec = builtin_example(example);
    for (const auto& [k, v] : settings) apply_setting(spec, k, v);
    return spec;
}

ParamConfig param_config(double beta, std::size_t n) {
    ParamConfig pc;
    pc.beta = beta;
    pc.n = n;
    return pc;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Backward problem for the time-fractional wave equation";

    static py::exception<Error> error(m, "FracwaveError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, (e.kind() + ": " + e.what()).c_str());
        }
    });

    m.attr("REFERENCE_KAPPA") = kReferenceKappa;

    m.def("ml", [](double alpha, double beta, double z) { return ml({alpha, beta}, z); },
          py::arg("alpha"), py::arg("beta"), py::arg("z"), "E_{alpha,beta}(z)");
    m.def("propagator", &propagator, py::arg("alpha"), py::arg("lam"), py::arg("T"),
          "T E_{alpha,2}(-lam T^alpha)");
    m.def("find_real_roots", [](double alpha, double bound) { return find_real_roots(alpha, bound).roots; },
          py::arg("alpha"), py::arg("search_bound"), "real zeros t of E_{alpha,2}(-t) in (0, search_bound]");

    m.def("truth_coefficients",
          [](const std::string& id, int J) {
              const SpectralField f = truth_field(id, J);
              py::array_t<double> out({J, J});
              auto a = out.mutable_unchecked<2>();
              for (int k = 1; k <= J; ++k)
                  for (int j = 1; j <= J; ++j) a(j - 1, k - 1) = f.coeff(j, k);
              return out;
          },
          py::arg("example"), py::arg("J"), "sine coefficients c[j-1, k-1] of a builtin initial velocity");

    m.def("forward_sup_norm",
          [](const std::string& id, double alpha, double T, int J, int grid, double kappa) {
              return forward_grid(truth_field(id, J), {alpha, T, J, kappa}, grid).max_abs();
          },
          py::arg("example"), py::arg("alpha"), py::arg("T") = 1.0, py::arg("J") = 128, py::arg("grid") = 200,
          py::arg("kappa") = kReferenceKappa);

    m.def("initial_rho", [](double beta, std::size_t n) { return initial_rho(param_config(beta, n)); },
          py::arg("beta"), py::arg("n"));
    m.def("update_rho",
          [](double residual, double norm, double beta, std::size_t n) {
              return update_rho(residual, norm, param_config(beta, n));
          },
          py::arg("residual_n"), py::arg("norm_X"), py::arg("beta"), py::arg("n"));
    m.def("oracle_rho",
          [](double sigma, double norm, double beta, std::size_t n) {
              return oracle_rho(sigma, norm, param_config(beta, n));
          },
          py::arg("sigma"), py::arg("norm_X"), py::arg("beta"), py::arg("n"));

    m.def("run_experiment_json",
          [](const std::string& example, const std::map<std::string, std::string>& settings) {
              const ExperimentSpec spec = spec_from(example, settings);
              py::gil_scoped_release release;
              return aggregate_json(run_experiment(spec)).dump();
          },
          py::arg("example"), py::arg("settings") = std::map<std::string, std::string>{},
          "aggregate JSON of a run; settings use the CLI keys (alpha, sigma, seeds, reg, rho, ...)");
}
