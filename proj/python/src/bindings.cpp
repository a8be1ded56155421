#include "dicke/dynamics.hpp"
#include "dicke/errors.hpp"
#include "dicke/ladder.hpp"
#include "dicke/optimizer.hpp"
#include "dicke/oracle.hpp"
#include "dicke/spin_algebra.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dicke;

namespace {

EffectiveParams make_params(int n_pairs, double g, double delta) {
    EffectiveParams p;
    p.n_pairs = n_pairs;
    p.g = g;
    p.delta = delta;
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dicke-ladder model of 2N three-level ions (angular frequencies in rad/ms, times in ms)";
    m.attr("__version__") = DICKE_VERSION;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    m.def("p_coeff", &p_coeff, py::arg("n"), py::arg("m"));
    m.def("p_coefficients", &p_coefficients, py::arg("n"), "p(n, m) for m = -n..n");
    m.def("wigner_d_half_pi", &wigner_d_half_pi, py::arg("n"), py::arg("m"));
    m.def("v_element", &v_element, py::arg("n"), py::arg("l"), py::arg("k"));

    m.def(
        "ladder_hamiltonian",
        [](int n_pairs, double g, double delta, bool closed_form) {
            const EffectiveParams p = make_params(n_pairs, g, delta);
            return (closed_form ? build_via_closed_form(p) : build_via_projection(p)).elements;
        },
        py::arg("n_pairs"), py::arg("g"), py::arg("delta") = 0.0, py::arg("closed_form") = false);

    py::class_<SpectrumResult>(m, "SpectrumResult")
        .def_readonly("delta_grid", &SpectrumResult::delta_grid)
        .def_readonly("sorted", &SpectrumResult::sorted)
        .def_readonly("tracked", &SpectrumResult::tracked)
        .def_readonly("gaps", &SpectrumResult::gaps);

    m.def(
        "spectrum_scan",
        [](int n_pairs, double g, const std::vector<double>& grid) {
            return spectrum_scan(make_params(n_pairs, g, 0.0), grid);
        },
        py::arg("n_pairs"), py::arg("g"), py::arg("delta_grid"));

    m.def(
        "min_gap",
        [](const SpectrumResult& s, const std::string& side) {
            if (side != "highest" && side != "lowest") throw DomainError("side must be 'highest' or 'lowest'");
            const GapResult r = min_gap(s, side == "highest" ? GapSide::highest : GapSide::lowest);
            return py::dict(py::arg("delta_at_min") = r.delta_at_min, py::arg("gap") = r.gap,
                            py::arg("at_grid_edge") = r.at_grid_edge);
        },
        py::arg("spectrum"), py::arg("side") = "highest");

    py::class_<PulseSchedule>(m, "PulseSchedule")
        .def_static("square", &PulseSchedule::square, py::arg("duration"), py::arg("delta"), py::arg("chi"))
        .def_static("rap", &PulseSchedule::rap, py::arg("duration"), py::arg("delta_start"), py::arg("delta_end"),
                    py::arg("chi_peak"), py::arg("envelope_width"))
        .def_readonly("duration", &PulseSchedule::duration)
        .def("delta_at", &PulseSchedule::delta_at)
        .def("chi_at", &PulseSchedule::chi_at);

    py::class_<SimulationTrace>(m, "SimulationTrace")
        .def_readonly("times", &SimulationTrace::times)
        .def_readonly("populations", &SimulationTrace::populations)
        .def_readonly("fidelity", &SimulationTrace::fidelity)
        .def_readonly("norm_error", &SimulationTrace::norm_error)
        .def_readonly("steps", &SimulationTrace::steps)
        .def_readonly("convergence_change", &SimulationTrace::convergence_change);

    m.def(
        "propagate",
        [](int n_pairs, const PulseSchedule& schedule, int steps, int output_samples) {
            PropagationOptions opts;
            opts.output_samples = output_samples;
            py::gil_scoped_release release;
            return propagate(initial_state(n_pairs), schedule, make_params(n_pairs, 0.0, 0.0), steps, opts);
        },
        py::arg("n_pairs"), py::arg("schedule"), py::arg("steps") = 64, py::arg("output_samples") = 2000,
        "Evolves the all-ancilla state under the schedule.");

    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_readonly("n_ions", &OptimizationResult::n_ions)
        .def_readonly("delta_opt", &OptimizationResult::delta_opt)
        .def_readonly("best_fidelity", &OptimizationResult::best_fidelity)
        .def_readonly("time_of_peak", &OptimizationResult::time_of_peak)
        .def_readonly("horizon", &OptimizationResult::horizon)
        .def_readonly("fidelity_at_zero", &OptimizationResult::fidelity_at_zero)
        .def_readonly("scan_trace", &OptimizationResult::scan_trace)
        .def_readonly("horizon_limited", &OptimizationResult::horizon_limited)
        .def_readonly("at_bracket_edge", &OptimizationResult::at_bracket_edge);

    m.def(
        "optimize_detuning",
        [](int n_pairs, double chi, std::optional<double> horizon) {
            OptimizerOptions opts;
            opts.horizon = horizon;
            py::gil_scoped_release release;
            return optimize_detuning(n_pairs, chi, opts);
        },
        py::arg("n_pairs"), py::arg("chi"), py::arg("horizon") = py::none());

    py::class_<PowerLawFit>(m, "PowerLawFit")
        .def_readonly("coefficient", &PowerLawFit::coefficient)
        .def_readonly("exponent", &PowerLawFit::exponent)
        .def_readonly("rms_log_residual", &PowerLawFit::rms_log_residual)
        .def_readonly("points", &PowerLawFit::points);

    m.def("fit_power_law", &fit_power_law, py::arg("points"));

    m.def(
        "scaling_study",
        [](const std::vector<int>& ion_counts, double chi) {
            ScalingResult s;
            {
                py::gil_scoped_release release;
                s = scaling_study(ion_counts, chi);
            }
            py::list rows;
            for (const auto& e : s.entries) {
                if (e.result) {
                    rows.append(py::dict(py::arg("n_ions") = e.n_ions, py::arg("delta_opt") = e.result->delta_opt,
                                         py::arg("best_fidelity") = e.result->best_fidelity));
                } else {
                    rows.append(py::dict(py::arg("n_ions") = e.n_ions, py::arg("error") = e.error));
                }
            }
            return py::dict(py::arg("entries") = rows, py::arg("fidelity_fit") = s.fidelity_fit,
                            py::arg("delta_fit") = s.delta_fit, py::arg("complete") = s.complete);
        },
        py::arg("ion_counts"), py::arg("chi"));

    m.def(
        "run_validation",
        [](int max_ions) {
            const ValidationReport r = run_validation(max_ions);
            py::list checks;
            for (const auto& c : r.checks) {
                checks.append(py::dict(py::arg("name") = c.name, py::arg("deviation") = c.deviation,
                                       py::arg("threshold") = c.threshold, py::arg("passed") = c.passed));
            }
            return py::dict(py::arg("passed") = r.passed(), py::arg("checks") = checks);
        },
        py::arg("max_ions") = 8);
}
