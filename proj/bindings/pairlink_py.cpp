#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pairlink/montecarlo.hpp"
#include "pairlink/oracle.hpp"
#include "pairlink/tables.hpp"

namespace py = pybind11;
using namespace pairlink;

namespace {

py::dict grid_to_dict(const ComplexGrid& g) {
    py::dict d;
    d["t1_axis"] = py::array_t<double>(static_cast<py::ssize_t>(g.n1()), g.t1_axis.data());
    d["t2_axis"] = py::array_t<double>(static_cast<py::ssize_t>(g.n2()), g.t2_axis.data());
    py::array_t<std::complex<double>> values({g.n1(), g.n2()});
    std::copy(g.values.begin(), g.values.end(), values.mutable_data());
    d["values"] = values;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Photon-pair fiber link timing statistics and key-rate model";

    py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<numeric_guard_error>(m, "NumericGuardError", PyExc_ArithmeticError);

    py::class_<SourceSpec>(m, "SourceSpec")
        .def(py::init<double, double, double, double>(),
             py::arg("sigma1"), py::arg("sigma2"), py::arg("rho"), py::arg("omega0") = 0.0)
        .def_readwrite("sigma1", &SourceSpec::sigma1)
        .def_readwrite("sigma2", &SourceSpec::sigma2)
        .def_readwrite("rho", &SourceSpec::rho)
        .def_readwrite("omega0", &SourceSpec::omega0);

    py::class_<FiberSpec>(m, "FiberSpec")
        .def(py::init<double, double, double>(),
             py::arg("beta"), py::arg("alpha_db_km"), py::arg("length_m"))
        .def_readwrite("beta", &FiberSpec::beta)
        .def_readwrite("alpha_db_km", &FiberSpec::alpha_db_km)
        .def_readwrite("length_m", &FiberSpec::length_m);

    py::class_<DetectorSpec>(m, "DetectorSpec")
        .def(py::init<double, double, double>(),
             py::arg("dark_rate_hz"), py::arg("jitter_fwhm_s"), py::arg("rep_rate_hz"))
        .def_readwrite("dark_rate_hz", &DetectorSpec::dark_rate_hz)
        .def_readwrite("jitter_fwhm_s", &DetectorSpec::jitter_fwhm_s)
        .def_readwrite("rep_rate_hz", &DetectorSpec::rep_rate_hz);

    py::class_<LinkConfig>(m, "LinkConfig")
        .def(py::init<>())
        .def(py::init<SourceSpec, FiberSpec, DetectorSpec, double>(),
             py::arg("source"), py::arg("fiber"), py::arg("detector"),
             py::arg("window_multiplier") = 6.0)
        .def_readwrite("source", &LinkConfig::source)
        .def_readwrite("fiber", &LinkConfig::fiber)
        .def_readwrite("detector", &LinkConfig::detector)
        .def_readwrite("window_multiplier", &LinkConfig::window_multiplier);

    m.def("validate", [](const LinkConfig& c) { return validate(c); });
    m.def("validation_errors", &validation_errors);
    m.def("fwhm_to_sigma", &fwhm_to_sigma);
    m.def("load_config", &load_config);
    m.def("parse_config", &parse_config);

    py::class_<BiphotonState>(m, "BiphotonState")
        .def(py::init([](const SourceSpec& s, double beta, double length) {
                 return make_state(s, beta, length);
             }),
             py::arg("source"), py::arg("beta"), py::arg("length"))
        .def_readonly("source", &BiphotonState::source)
        .def_readonly("beta", &BiphotonState::beta)
        .def_readonly("length", &BiphotonState::length);

    m.def("spectral_amplitude", &spectral_amplitude);
    m.def("dispersion_factor", &dispersion_factor);
    m.def("temporal_amplitude", &temporal_amplitude);
    m.def("evaluate_grid",
          [](const BiphotonState& st, const std::vector<double>& t1, const std::vector<double>& t2) {
              return grid_to_dict(evaluate_grid(st, t1, t2));
          });
    m.def("default_time_axis", &default_time_axis,
          py::arg("state"), py::arg("which_photon"), py::arg("n") = 512,
          py::arg("span_sigmas") = 6.0);

    py::class_<TemporalStats>(m, "TemporalStats")
        .def_readonly("pearson", &TemporalStats::pearson)
        .def_readonly("tau1", &TemporalStats::tau1)
        .def_readonly("tau2", &TemporalStats::tau2)
        .def_readonly("tau1h", &TemporalStats::tau1h)
        .def_readonly("tau2h", &TemporalStats::tau2h)
        .def_readonly("tau_dt", &TemporalStats::tau_dt)
        .def_readonly("mean_shift_slope", &TemporalStats::mean_shift_slope);

    m.def("temporal_pearson", &temporal_pearson);
    m.def("zero_correlation_length", &zero_correlation_length);
    m.def("saturation_length_95", &saturation_length_95);
    m.def("unheralded_width", &unheralded_width, py::arg("state"), py::arg("which_photon") = 1);
    m.def("heralded_width", &heralded_width, py::arg("state"), py::arg("which_photon") = 1);
    m.def("difference_width", &difference_width);
    m.def("conditional_mean_shift", &conditional_mean_shift);
    m.def("widen_by_jitter", &widen_by_jitter);
    m.def("temporal_stats", &temporal_stats);

    py::enum_<Scenario>(m, "Scenario")
        .value("GlobalRef", Scenario::GlobalRef)
        .value("MutualRefOnly", Scenario::MutualRefOnly);

    py::class_<WindowSet>(m, "WindowSet")
        .def_readonly("tau1_win", &WindowSet::tau1_win)
        .def_readonly("tau2_win", &WindowSet::tau2_win)
        .def_readonly("tau1h_win", &WindowSet::tau1h_win)
        .def_readonly("tau2h_win", &WindowSet::tau2h_win);

    py::class_<DarkProbs>(m, "DarkProbs")
        .def_readonly("p1", &DarkProbs::p1)
        .def_readonly("p2", &DarkProbs::p2)
        .def_readonly("p1h", &DarkProbs::p1h)
        .def_readonly("p2h", &DarkProbs::p2h);

    py::class_<KeyRateResult>(m, "KeyRateResult")
        .def_readonly("p_exp", &KeyRateResult::p_exp)
        .def_readonly("qber", &KeyRateResult::qber)
        .def_readonly("key_rate", &KeyRateResult::key_rate)
        .def_readonly("transmittance", &KeyRateResult::transmittance)
        .def_readonly("windows", &KeyRateResult::windows)
        .def_readonly("dark_probs", &KeyRateResult::dark_probs);

    py::class_<MaxDistance>(m, "MaxDistance")
        .def_readonly("length_m", &MaxDistance::length_m)
        .def_readonly("unbounded", &MaxDistance::unbounded);

    m.def("transmittance", &transmittance);
    m.def("detection_windows", &detection_windows);
    m.def("dark_count_probability", &dark_count_probability);
    m.def("acceptance_probability", &acceptance_probability);
    m.def("qber", &qber);
    m.def("binary_entropy", &binary_entropy);
    m.def("key_rate", &key_rate);
    m.def("max_secure_distance", &max_secure_distance);

    py::class_<OracleGridParams>(m, "OracleGridParams")
        .def(py::init<size_t, double>(), py::arg("n") = 512, py::arg("span_sigmas") = 9.0)
        .def_readwrite("n", &OracleGridParams::n)
        .def_readwrite("span_sigmas", &OracleGridParams::span_sigmas);

    py::class_<OracleReport>(m, "OracleReport")
        .def_readonly("rel_l2_error", &OracleReport::rel_l2_error)
        .def_readonly("moment_errors", &OracleReport::moment_errors)
        .def_readonly("grid_size", &OracleReport::grid_size)
        .def_readonly("span_sigmas", &OracleReport::span_sigmas)
        .def_readonly("route", &OracleReport::route)
        .def_readonly("total_prob", &OracleReport::total_prob)
        .def("to_json", &OracleReport::to_json);

    m.def("propagate_numeric",
          [](const SourceSpec& s, double beta, double length, const OracleGridParams& p) {
              return grid_to_dict(propagate_numeric(s, beta, length, p));
          },
          py::arg("source"), py::arg("beta"), py::arg("length"),
          py::arg("params") = OracleGridParams{});
    m.def("oracle_report", &oracle_report, py::arg("source"), py::arg("beta"),
          py::arg("length"), py::arg("params") = OracleGridParams{});

    py::class_<McReport>(m, "McReport")
        .def_readonly("n_trials", &McReport::n_trials)
        .def_readonly("seed", &McReport::seed)
        .def_readonly("accepted", &McReport::accepted)
        .def_readonly("bit_errors", &McReport::bit_errors)
        .def_readonly("p_exp_hat", &McReport::p_exp_hat)
        .def_readonly("p_exp_se", &McReport::p_exp_se)
        .def_readonly("qber_hat", &McReport::qber_hat)
        .def_readonly("qber_se", &McReport::qber_se)
        .def("to_json", &McReport::to_json);

    m.def("run_trials", &run_trials, py::arg("config"), py::arg("scenario"), py::arg("n"),
          py::arg("seed"), py::arg("workers") = 0,
          py::call_guard<py::gil_scoped_release>());

    m.attr("__version__") = "0.1.0";
}
