#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eitcorr/config.hpp"
#include "eitcorr/errors.hpp"
#include "eitcorr/lambda_medium.hpp"
#include "eitcorr/laser_noise.hpp"
#include "eitcorr/phase_lock.hpp"
#include "eitcorr/propagation.hpp"
#include "eitcorr/scenarios.hpp"
#include "eitcorr/signal_analysis.hpp"

namespace py = pybind11;
using namespace eitcorr;

PYBIND11_MODULE(_eitcorr, m) {
  m.doc() = "Lambda-medium EIT and intensity-correlation simulator";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::list issues;
      for (const auto& s : e.issues()) issues.append(s);
      py::object err = py::module_::import("eitcorr").attr("ConfigError");
      PyErr_SetObject(err.ptr(), py::make_tuple(e.what(), issues).ptr());
    }
  });

  py::class_<LambdaAtomParams>(m, "LambdaAtomParams")
      .def(py::init<>())
      .def_readwrite("gamma_ab", &LambdaAtomParams::gamma_ab)
      .def_readwrite("gamma_ca", &LambdaAtomParams::gamma_ca)
      .def_readwrite("gamma_cb", &LambdaAtomParams::gamma_cb)
      .def_readwrite("omega_ab", &LambdaAtomParams::omega_ab)
      .def_readwrite("omega_ac", &LambdaAtomParams::omega_ac)
      .def_readwrite("omega_cb", &LambdaAtomParams::omega_cb)
      .def_readwrite("n_a", &LambdaAtomParams::n_a)
      .def_readwrite("n_b", &LambdaAtomParams::n_b)
      .def_readwrite("n_c", &LambdaAtomParams::n_c)
      .def("violations", [](const LambdaAtomParams& p) { return violations(p); });

  py::class_<Coherences>(m, "Coherences")
      .def_readonly("rho_cb", &Coherences::rho_cb)
      .def_readonly("rho_ab", &Coherences::rho_ab)
      .def_readonly("rho_ca", &Coherences::rho_ca)
      .def("admissible", &Coherences::admissible);

  py::class_<ResponseOptions>(m, "ResponseOptions")
      .def(py::init<>())
      .def_readwrite("conjugate_omega2", &ResponseOptions::conjugate_omega2);

  m.def(
      "steady_state",
      [](const LambdaAtomParams& p, cplx omega1, cplx omega2, double nu, ResponseOptions o) {
        return steady_state(p, DriveFields{omega1, omega2, nu}, o);
      },
      py::arg("params"), py::arg("omega1"), py::arg("omega2"), py::arg("nu") = 0.0,
      py::arg("options") = ResponseOptions{});

  py::class_<CouplingConstants>(m, "CouplingConstants")
      .def(py::init<>())
      .def(py::init<double, double>(), py::arg("eta_b"), py::arg("eta_c"))
      .def_readwrite("eta_b", &CouplingConstants::eta_b)
      .def_readwrite("eta_c", &CouplingConstants::eta_c);

  py::class_<MediumConfig>(m, "MediumConfig")
      .def(py::init<>())
      .def_readwrite("length", &MediumConfig::length)
      .def_readwrite("n_slabs", &MediumConfig::n_slabs)
      .def_readwrite("density", &MediumConfig::density)
      .def_readwrite("dipole_b", &MediumConfig::dipole_b)
      .def_readwrite("dipole_c", &MediumConfig::dipole_c)
      .def_readwrite("carrier", &MediumConfig::carrier)
      .def_readwrite("eta_override", &MediumConfig::eta_override);

  py::class_<PropagationOptions>(m, "PropagationOptions")
      .def(py::init<>())
      .def_readwrite("literal_rho_ca", &PropagationOptions::literal_rho_ca);

  m.def("coupling_constants", &coupling_constants, py::arg("medium"), py::arg("nu"));
  m.def(
      "propagate",
      [](cplx omega1, cplx omega2, double nu, const LambdaAtomParams& p, const MediumConfig& medium,
         PropagationOptions o, ResponseOptions r) {
        const FieldState out = propagate({omega1, omega2, nu}, p, medium, o, r).fields_out;
        return std::make_pair(out.omega1, out.omega2);
      },
      "Exit Rabi amplitudes (omega1, omega2).", py::arg("omega1"), py::arg("omega2"),
      py::arg("nu"), py::arg("params"), py::arg("medium"),
      py::arg("options") = PropagationOptions{}, py::arg("response") = ResponseOptions{});

  py::enum_<NoiseKind>(m, "NoiseKind")
      .value("ou_frequency", NoiseKind::ou_frequency)
      .value("white_phase_diffusion", NoiseKind::white_phase_diffusion);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init<>())
      .def_readwrite("kind", &NoiseModel::kind)
      .def_readwrite("linewidth", &NoiseModel::linewidth)
      .def_readwrite("correlation_time", &NoiseModel::correlation_time)
      .def_readwrite("seed", &NoiseModel::seed)
      .def_readwrite("dt", &NoiseModel::dt);

  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("stream"));
  m.def("stationary_rms", &stationary_rms, py::arg("model"));
  m.def(
      "generate_noise",
      [](const NoiseModel& model, std::size_t n) { return generate(model, n).values; },
      "Carrier offsets in rad/s.", py::arg("model"), py::arg("n"),
      py::call_guard<py::gil_scoped_release>());

  py::class_<IntensitySeries>(m, "IntensitySeries")
      .def_static("from_samples",
                  [](double dt, const std::vector<double>& v) {
                    return IntensitySeries::from_samples(dt, v);
                  },
                  py::arg("dt"), py::arg("intensity"))
      .def_static("from_fluctuations", &IntensitySeries::from_fluctuations, py::arg("dt"),
                  py::arg("fluctuations"), py::arg("mean") = 0.0)
      .def_readonly("dt", &IntensitySeries::dt)
      .def_readonly("mean", &IntensitySeries::mean)
      .def_readonly("fluctuations", &IntensitySeries::fluctuations);

  py::class_<CorrelationCurve>(m, "CorrelationCurve")
      .def_readonly("lags", &CorrelationCurve::lags)
      .def_readonly("values", &CorrelationCurve::values);

  py::class_<PeakStats>(m, "PeakStats")
      .def_readonly("peak_value", &PeakStats::peak_value)
      .def_readonly("peak_lag", &PeakStats::peak_lag)
      .def_readonly("fwhm", &PeakStats::fwhm)
      .def_readonly("background", &PeakStats::background);

  py::class_<PowerSpectrum>(m, "PowerSpectrum")
      .def_readonly("frequencies", &PowerSpectrum::frequencies)
      .def_readonly("psd", &PowerSpectrum::psd);

  m.def("cross_correlation", &cross_correlation, py::arg("s1"), py::arg("s2"),
        py::arg("max_lag"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "correlation_at_lag",
      [](const std::vector<double>& x, const std::vector<double>& y, long lag) {
        return correlation_at_lag(x, y, lag);
      },
      py::arg("x"), py::arg("y"), py::arg("lag_samples") = 0);
  m.def("peak_stats", &peak_stats, py::arg("curve"));
  m.def("power_spectrum", &power_spectrum, py::arg("series"));
  m.def("median_frequency", &median_frequency, py::arg("spectrum"));
  m.def(
      "resonance_width",
      [](const std::vector<double>& xs, const std::vector<double>& ys,
         std::optional<double> baseline) {
        return baseline ? resonance_width(xs, ys, *baseline) : resonance_width(xs, ys);
      },
      py::arg("xs"), py::arg("ys"), py::arg("baseline") = py::none());

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init(&default_experiment))
      .def_readwrite("atom", &ExperimentConfig::atom)
      .def_readwrite("medium", &ExperimentConfig::medium)
      .def_readwrite("noise", &ExperimentConfig::noise)
      .def_readwrite("rabi_input", &ExperimentConfig::rabi_input)
      .def_readwrite("power_mw", &ExperimentConfig::power_mw)
      .def_readwrite("b_grid", &ExperimentConfig::b_grid)
      .def_readwrite("record_length", &ExperimentConfig::record_length)
      .def_readwrite("sample_dt", &ExperimentConfig::sample_dt)
      .def_readwrite("zeeman_rate", &ExperimentConfig::zeeman_rate)
      .def_readwrite("detector_highpass", &ExperimentConfig::detector_highpass)
      .def_readwrite("detector_lowpass", &ExperimentConfig::detector_lowpass)
      .def("samples", &ExperimentConfig::samples)
      .def("violations", [](const ExperimentConfig& c) { return violations(c); });

  m.def("default_experiment", &default_experiment);
  m.def("linspace", &linspace, py::arg("lo"), py::arg("hi"), py::arg("n"));
  m.def("zeeman_detuning", &zeeman_detuning, py::arg("b_gauss"), py::arg("rate_mhz_per_gauss"));
  m.def("atom_at_field", &atom_at_field, py::arg("config"), py::arg("b_gauss"));

  py::class_<EitSweep>(m, "EitSweep")
      .def_readonly("b_values", &EitSweep::b_values)
      .def_readonly("transmission1", &EitSweep::transmission1)
      .def_readonly("transmission2", &EitSweep::transmission2)
      .def_readonly("fwhm", &EitSweep::fwhm)
      .def_readonly("peak_transmission", &EitSweep::peak_transmission)
      .def_readonly("peak_b", &EitSweep::peak_b);

  py::class_<WaveformPair>(m, "WaveformPair")
      .def_readonly("beam1", &WaveformPair::beam1)
      .def_readonly("beam2", &WaveformPair::beam2);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("b_values", &SweepResult::b_values)
      .def_readonly("transmission1", &SweepResult::transmission1)
      .def_readonly("transmission2", &SweepResult::transmission2)
      .def_readonly("g2_zero", &SweepResult::g2_zero)
      .def_readonly("eit_fwhm", &SweepResult::eit_fwhm)
      .def_readonly("corr_fwhm", &SweepResult::corr_fwhm)
      .def_readonly("width_ratio", &SweepResult::width_ratio);

  py::class_<TransitionSummary>(m, "TransitionSummary")
      .def_readonly("g2_at_zero", &TransitionSummary::g2_at_zero)
      .def_readonly("g2_min", &TransitionSummary::g2_min)
      .def_readonly("b_at_min", &TransitionSummary::b_at_min)
      .def_readonly("sign_change_negative_side", &TransitionSummary::sign_change_negative_side)
      .def_readonly("sign_change_positive_side", &TransitionSummary::sign_change_positive_side);

  m.def("eit_sweep", &eit_sweep, py::arg("config"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("single_beam_transmission", &single_beam_transmission, py::arg("config"),
        py::arg("b_gauss") = 0.0);
  m.def(
      "synthesize_waveforms",
      [](const ExperimentConfig& c, double b, std::optional<std::uint64_t> seed) {
        return seed ? synthesize_waveforms(c, b, *seed) : synthesize_waveforms(c, b);
      },
      py::arg("config"), py::arg("b_gauss"), py::arg("seed") = py::none(),
      py::call_guard<py::gil_scoped_release>());
  m.def("correlation_vs_field", &correlation_vs_field, py::arg("config"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("summarize_transition", &summarize_transition, py::arg("result"));

  py::class_<LockParams>(m, "LockParams")
      .def(py::init<>())
      .def_readwrite("a", &LockParams::a)
      .def_readwrite("b", &LockParams::b)
      .def_readwrite("diffusion", &LockParams::diffusion)
      .def_readwrite("theta0", &LockParams::theta0)
      .def_readwrite("dt", &LockParams::dt)
      .def_readwrite("n_steps", &LockParams::n_steps)
      .def_readwrite("seed", &LockParams::seed);

  py::class_<PhaseTrajectory>(m, "PhaseTrajectory")
      .def_readonly("dt", &PhaseTrajectory::dt)
      .def_readonly("theta", &PhaseTrajectory::theta);

  py::class_<LockDiagnostics>(m, "LockDiagnostics")
      .def_readonly("locked", &LockDiagnostics::locked)
      .def_readonly("mean_drift_rate", &LockDiagnostics::mean_drift_rate)
      .def_readonly("circular_spread", &LockDiagnostics::circular_spread);

  m.def("integrate_theta", &integrate_theta, py::arg("params"),
        py::call_guard<py::gil_scoped_release>());
  m.def("lock_diagnostics", &lock_diagnostics, py::arg("trajectory"), py::arg("params"));

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("experiment", &RunConfig::experiment)
      .def_readwrite("lock", &RunConfig::lock)
      .def_readwrite("input_csv", &RunConfig::input_csv)
      .def_readwrite("waveform_b_gauss", &RunConfig::waveform_b_gauss)
      .def_readwrite("max_lag", &RunConfig::max_lag)
      .def("__eq__", [](const RunConfig& a, const RunConfig& b) { return a == b; });

  m.def("parse_config", [](const std::string& text) { return parse_config(text); },
        py::arg("text"));
  m.def("emit_config", &emit_config, py::arg("config"));
}
