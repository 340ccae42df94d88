#include "eitcorr/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "eitcorr/errors.hpp"

namespace eitcorr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Calibration anchors of the default experiment.
constexpr double kOpticalFwhmMHz = 6.0;           // natural optical linewidth
constexpr double kWeakFieldEitFwhmGauss = 0.16;   // sets gamma_cb
constexpr double kZeemanMHzPerGauss = 0.7;
constexpr double kSingleBeamOpticalDepth = 5.0;   // intensity, exp(-5) = 0.0067
constexpr double kCellLength = 0.075;             // m
constexpr double kRabiMHz = 1.3;                  // Omega / 2 pi per beam

std::string at_field(double b) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "at b = %g G: ", b);
  return buf;
}

}  // namespace

std::size_t ExperimentConfig::samples() const {
  return static_cast<std::size_t>(std::llround(record_length / sample_dt));
}

std::vector<std::string> violations(const ExperimentConfig& c) {
  std::vector<std::string> out = violations(c.atom);
  for (auto& s : violations(c.medium)) out.push_back(std::move(s));
  NoiseModel noise = c.noise;
  noise.dt = c.sample_dt;
  for (auto& s : violations(noise)) out.push_back(std::move(s));
  if (!(std::isfinite(c.rabi_input) && c.rabi_input > 0)) out.emplace_back("rabi_input must be > 0");
  if (c.b_grid.empty()) out.emplace_back("b_grid must not be empty");
  if (!std::all_of(c.b_grid.begin(), c.b_grid.end(), [](double b) { return std::isfinite(b); })) {
    out.emplace_back("b_grid must be finite");
  } else if (!std::is_sorted(c.b_grid.begin(), c.b_grid.end())) {
    out.emplace_back("b_grid must be sorted");
  }
  if (!(std::isfinite(c.record_length) && c.record_length > 0)) {
    out.emplace_back("record_length must be > 0");
  }
  if (!(std::isfinite(c.sample_dt) && c.sample_dt > 0)) {
    out.emplace_back("sample_dt must be > 0");
  } else if (std::isfinite(c.record_length) && c.record_length / c.sample_dt < 1e3) {
    out.emplace_back("record_length / sample_dt must be >= 1000");
  }
  if (!std::isfinite(c.zeeman_rate)) out.emplace_back("zeeman_rate must be finite");
  if (c.response_lowpass.mode == GroundCoherenceFilter::Mode::fixed &&
      !(c.response_lowpass.rate > 0)) {
    out.emplace_back("response_lowpass rate must be > 0");
  }
  if (c.detector_highpass && !(*c.detector_highpass > 0)) {
    out.emplace_back("detector high-pass corner must be > 0");
  }
  if (c.detector_lowpass && !(*c.detector_lowpass > 0)) {
    out.emplace_back("detector low-pass corner must be > 0");
  }
  return out;
}

void validate(const ExperimentConfig& c) { throw_if_invalid(violations(c), "ExperimentConfig"); }

ExperimentConfig default_experiment() {
  ExperimentConfig c;
  const double gamma = kTwoPi * 0.5 * kOpticalFwhmMHz * 1e6;
  c.atom.gamma_ab = gamma;
  c.atom.gamma_ca = gamma;
  // Thin-medium weak-field EIT: two-photon FWHM = 2 gamma_cb.
  c.atom.gamma_cb = kTwoPi * 0.5 * kWeakFieldEitFwhmGauss * kZeemanMHzPerGauss * 1e6;
  c.atom.n_a = 0.0;
  c.atom.n_b = 0.5;
  c.atom.n_c = 0.5;

  c.medium.length = kCellLength;
  c.medium.n_slabs = 64;
  c.medium.density = 1e18;
  c.medium.dipole_b = 2.537e-29;
  c.medium.dipole_c = 2.537e-29;
  // Single-beam resonant intensity attenuation is exp(-2 eta n_ba L / gamma).
  const double eta = kSingleBeamOpticalDepth * gamma / (2.0 * c.atom.n_ba() * kCellLength);
  c.medium.eta_override = CouplingConstants{eta, eta};

  c.noise.kind = NoiseKind::ou_frequency;
  c.noise.linewidth = 0.6e6;
  c.noise.correlation_time = 20e-9;
  c.noise.seed = 1;

  c.rabi_input = kTwoPi * kRabiMHz * 1e6;
  c.power_mw = 0.5;
  c.b_grid = linspace(-1.0, 1.0, 41);
  c.record_length = 10e-6;
  c.sample_dt = 1e-10;
  c.zeeman_rate = kZeemanMHzPerGauss;
  c.response_lowpass.mode = GroundCoherenceFilter::Mode::power_broadened;
  c.noise.dt = c.sample_dt;
  return c;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  // Keep symmetric grids exactly symmetric.
  for (std::size_t i = 0; i < n / 2; ++i) {
    if (lo == -hi) v[n - 1 - i] = -v[i];
  }
  if (n % 2 == 1 && lo == -hi) v[n / 2] = 0.0;
  return v;
}

double zeeman_detuning(double b_gauss, double rate_mhz_per_gauss) {
  return kTwoPi * rate_mhz_per_gauss * 1e6 * b_gauss;
}

LambdaAtomParams atom_at_field(const ExperimentConfig& c, double b_gauss) {
  const double shift = zeeman_detuning(b_gauss, c.zeeman_rate);
  LambdaAtomParams p = c.atom;
  p.omega_cb += shift;
  p.omega_ab += 0.5 * shift;
  p.omega_ac -= 0.5 * shift;
  return p;
}

EitSweep eit_sweep(const ExperimentConfig& c, unsigned threads) {
  validate(c);
  const std::size_t n = c.b_grid.size();
  EitSweep s;
  s.b_values = c.b_grid;
  s.transmission1.resize(n);
  s.transmission2.resize(n);
  const FieldState in{c.rabi_input, c.rabi_input, 0.0};
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      const auto out =
          propagate(in, atom_at_field(c, c.b_grid[i]), c.medium, c.propagation, c.response);
      std::tie(s.transmission1[i], s.transmission2[i]) = transmission(in, out.fields_out);
    } catch (const std::exception& e) {
      throw NumericalError(at_field(c.b_grid[i]) + e.what());
    }
  });
  std::vector<double> mean(n);
  for (std::size_t i = 0; i < n; ++i) mean[i] = 0.5 * (s.transmission1[i] + s.transmission2[i]);
  const auto peak = std::max_element(mean.begin(), mean.end()) - mean.begin();
  s.peak_transmission = mean[peak];
  s.peak_b = c.b_grid[peak];
  if (n >= 3) {
    try {
      s.fwhm = resonance_width(s.b_values, mean);
    } catch (const NumericalError&) {
      s.fwhm.reset();
    }
  }
  return s;
}

double single_beam_transmission(const ExperimentConfig& c, double b_gauss) {
  validate(c);
  const FieldState in{c.rabi_input, 0.0, 0.0};
  const auto out = propagate(in, atom_at_field(c, b_gauss), c.medium, c.propagation, c.response);
  return std::norm(out.fields_out.omega1) / std::norm(in.omega1);
}

void verify_convergence(const ExperimentConfig& c, double tolerance) {
  validate(c);
  const FieldState in{c.rabi_input, c.rabi_input, 0.0};
  const double probes[] = {0.0, c.b_grid.front(), c.b_grid.back()};
  for (double b : probes) {
    try {
      check_convergence(in, atom_at_field(c, b), c.medium, tolerance, c.propagation, c.response);
    } catch (const NumericalError& e) {
      throw NumericalError(at_field(b) + e.what());
    }
  }
}

WaveformPair synthesize_waveforms(const ExperimentConfig& c, double b_gauss, std::uint64_t seed) {
  validate(c);
  NoiseModel noise = c.noise;
  noise.dt = c.sample_dt;
  noise.seed = seed;
  const FrequencySeries dnu = generate(noise, c.samples());

  SeriesIntensities exit;
  try {
    exit = propagate_series(c.rabi_input, c.rabi_input, dnu.values, c.sample_dt,
                            atom_at_field(c, b_gauss), c.medium, c.response_lowpass,
                            c.propagation, c.response);
  } catch (const std::exception& e) {
    throw NumericalError(at_field(b_gauss) + e.what());
  }
  const double in = c.rabi_input * c.rabi_input;
  for (auto& v : exit.intensity1) v /= in;
  for (auto& v : exit.intensity2) v /= in;

  WaveformPair w{IntensitySeries::from_samples(c.sample_dt, exit.intensity1),
                 IntensitySeries::from_samples(c.sample_dt, exit.intensity2)};
  if (c.detector_highpass || c.detector_lowpass) {
    w.beam1 = detector_response(w.beam1, c.detector_highpass, c.detector_lowpass);
    w.beam2 = detector_response(w.beam2, c.detector_highpass, c.detector_lowpass);
  }
  return w;
}

WaveformPair synthesize_waveforms(const ExperimentConfig& c, double b_gauss) {
  return synthesize_waveforms(c, b_gauss, c.noise.seed);
}

std::uint64_t sweep_point_seed(const ExperimentConfig& c, std::size_t index) {
  return derive_seed(c.noise.seed, index);
}

SweepResult correlation_vs_field(const ExperimentConfig& c, unsigned threads) {
  const EitSweep eit = eit_sweep(c, threads);
  SweepResult r;
  r.b_values = eit.b_values;
  r.transmission1 = eit.transmission1;
  r.transmission2 = eit.transmission2;
  r.eit_fwhm = eit.fwhm;
  r.g2_zero.resize(r.b_values.size());
  parallel_for(r.b_values.size(), threads, [&](std::size_t i) {
    const WaveformPair w = synthesize_waveforms(c, r.b_values[i], sweep_point_seed(c, i));
    try {
      r.g2_zero[i] = correlation_at_lag(w.beam1.fluctuations, w.beam2.fluctuations, 0);
    } catch (const NumericalError& e) {
      throw NumericalError(at_field(r.b_values[i]) + e.what());
    }
  });
  if (r.b_values.size() >= 3) {
    const double floor = *std::min_element(r.g2_zero.begin(), r.g2_zero.end());
    try {
      r.corr_fwhm = resonance_width(r.b_values, r.g2_zero, floor);
    } catch (const NumericalError&) {
      r.corr_fwhm.reset();
    }
  }
  if (r.eit_fwhm && r.corr_fwhm && *r.corr_fwhm > 0) r.width_ratio = *r.eit_fwhm / *r.corr_fwhm;
  return r;
}

TransitionSummary summarize_transition(const SweepResult& r) {
  if (r.g2_zero.empty() || r.g2_zero.size() != r.b_values.size()) {
    throw std::invalid_argument("summarize_transition: empty sweep");
  }
  const auto& b = r.b_values;
  const auto& g = r.g2_zero;
  std::size_t centre = 0;
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (std::abs(b[i]) < std::abs(b[centre])) centre = i;
  }
  TransitionSummary s;
  s.g2_at_zero = g[centre];
  const auto lowest = std::min_element(g.begin(), g.end()) - g.begin();
  s.g2_min = g[lowest];
  s.b_at_min = b[lowest];
  const double sign0 = g[centre] > 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < centre; ++i) {
    if (sign0 * g[i] < 0) s.sign_change_negative_side = true;
  }
  for (std::size_t i = centre + 1; i < g.size(); ++i) {
    if (sign0 * g[i] < 0) s.sign_change_positive_side = true;
  }
  return s;
}

}  // namespace eitcorr
