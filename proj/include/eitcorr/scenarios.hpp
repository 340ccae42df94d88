#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eitcorr/lambda_medium.hpp"
#include "eitcorr/laser_noise.hpp"
#include "eitcorr/propagation.hpp"
#include "eitcorr/signal_analysis.hpp"

namespace eitcorr {

/// A full in-silico experiment. Frequencies of `atom` are the zero-field
/// values in the frame of the nominal carrier (the carrier sits on the
/// one-photon line centre). `noise.dt` is ignored; `sample_dt` is used.
struct ExperimentConfig {
  LambdaAtomParams atom;
  MediumConfig medium;
  NoiseModel noise;
  double rabi_input = 0.0;          ///< rad/s, each beam
  double power_mw = 0.0;            ///< label only
  std::vector<double> b_grid;       ///< Gauss, sorted
  double record_length = 10e-6;     ///< s
  double sample_dt = 1e-10;         ///< s
  double zeeman_rate = 0.7;         ///< MHz per Gauss
  GroundCoherenceFilter response_lowpass;
  ResponseOptions response;
  PropagationOptions propagation;
  std::optional<double> detector_highpass;  ///< Hz
  std::optional<double> detector_lowpass;   ///< Hz

  std::size_t samples() const;

  bool operator==(const ExperimentConfig&) const = default;
};

std::vector<std::string> violations(const ExperimentConfig& c);
void validate(const ExperimentConfig& c);

/// Calibrated defaults: 6 MHz natural FWHM optical lines, ground coherence
/// chosen so the weak-field EIT window is 0.16 G wide, a 7.5 cm cell whose
/// single-beam optical depth is 5 (transmission e^-5 < 1%), and a two-beam
/// drive giving ~0.75 EIT transmission.
ExperimentConfig default_experiment();

/// Evenly spaced grid including both ends.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Ground-state splitting from a magnetic field: 2 pi rate[MHz/G] 1e6 b.
double zeeman_detuning(double b_gauss, double rate_mhz_per_gauss);

/// Atom at field b. The Zeeman shift s splits the ground levels
/// symmetrically: omega_cb += s, omega_ab += s/2, omega_ac -= s/2.
LambdaAtomParams atom_at_field(const ExperimentConfig& c, double b_gauss);

/// Runs `fn(i)` for i in [0, n) on up to `threads` workers. Results must be
/// written to per-index slots; the first failing index (lowest i) wins.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn);

struct EitSweep {
  std::vector<double> b_values;
  std::vector<double> transmission1;
  std::vector<double> transmission2;
  std::optional<double> fwhm;  ///< Gauss, of the mean transmission
  double peak_transmission = 0.0;
  double peak_b = 0.0;
};

/// Noiseless two-beam transmission over the B grid.
EitSweep eit_sweep(const ExperimentConfig& c, unsigned threads = 1);

/// Exit transmission of beam 1 alone (beam 2 blocked), carrier on resonance.
double single_beam_transmission(const ExperimentConfig& c, double b_gauss = 0.0);

/// Self-check: doubling the slab count must change exit intensities by less
/// than `tolerance` at the grid centre and edges. Throws NumericalError.
void verify_convergence(const ExperimentConfig& c, double tolerance = 1e-6);

struct WaveformPair {
  IntensitySeries beam1;  ///< in units of the input intensity
  IntensitySeries beam2;
};

/// One noisy record at field b: a single carrier-offset series drives both
/// beams; each time sample is propagated through the cell (with the
/// configured ground-coherence response) and the exit intensities are split
/// into mean and fluctuations.
WaveformPair synthesize_waveforms(const ExperimentConfig& c, double b_gauss, std::uint64_t seed);
WaveformPair synthesize_waveforms(const ExperimentConfig& c, double b_gauss);

struct SweepResult {
  std::vector<double> b_values;
  std::vector<double> transmission1;
  std::vector<double> transmission2;
  std::vector<double> g2_zero;
  std::optional<double> eit_fwhm;    ///< Gauss
  std::optional<double> corr_fwhm;   ///< Gauss
  std::optional<double> width_ratio; ///< eit_fwhm / corr_fwhm
};

/// Seed of sweep point i: derive_seed(noise.seed, i).
std::uint64_t sweep_point_seed(const ExperimentConfig& c, std::size_t index);

/// G2(0) at every grid field plus the EIT sweep. The correlation resonance
/// width is taken between the bunching peak and the anti-correlation floor
/// (the grid minimum of G2(0)); past the EIT window G2(0) drifts back up,
/// so the far-wing level is not a usable reference for this curve.
SweepResult correlation_vs_field(const ExperimentConfig& c, unsigned threads = 1);

struct TransitionSummary {
  double g2_at_zero = 0.0;
  double g2_min = 0.0;
  double b_at_min = 0.0;  ///< the anti-correlation point
  bool sign_change_negative_side = false;
  bool sign_change_positive_side = false;
};

/// Bunching/anti-bunching structure of a correlation sweep; requires b = 0
/// on the grid (nearest point otherwise).
TransitionSummary summarize_transition(const SweepResult& r);

}  // namespace eitcorr

#include "eitcorr/detail/parallel.hpp"
