#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace eitcorr {

/// Stream derivation for reproducible parallel work: the SplitMix64 output
/// of base + (stream + 1) * 0x9E3779B97F4A7C15.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

/// Standard normal deviates from std::mt19937_64 via the Box-Muller
/// transform. Uniforms are taken from the top 53 bits as (k + 1) / 2^53, so
/// they lie in (0, 1]. Deviates are produced in pairs (r cos t, r sin t).
/// The output sequence is fully specified by the seed on every platform,
/// unlike std::normal_distribution.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double operator()();
  double uniform();

 private:

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class NoiseKind { ou_frequency, white_phase_diffusion };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

struct NoiseModel {
  NoiseKind kind = NoiseKind::ou_frequency;
  double linewidth = 0.3e6;         ///< Hz
  double correlation_time = 1e-6;   ///< s, ou_frequency only
  std::uint64_t seed = 0;
  double dt = 1e-9;                 ///< s

  bool operator==(const NoiseModel&) const = default;
};

std::vector<std::string> violations(const NoiseModel& model);
void validate(const NoiseModel& model);

struct FrequencySeries {
  double dt = 0.0;
  std::vector<double> values;  ///< carrier offsets, rad/s
};

/// Stationary RMS of the generated offsets (rad/s).
///  ou_frequency:          2 pi linewidth
///  white_phase_diffusion: sqrt(2 D / dt) with D = pi linewidth, the phase
///                         diffusion constant of a Lorentzian line of that
///                         FWHM (<dphi^2> = 2 D t).
double stationary_rms(const NoiseModel& model);

/// ou_frequency is sampled exactly (AR(1) with a = exp(-dt/tau)) starting
/// from the stationary distribution, so every sample has the configured
/// variance.
FrequencySeries generate(const NoiseModel& model, std::size_t n);

}  // namespace eitcorr
