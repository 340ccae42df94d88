#include "eitcorr/laser_noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "eitcorr/errors.hpp"

namespace eitcorr {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double GaussianStream::uniform() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double GaussianStream::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double t = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::string to_string(NoiseKind kind) {
  return kind == NoiseKind::ou_frequency ? "ou_frequency" : "white_phase_diffusion";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "ou_frequency") return NoiseKind::ou_frequency;
  if (name == "white_phase_diffusion") return NoiseKind::white_phase_diffusion;
  throw std::invalid_argument("unknown noise kind '" + name + "'");
}

std::vector<std::string> violations(const NoiseModel& m) {
  std::vector<std::string> out;
  if (!(std::isfinite(m.linewidth) && m.linewidth >= 0)) out.emplace_back("linewidth must be >= 0");
  if (m.kind == NoiseKind::ou_frequency &&
      !(std::isfinite(m.correlation_time) && m.correlation_time > 0)) {
    out.emplace_back("correlation_time must be > 0");
  }
  if (!(std::isfinite(m.dt) && m.dt > 0)) out.emplace_back("noise dt must be > 0");
  return out;
}

void validate(const NoiseModel& m) { throw_if_invalid(violations(m), "NoiseModel"); }

double stationary_rms(const NoiseModel& m) {
  if (m.kind == NoiseKind::ou_frequency) return 2.0 * std::numbers::pi * m.linewidth;
  const double diffusion = std::numbers::pi * m.linewidth;
  return std::sqrt(2.0 * diffusion / m.dt);
}

FrequencySeries generate(const NoiseModel& model, std::size_t n) {
  validate(model);
  if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
  FrequencySeries out{model.dt, std::vector<double>(n, 0.0)};
  if (model.linewidth == 0.0) return out;

  GaussianStream gauss(model.seed);
  const double sigma = stationary_rms(model);
  if (model.kind == NoiseKind::white_phase_diffusion) {
    for (auto& v : out.values) v = sigma * gauss();
    return out;
  }
  const double a = std::exp(-model.dt / model.correlation_time);
  const double kick = sigma * std::sqrt(-std::expm1(-2.0 * model.dt / model.correlation_time));
  double x = sigma * gauss();
  out.values[0] = x;
  for (std::size_t i = 1; i < n; ++i) {
    x = a * x + kick * gauss();
    out.values[i] = x;
  }
  return out;
}

}  // namespace eitcorr
