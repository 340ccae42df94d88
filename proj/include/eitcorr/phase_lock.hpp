#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eitcorr {

/// Relative phase theta of the two modes obeys
///   dtheta/dt = a - b sin(theta) + F(t),
/// with F = cos(theta/2) F_- + sin(theta/2) F_+. For independent white F_+-
/// of equal strength the combination has theta-independent intensity, so F
/// is a single Gaussian white force with <F(t) F(t')> = 2 D delta(t - t').
///
/// a and b are free inputs. Loosely, a tracks the two-photon detuning and b
/// the strength of the ground-state coherence; no code path ties them to the
/// Lambda-medium parameters.
struct LockParams {
  double a = 0.5;          ///< rad/s
  double b = 1.0;          ///< rad/s
  double diffusion = 0.0;  ///< D, rad^2/s
  double theta0 = 0.0;     ///< rad
  double dt = 1e-3;        ///< s
  std::size_t n_steps = 100000;
  std::uint64_t seed = 0;

  bool operator==(const LockParams&) const = default;
};

std::vector<std::string> violations(const LockParams& p);

struct PhaseTrajectory {
  double dt = 0.0;
  std::vector<double> theta;  ///< unwrapped, n_steps + 1 samples
};

/// Euler-Maruyama with increments of variance 2 D dt. Requires
/// dt (|a| + b) < 0.1; throws std::invalid_argument otherwise.
PhaseTrajectory integrate_theta(const LockParams& p);

struct LockDiagnostics {
  bool locked = false;
  double mean_drift_rate = 0.0;  ///< rad/s
  double circular_spread = 0.0;  ///< rad
};

/// Drift rate: least-squares slope of the unwrapped phase. Spread: circular
/// standard deviation sqrt(-2 ln R) of theta mod 2 pi. Both use the second
/// half of the record so the initial transient does not count.
/// locked <=> |drift| < 0.01 max(b, |a|) and spread < pi/2.
LockDiagnostics lock_diagnostics(const PhaseTrajectory& traj, const LockParams& p);

}  // namespace eitcorr
