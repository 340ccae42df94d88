#include "eitcorr/phase_lock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "eitcorr/errors.hpp"
#include "eitcorr/laser_noise.hpp"

namespace eitcorr {

std::vector<std::string> violations(const LockParams& p) {
  std::vector<std::string> out;
  if (!std::isfinite(p.a)) out.emplace_back("lock a must be finite");
  if (!(std::isfinite(p.b) && p.b >= 0)) out.emplace_back("lock b must be >= 0");
  if (!(std::isfinite(p.diffusion) && p.diffusion >= 0)) {
    out.emplace_back("lock diffusion must be >= 0");
  }
  if (!std::isfinite(p.theta0)) out.emplace_back("lock theta0 must be finite");
  if (!(std::isfinite(p.dt) && p.dt > 0)) out.emplace_back("lock dt must be > 0");
  if (out.empty() && !(p.dt * (std::abs(p.a) + p.b) < 0.1)) {
    out.emplace_back("lock stability bound dt*(|a|+b) < 0.1 violated");
  }
  return out;
}

PhaseTrajectory integrate_theta(const LockParams& p) {
  throw_if_invalid(violations(p), "LockParams");
  PhaseTrajectory traj;
  traj.dt = p.dt;
  traj.theta.resize(p.n_steps + 1);
  traj.theta[0] = p.theta0;

  GaussianStream gauss(p.seed);
  const double kick = std::sqrt(2.0 * p.diffusion * p.dt);
  double theta = p.theta0;
  for (std::size_t i = 1; i <= p.n_steps; ++i) {
    double next = theta + p.dt * (p.a - p.b * std::sin(theta));
    if (kick > 0) next += kick * gauss();
    theta = next;
    traj.theta[i] = theta;
  }
  return traj;
}

LockDiagnostics lock_diagnostics(const PhaseTrajectory& traj, const LockParams& p) {
  const std::size_t n = traj.theta.size();
  if (n < 100) throw std::invalid_argument("lock_diagnostics: need >= 100 samples");
  const std::size_t start = n / 2;
  const double m = static_cast<double>(n - start);

  // Least squares on (t, theta) with t centred for conditioning.
  double tbar = 0.0, ybar = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    tbar += static_cast<double>(i) * traj.dt;
    ybar += traj.theta[i];
  }
  tbar /= m;
  ybar /= m;
  double stt = 0.0, sty = 0.0, c = 0.0, s = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    const double t = static_cast<double>(i) * traj.dt - tbar;
    stt += t * t;
    sty += t * (traj.theta[i] - ybar);
    c += std::cos(traj.theta[i]);
    s += std::sin(traj.theta[i]);
  }
  LockDiagnostics d;
  d.mean_drift_rate = sty / stt;
  const double r = std::min(1.0, std::hypot(c, s) / m);
  d.circular_spread = r > 0 ? std::sqrt(-2.0 * std::log(r)) : std::numeric_limits<double>::infinity();
  d.locked = std::abs(d.mean_drift_rate) < 0.01 * std::max(p.b, std::abs(p.a)) &&
             d.circular_spread < std::numbers::pi / 2;
  return d;
}

}  // namespace eitcorr
