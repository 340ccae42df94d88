#pragma once
// Independent reference implementations for the tests. Deliberately naive:
// no shared code with the library beyond plain types.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using C = std::complex<double>;

struct Rho {
  C cb, ab, ca;
};

// Three-level steady state written out term by term from the raw
// frequencies, with nu1 = nu2 = nu.
inline Rho lambda_steady_state(double g_ab, double g_ca, double g_cb, double w_ab, double w_ac,
                               double w_cb, double n_a, double n_b, double n_c, C o1, C o2,
                               double nu) {
  const C I(0.0, 1.0);
  const C G_ab = g_ab + I * (w_ab - nu);
  const C G_ca = g_ca - I * (w_ac - nu);
  const C G_cb = g_cb + I * (w_cb - nu + nu);
  const double n_ba = n_b - n_a;
  const double n_ca = n_c - n_a;
  const C num = -((G_ca + G_ab) / (2.0 * G_ca * G_ab)) * o1 * o2;
  const C den = G_cb + std::norm(o2) / G_ab + std::norm(o1) / G_ca;
  Rho r;
  r.cb = num / den;
  r.ab = -I * (n_ba * o1 + r.cb * o2) / G_ab;
  r.ca = I * (n_ca * o2 + r.cb * o1) / G_ca;
  return r;
}

// Normalized cross-correlation at integer lag: overlap window
// only, means and variances taken on that window.
inline double g2(const std::vector<double>& x, const std::vector<double>& y, long lag) {
  long lo = 0, hi = static_cast<long>(x.size());
  if (lag < 0) lo = -lag;
  if (hi > static_cast<long>(y.size()) - lag) hi = static_cast<long>(y.size()) - lag;
  double n = 0, sx = 0, sy = 0;
  for (long t = lo; t < hi; ++t) {
    sx += x[t];
    sy += y[t + lag];
    n += 1;
  }
  const double mx = sx / n, my = sy / n;
  double num = 0, vx = 0, vy = 0;
  for (long t = lo; t < hi; ++t) {
    num += (x[t] - mx) * (y[t + lag] - my);
    vx += (x[t] - mx) * (x[t] - mx);
    vy += (y[t + lag] - my) * (y[t + lag] - my);
  }
  return (num / n) / std::sqrt((vx / n) * (vy / n));
}

// Fine-step RK4 of the deterministic locking equation (|a| > b). After a
// transient of t_skip, times `cycles` full 2 pi advances of the phase and
// returns 2 pi cycles / elapsed time.
inline double running_velocity(double a, double b, double t_skip, int cycles, double h) {
  auto f = [&](double th) { return a - b * std::sin(th); };
  const double two_pi = 6.283185307179586;
  double th = 0.0, t = 0.0;
  auto rk4 = [&](double x) {
    const double k1 = f(x), k2 = f(x + 0.5 * h * k1), k3 = f(x + 0.5 * h * k2), k4 = f(x + h * k3);
    return x + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  };
  while (t < t_skip) {
    th = rk4(th);
    t += h;
  }
  const double sign = a > 0 ? 1.0 : -1.0;
  const double start = th, t0 = t, target = start + sign * two_pi * cycles;
  for (;;) {
    const double next = rk4(th);
    if (sign * (next - target) >= 0) {
      const double frac = (target - th) / (next - th);
      return sign * two_pi * cycles / (t + frac * h - t0);
    }
    th = next;
    t += h;
  }
}

}  // namespace oracle
