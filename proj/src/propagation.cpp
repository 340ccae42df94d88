#include "eitcorr/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eitcorr/errors.hpp"

namespace eitcorr {

namespace {

constexpr cplx kI{0.0, 1.0};

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct Polar {
  double magnitude;
  cplx phase;  // unit phasor, 1 for a vanishing field
};

inline Polar polar_of(cplx z) {
  const double m = std::sqrt(std::norm(z));
  return {m, m > 0.0 ? z / m : cplx{1.0, 0.0}};
}

inline FieldDerivative sources(const LambdaResponse& response, const Polar& f1, const Polar& f2,
                               cplx rho_cb, const CouplingConstants& eta,
                               PropagationOptions options) {
  const Coherences c = response.with_ground_coherence(f1.magnitude, f2.magnitude, rho_cb);
  const cplx rho_ac = options.literal_rho_ca ? c.rho_ca : std::conj(c.rho_ca);
  return {-kI * eta.eta_b * c.rho_ab * f1.phase, -kI * eta.eta_c * rho_ac * f2.phase};
}

void require_finite(const FieldState& f, const char* where) {
  if (!finite(f.omega1) || !finite(f.omega2)) {
    throw NumericalError(std::string(where) + ": non-finite field (eta * dz too large?)");
  }
}

FieldState rk4(const LambdaResponse& response, const FieldState& y, const CouplingConstants& eta,
               double h, PropagationOptions options) {
  const auto f = [&](cplx a, cplx b) { return field_derivative(response, a, b, eta, options); };
  const FieldDerivative k1 = f(y.omega1, y.omega2);
  const FieldDerivative k2 = f(y.omega1 + 0.5 * h * k1.d1, y.omega2 + 0.5 * h * k1.d2);
  const FieldDerivative k3 = f(y.omega1 + 0.5 * h * k2.d1, y.omega2 + 0.5 * h * k2.d2);
  const FieldDerivative k4 = f(y.omega1 + h * k3.d1, y.omega2 + h * k3.d2);
  FieldState out = y;
  out.omega1 = y.omega1 + (h / 6.0) * (k1.d1 + 2.0 * k2.d1 + 2.0 * k3.d1 + k4.d1);
  out.omega2 = y.omega2 + (h / 6.0) * (k1.d2 + 2.0 * k2.d2 + 2.0 * k3.d2 + k4.d2);
  return out;
}

}  // namespace

std::vector<std::string> violations(const MediumConfig& m) {
  std::vector<std::string> out;
  if (!(std::isfinite(m.length) && m.length > 0)) out.emplace_back("cell length must be > 0");
  if (m.n_slabs < 1) out.emplace_back("n_slabs must be >= 1");
  if (!(std::isfinite(m.density) && m.density >= 0)) out.emplace_back("density must be >= 0");
  if (m.eta_override) {
    const auto& e = *m.eta_override;
    if (!(std::isfinite(e.eta_b) && std::isfinite(e.eta_c) && e.eta_b >= 0 && e.eta_c >= 0)) {
      out.emplace_back("eta override values must be finite and >= 0");
    }
  } else {
    if (!(m.dipole_b > 0 && m.dipole_c > 0)) out.emplace_back("dipole moments must be > 0");
    if (!(m.epsilon0 > 0 && m.c_light > 0)) out.emplace_back("epsilon0 and c_light must be > 0");
    if (!(std::isfinite(m.carrier) && m.carrier > 0)) out.emplace_back("carrier must be > 0");
  }
  return out;
}

void validate(const MediumConfig& m) { throw_if_invalid(violations(m), "MediumConfig"); }

CouplingConstants coupling_constants(const MediumConfig& medium, double nu) {
  if (!std::isfinite(nu)) throw std::invalid_argument("coupling_constants: non-finite nu");
  if (medium.eta_override) return *medium.eta_override;
  const double scale = nu * medium.density / (2.0 * medium.epsilon0 * medium.c_light);
  return {scale * medium.dipole_b, scale * medium.dipole_c};
}

FieldDerivative field_derivative(const LambdaResponse& response, cplx omega1, cplx omega2,
                                 const CouplingConstants& eta, PropagationOptions options) {
  const Polar f1 = polar_of(omega1);
  const Polar f2 = polar_of(omega2);
  return sources(response, f1, f2, response.ground_coherence(f1.magnitude, f2.magnitude), eta,
                 options);
}

FieldState step(const FieldState& fields, const LambdaAtomParams& params,
                const CouplingConstants& eta, double dz, PropagationOptions options,
                ResponseOptions response) {
  if (!(dz > 0)) throw std::invalid_argument("step: dz must be > 0");
  FieldState out = rk4(LambdaResponse(params, fields.nu, response), fields, eta, dz, options);
  require_finite(out, "step");
  return out;
}

PropagationResult propagate(const FieldState& fields_in, const LambdaAtomParams& params,
                            const MediumConfig& medium, PropagationOptions options,
                            ResponseOptions response) {
  validate(medium);
  const CouplingConstants eta = coupling_constants(medium, medium.carrier);
  const LambdaResponse resp(params, fields_in.nu, response);
  const double h = medium.length / medium.n_slabs;

  PropagationResult result;
  auto& prof = result.profile;
  prof.z_grid.reserve(medium.n_slabs + 1);
  prof.omega1_of_z.reserve(medium.n_slabs + 1);
  prof.omega2_of_z.reserve(medium.n_slabs + 1);

  FieldState y = fields_in;
  prof.z_grid.push_back(0.0);
  prof.omega1_of_z.push_back(y.omega1);
  prof.omega2_of_z.push_back(y.omega2);
  for (int i = 0; i < medium.n_slabs; ++i) {
    y = rk4(resp, y, eta, h, options);
    require_finite(y, "propagate");
    prof.z_grid.push_back(i + 1 == medium.n_slabs ? medium.length : (i + 1) * h);
    prof.omega1_of_z.push_back(y.omega1);
    prof.omega2_of_z.push_back(y.omega2);
  }
  result.fields_out = y;
  return result;
}

std::pair<double, double> transmission(const FieldState& fields_in, const FieldState& fields_out) {
  const double in1 = std::norm(fields_in.omega1);
  const double in2 = std::norm(fields_in.omega2);
  if (!(in1 > 0 && in2 > 0)) throw std::invalid_argument("transmission: zero input intensity");
  return {std::norm(fields_out.omega1) / in1, std::norm(fields_out.omega2) / in2};
}

double convergence_error(const FieldState& fields_in, const LambdaAtomParams& params,
                         const MediumConfig& medium, PropagationOptions options,
                         ResponseOptions response) {
  MediumConfig fine = medium;
  fine.n_slabs = medium.n_slabs * 2;
  const FieldState a = propagate(fields_in, params, medium, options, response).fields_out;
  const FieldState b = propagate(fields_in, params, fine, options, response).fields_out;
  const auto rel = [](double coarse, double ref) {
    return ref > 0 ? std::abs(coarse - ref) / ref : std::abs(coarse - ref);
  };
  return std::max(rel(std::norm(a.omega1), std::norm(b.omega1)),
                  rel(std::norm(a.omega2), std::norm(b.omega2)));
}

void check_convergence(const FieldState& fields_in, const LambdaAtomParams& params,
                       const MediumConfig& medium, double tolerance, PropagationOptions options,
                       ResponseOptions response) {
  const double err = convergence_error(fields_in, params, medium, options, response);
  if (!(err < tolerance)) {
    throw NumericalError("propagation not converged at n_slabs=" +
                         std::to_string(medium.n_slabs) + ": relative change " +
                         std::to_string(err) + " on doubling");
  }
}

SeriesIntensities propagate_series(cplx omega1_in, cplx omega2_in, std::span<const double> nu,
                                   double dt, const LambdaAtomParams& params,
                                   const MediumConfig& medium, GroundCoherenceFilter filter,
                                   PropagationOptions options, ResponseOptions response) {
  validate(medium);
  if (filter.mode != GroundCoherenceFilter::Mode::off && !(dt > 0)) {
    throw std::invalid_argument("propagate_series: dt must be > 0 when filtering");
  }
  if (filter.mode == GroundCoherenceFilter::Mode::fixed && !(filter.rate > 0)) {
    throw std::invalid_argument("propagate_series: fixed filter rate must be > 0");
  }
  const std::size_t n = nu.size();
  const CouplingConstants eta = coupling_constants(medium, medium.carrier);
  const double h = medium.length / medium.n_slabs;

  std::vector<LambdaResponse> resp;
  resp.reserve(n);
  for (double v : nu) resp.emplace_back(params, v, response);

  std::vector<cplx> w1(n, omega1_in), w2(n, omega2_in);
  std::vector<cplx> s1(n), s2(n);  // stage fields
  std::vector<cplx> rho(n);
  std::vector<Polar> p1(n), p2(n);
  std::vector<cplx> acc1(n), acc2(n), k1(n), k2(n);

  // Fills (k1, k2) with the derivative at stage fields (s1, s2).
  const auto derivative = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double mean1 = 0.0, mean2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p1[i] = polar_of(a[i]);
      p2[i] = polar_of(b[i]);
      rho[i] = resp[i].ground_coherence(p1[i].magnitude, p2[i].magnitude);
      mean1 += p1[i].magnitude * p1[i].magnitude;
      mean2 += p2[i].magnitude * p2[i].magnitude;
    }
    if (filter.mode != GroundCoherenceFilter::Mode::off && n > 0) {
      double rate = filter.rate;
      if (filter.mode == GroundCoherenceFilter::Mode::power_broadened) {
        rate = params.gamma_cb + (mean1 / n) / params.gamma_ab + (mean2 / n) / params.gamma_ca;
      }
      const double alpha = -std::expm1(-rate * dt);
      cplx y = rho[0];
      for (std::size_t i = 1; i < n; ++i) {
        y += alpha * (rho[i] - y);
        rho[i] = y;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const FieldDerivative d = sources(resp[i], p1[i], p2[i], rho[i], eta, options);
      k1[i] = d.d1;
      k2[i] = d.d2;
    }
  };

  for (int slab = 0; slab < medium.n_slabs; ++slab) {
    // Same stage arithmetic as rk4() so the unfiltered path reproduces
    // per-sample propagation bit for bit.
    derivative(w1, w2);
    for (std::size_t i = 0; i < n; ++i) {
      acc1[i] = k1[i];
      acc2[i] = k2[i];
      s1[i] = w1[i] + 0.5 * h * k1[i];
      s2[i] = w2[i] + 0.5 * h * k2[i];
    }
    derivative(s1, s2);
    for (std::size_t i = 0; i < n; ++i) {
      acc1[i] += 2.0 * k1[i];
      acc2[i] += 2.0 * k2[i];
      s1[i] = w1[i] + 0.5 * h * k1[i];
      s2[i] = w2[i] + 0.5 * h * k2[i];
    }
    derivative(s1, s2);
    for (std::size_t i = 0; i < n; ++i) {
      acc1[i] += 2.0 * k1[i];
      acc2[i] += 2.0 * k2[i];
      s1[i] = w1[i] + h * k1[i];
      s2[i] = w2[i] + h * k2[i];
    }
    derivative(s1, s2);
    for (std::size_t i = 0; i < n; ++i) {
      w1[i] = w1[i] + (h / 6.0) * (acc1[i] + k1[i]);
      w2[i] = w2[i] + (h / 6.0) * (acc2[i] + k2[i]);
      if (!finite(w1[i]) || !finite(w2[i])) {
        throw NumericalError("propagate_series: non-finite field at sample " + std::to_string(i) +
                             ", slab " + std::to_string(slab));
      }
    }
  }

  SeriesIntensities out;
  out.intensity1.resize(n);
  out.intensity2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.intensity1[i] = std::norm(w1[i]);
    out.intensity2[i] = std::norm(w2[i]);
  }
  return out;
}

}  // namespace eitcorr
