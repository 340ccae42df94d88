#include "eitcorr/lambda_medium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eitcorr/errors.hpp"

namespace eitcorr {

namespace {

constexpr cplx kI{0.0, 1.0};

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

std::vector<std::string> violations(const LambdaAtomParams& p) {
  std::vector<std::string> out;
  const double all[] = {p.gamma_ab, p.gamma_ca, p.gamma_cb, p.omega_ab, p.omega_ac,
                        p.omega_cb, p.n_a,      p.n_b,      p.n_c};
  if (!std::all_of(std::begin(all), std::end(all), [](double v) { return std::isfinite(v); })) {
    out.emplace_back("atom: all parameters must be finite");
    return out;
  }
  if (!(p.gamma_ab > 0)) out.emplace_back("gamma_ab must be > 0");
  if (!(p.gamma_ca > 0)) out.emplace_back("gamma_ca must be > 0");
  if (!(p.gamma_cb > 0)) out.emplace_back("gamma_cb must be > 0");
  if (!(p.gamma_cb < p.gamma_ab && p.gamma_cb < p.gamma_ca)) {
    out.emplace_back("gamma_cb must be smaller than gamma_ab and gamma_ca");
  }
  if (p.n_a < 0 || p.n_b < 0 || p.n_c < 0) out.emplace_back("populations must be >= 0");
  if (std::abs(p.n_a + p.n_b + p.n_c - 1.0) > 1e-12) {
    out.emplace_back("populations n_a + n_b + n_c must sum to 1");
  }
  return out;
}

void validate(const LambdaAtomParams& p) { throw_if_invalid(violations(p), "LambdaAtomParams"); }

double Coherences::max_magnitude() const noexcept {
  return std::max({std::abs(rho_cb), std::abs(rho_ab), std::abs(rho_ca)});
}

ComplexLinewidths complex_linewidths(const LambdaAtomParams& params, const DriveFields& drive) {
  const double nu = drive.nu;
  ComplexLinewidths lw;
  lw.big_gamma_ab = {params.gamma_ab, params.omega_ab - nu};
  lw.big_gamma_ca = {params.gamma_ca, -(params.omega_ac - nu)};
  // nu1 - nu2 vanishes identically: both beams share one carrier.
  lw.big_gamma_cb = {params.gamma_cb, params.omega_cb};
  return lw;
}

LambdaResponse::LambdaResponse(const LambdaAtomParams& params, double nu, ResponseOptions options)
    : lw_(complex_linewidths(params, DriveFields{{}, {}, nu})),
      inv_ab_(1.0 / lw_.big_gamma_ab),
      inv_ca_(1.0 / lw_.big_gamma_ca),
      prefactor_((lw_.big_gamma_ca + lw_.big_gamma_ab) / (2.0 * lw_.big_gamma_ca * lw_.big_gamma_ab)),
      n_ba_(params.n_ba()),
      n_ca_(params.n_ca()),
      conjugate_omega2_(options.conjugate_omega2) {}

cplx LambdaResponse::ground_coherence(cplx omega1, cplx omega2) const noexcept {
  const cplx numerator = omega1 * (conjugate_omega2_ ? std::conj(omega2) : omega2);
  const cplx denominator =
      lw_.big_gamma_cb + std::norm(omega2) * inv_ab_ + std::norm(omega1) * inv_ca_;
  return -prefactor_ * numerator / denominator;
}

Coherences LambdaResponse::with_ground_coherence(cplx omega1, cplx omega2,
                                                 cplx rho_cb) const noexcept {
  Coherences c;
  c.rho_cb = rho_cb;
  c.rho_ab = -kI * (n_ba_ * omega1 + rho_cb * omega2) * inv_ab_;
  c.rho_ca = kI * (n_ca_ * omega2 + rho_cb * omega1) * inv_ca_;
  return c;
}

Coherences LambdaResponse::evaluate(cplx omega1, cplx omega2) const noexcept {
  return with_ground_coherence(omega1, omega2, ground_coherence(omega1, omega2));
}

Coherences steady_state(const LambdaAtomParams& params, const DriveFields& drive,
                        ResponseOptions options) {
  if (!finite(drive.omega1) || !finite(drive.omega2) || !std::isfinite(drive.nu)) {
    throw std::invalid_argument("steady_state: non-finite drive fields");
  }
  const double p[] = {params.gamma_ab, params.gamma_ca, params.gamma_cb, params.omega_ab,
                      params.omega_ac, params.omega_cb, params.n_a,      params.n_b,
                      params.n_c};
  if (!std::all_of(std::begin(p), std::end(p), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("steady_state: non-finite atom parameters");
  }
  return LambdaResponse(params, drive.nu, options).evaluate(drive.omega1, drive.omega2);
}

}  // namespace eitcorr
