#pragma once

#include <complex>
#include <string>
#include <vector>

namespace eitcorr {

using cplx = std::complex<double>;

/// Steady-state response of a three-level Lambda system: excited level a,
/// ground levels b and c. Beam 1 drives a<->b, beam 2 drives a<->c.
///
/// All rates and frequencies are angular (rad/s). Transition frequencies may
/// be given in any common frame; only the differences omega - nu enter. The
/// scenario layer uses the nominal laser carrier as the frame origin, so
/// omega_ab and omega_ac are one-photon detunings of the bare lines from it.
struct LambdaAtomParams {
  double gamma_ab = 0.0;  ///< optical coherence decay a<->b
  double gamma_ca = 0.0;  ///< optical coherence decay c<->a
  double gamma_cb = 0.0;  ///< ground-state coherence decay
  double omega_ab = 0.0;
  double omega_ac = 0.0;
  double omega_cb = 0.0;  ///< signed ground-state splitting
  double n_a = 0.0;
  double n_b = 0.5;
  double n_c = 0.5;

  double n_ba() const noexcept { return n_b - n_a; }
  double n_ca() const noexcept { return n_c - n_a; }

  bool operator==(const LambdaAtomParams&) const = default;
};

/// Returns one message per violated invariant (empty when valid).
std::vector<std::string> violations(const LambdaAtomParams& p);
void validate(const LambdaAtomParams& p);

/// Both beams come from one laser, so a single instantaneous carrier
/// frequency nu drives both transitions.
struct DriveFields {
  cplx omega1{};
  cplx omega2{};
  double nu = 0.0;
};

struct ComplexLinewidths {
  cplx big_gamma_ab{};
  cplx big_gamma_ca{};
  cplx big_gamma_cb{};
};

struct Coherences {
  cplx rho_cb{};
  cplx rho_ab{};
  cplx rho_ca{};

  double max_magnitude() const noexcept;
  /// |rho| <= 1 for every element.
  bool admissible() const noexcept { return max_magnitude() <= 1.0; }
};

struct ResponseOptions {
  /// Use conj(omega2) in the numerator of rho_cb instead of the printed
  /// omega1 * omega2 product. Off by default; only for sensitivity studies.
  bool conjugate_omega2 = false;

  bool operator==(const ResponseOptions&) const = default;
};

ComplexLinewidths complex_linewidths(const LambdaAtomParams& params, const DriveFields& drive);

/// rho_cb = -[(G_ca + G_ab) / (2 G_ca G_ab)] W1 W2 / (G_cb + |W2|^2/G_ab + |W1|^2/G_ca)
/// rho_ab = -i (n_ba W1 + rho_cb W2) / G_ab
/// rho_ca =  i (n_ca W2 + rho_cb W1) / G_ca
///
/// Throws std::invalid_argument on non-finite input.
Coherences steady_state(const LambdaAtomParams& params, const DriveFields& drive,
                        ResponseOptions options = {});

/// Pre-factored form of steady_state for a fixed (params, nu). Caches the
/// reciprocal linewidths so repeated evaluation over many field values (the
/// propagation inner loop) costs one complex division each.
class LambdaResponse {
 public:
  LambdaResponse(const LambdaAtomParams& params, double nu, ResponseOptions options = {});

  Coherences evaluate(cplx omega1, cplx omega2) const noexcept;

  cplx ground_coherence(cplx omega1, cplx omega2) const noexcept;

  /// Optical coherences for a prescribed ground coherence (used when rho_cb
  /// lags the instantaneous fields).
  Coherences with_ground_coherence(cplx omega1, cplx omega2, cplx rho_cb) const noexcept;

  const ComplexLinewidths& linewidths() const noexcept { return lw_; }

 private:
  ComplexLinewidths lw_;
  cplx inv_ab_;
  cplx inv_ca_;
  cplx prefactor_;  // (G_ca + G_ab) / (2 G_ca G_ab)
  double n_ba_;
  double n_ca_;
  bool conjugate_omega2_;
};

}  // namespace eitcorr
