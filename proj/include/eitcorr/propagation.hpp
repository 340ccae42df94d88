#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eitcorr/lambda_medium.hpp"

namespace eitcorr {

/// Complex Rabi amplitudes of both beams at one position, plus the shared
/// instantaneous carrier (frame-relative, rad/s).
using FieldState = DriveFields;

struct CouplingConstants {
  double eta_b = 0.0;  ///< rad/(s m)
  double eta_c = 0.0;

  bool operator==(const CouplingConstants&) const = default;
};

struct MediumConfig {
  double length = 0.075;  ///< m
  int n_slabs = 400;
  double density = 1e18;  ///< 1/m^3
  double dipole_b = 0.0;  ///< C m
  double dipole_c = 0.0;
  double epsilon0 = 8.8541878128e-12;
  double c_light = 299792458.0;
  /// Absolute angular frequency of the nominal carrier, used for eta.
  double carrier = 2.0 * 3.14159265358979323846 * 377.107463380e12;
  std::optional<CouplingConstants> eta_override;

  bool operator==(const MediumConfig&) const = default;
};

std::vector<std::string> violations(const MediumConfig& m);
void validate(const MediumConfig& m);

struct PropagationOptions {
  /// Drive beam 2 with rho_ca itself instead of rho_ac = conj(rho_ca).
  /// Debug only: it turns absorption of beam 2 into gain.
  bool literal_rho_ca = false;

  bool operator==(const PropagationOptions&) const = default;
};

struct PropagationProfile {
  std::vector<double> z_grid;
  std::vector<cplx> omega1_of_z;
  std::vector<cplx> omega2_of_z;
};

struct PropagationResult {
  FieldState fields_out;
  PropagationProfile profile;
};

/// eta_override when present, otherwise eta = nu N dipole / (2 eps0 c).
/// `nu` is an absolute angular frequency. Throws on non-finite nu.
CouplingConstants coupling_constants(const MediumConfig& medium, double nu);

/// dOmega/dz for both beams:
///   dW1/dz = -i eta_b rho_ab,  dW2/dz = -i eta_c rho_ac,  rho_ac = conj(rho_ca).
/// The coherences are evaluated with real field magnitudes and rotated back
/// onto each beam's phase; the Lambda response is covariant under field
/// phase changes, and this keeps the printed (unconjugated) formulas
/// consistent for complex amplitudes.
struct FieldDerivative {
  cplx d1;
  cplx d2;
};

FieldDerivative field_derivative(const LambdaResponse& response, cplx omega1, cplx omega2,
                                 const CouplingConstants& eta, PropagationOptions options = {});

/// One classical RK4 step of length dz. Throws NumericalError when the
/// result is non-finite.
FieldState step(const FieldState& fields, const LambdaAtomParams& params,
                const CouplingConstants& eta, double dz, PropagationOptions options = {},
                ResponseOptions response = {});

PropagationResult propagate(const FieldState& fields_in, const LambdaAtomParams& params,
                            const MediumConfig& medium, PropagationOptions options = {},
                            ResponseOptions response = {});

/// |W_k(out)|^2 / |W_k(in)|^2. Throws std::invalid_argument for zero input.
std::pair<double, double> transmission(const FieldState& fields_in, const FieldState& fields_out);

/// Largest relative change of the exit intensities when the slab count is
/// doubled.
double convergence_error(const FieldState& fields_in, const LambdaAtomParams& params,
                         const MediumConfig& medium, PropagationOptions options = {},
                         ResponseOptions response = {});

/// Throws NumericalError if convergence_error exceeds `tolerance`.
void check_convergence(const FieldState& fields_in, const LambdaAtomParams& params,
                       const MediumConfig& medium, double tolerance = 1e-6,
                       PropagationOptions options = {}, ResponseOptions response = {});

/// How the ground coherence follows the instantaneous fields in time.
struct GroundCoherenceFilter {
  enum class Mode {
    off,              ///< quasi-static: rho_cb follows every sample
    power_broadened,  ///< rate gamma_cb + <|W1|^2>/gamma_ab + <|W2|^2>/gamma_ca
    fixed,            ///< constant rate
  };
  Mode mode = Mode::off;
  double rate = 0.0;  ///< rad/s, used by Mode::fixed

  bool operator==(const GroundCoherenceFilter&) const = default;
};

struct SeriesIntensities {
  std::vector<double> intensity1;  ///< |W1(out)|^2 per time sample
  std::vector<double> intensity2;
};

/// Propagates a time series of carrier offsets through the cell, marching
/// all samples together slab by slab. With the filter off each sample is
/// exactly `propagate` of that sample. Otherwise, at every RK stage the
/// instantaneous rho_cb of each sample is passed through a first-order
/// low-pass across time before the optical coherences are formed:
///   y[n] = y[n-1] + alpha (x[n] - y[n-1]),  alpha = 1 - exp(-rate dt),  y[0] = x[0].
/// For Mode::power_broadened the intensities entering the rate are averaged
/// over the record at the current slab and stage.
SeriesIntensities propagate_series(cplx omega1_in, cplx omega2_in, std::span<const double> nu,
                                   double dt, const LambdaAtomParams& params,
                                   const MediumConfig& medium, GroundCoherenceFilter filter = {},
                                   PropagationOptions options = {}, ResponseOptions response = {});

}  // namespace eitcorr
