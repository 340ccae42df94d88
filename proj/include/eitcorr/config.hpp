#pragma once

#include <string>
#include <string_view>

#include "eitcorr/phase_lock.hpp"
#include "eitcorr/scenarios.hpp"

namespace eitcorr {

/// Everything a CLI run needs. `experiment.noise.seed` is the run seed; the
/// phase-lock integrator uses the same value.
struct RunConfig {
  ExperimentConfig experiment = default_experiment();
  LockParams lock{.seed = 1};     ///< seed follows experiment.noise.seed
  std::string input_csv;          ///< analyze: waveform file
  double waveform_b_gauss = 0.0;  ///< waveforms: field of the record
  double max_lag = 0.2e-6;        ///< s, G2 curve half-range

  bool operator==(const RunConfig&) const = default;
};

/// Flat `key = value` text. `#` starts a comment, `[section]` lines are
/// accepted and ignored, lists are `[v1, v2, ...]`, strings may be quoted.
/// Physical keys carry their unit as a suffix (gamma_cb_mhz, gamma_cb_rad_s);
/// an empty text yields the defaults. Every problem is collected and thrown
/// together as ConfigError.
RunConfig parse_config(std::string_view text);

/// Canonical text using the SI key of every setting, 17 significant digits.
/// parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& c);

std::vector<std::string> violations(const RunConfig& c);

}  // namespace eitcorr
