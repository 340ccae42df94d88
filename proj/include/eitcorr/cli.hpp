#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace eitcorr::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Recorded verbatim in every output file.
struct RunManifest {
  std::string config_path;
  std::string subcommand;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::string tool_version = kToolVersion;
  std::string timestamp;
};

struct RunRequest {
  std::string subcommand;  ///< eit-sweep | waveforms | correlate-sweep | analyze | phase-lock
  std::string config_path;             ///< empty: defaults
  std::optional<std::uint64_t> seed;   ///< overrides the config seed
  std::filesystem::path out_dir = ".";
  unsigned threads = 1;
  std::optional<std::string> timestamp;  ///< default: current UTC time
  std::string input;                     ///< analyze: overrides input_csv
};

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalError = 2 };

const std::vector<std::string>& subcommands();

/// Runs one subcommand and writes its files into out_dir. Diagnostics go
/// to `err`. On failure nothing is left behind.
int run(const RunRequest& request, std::ostream& err);

/// Two columns (dI1, dI2; dt taken from the config) or three columns
/// (t_s, dI1, dI2). '#' lines and one header line are skipped.
struct WaveformTable {
  std::optional<double> dt;
  std::vector<double> beam1;
  std::vector<double> beam2;
};
WaveformTable read_waveform_csv(const std::filesystem::path& path);

}  // namespace eitcorr::cli
