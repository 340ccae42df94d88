#include "eitcorr/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "eitcorr/config.hpp"
#include "eitcorr/errors.hpp"

namespace eitcorr::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Bad input data (as opposed to a bad config) also maps to exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json manifest_json(const RunManifest& m) {
  return {{"config_path", m.config_path}, {"subcommand", m.subcommand},
          {"seed", m.seed},               {"output_dir", m.output_dir},
          {"tool_version", m.tool_version}, {"timestamp", m.timestamp}};
}

// Collects output files in memory and commits them together.
class Outputs {
 public:
  Outputs(fs::path dir, RunManifest manifest) : dir_(std::move(dir)), manifest_(std::move(manifest)) {}

  void csv(const std::string& name, const std::vector<std::string>& columns,
           const std::vector<const std::vector<double>*>& data) {
    std::string s;
    s += "# config_path: " + manifest_.config_path + "\n";
    s += "# subcommand: " + manifest_.subcommand + "\n";
    s += "# seed: " + std::to_string(manifest_.seed) + "\n";
    s += "# output_dir: " + manifest_.output_dir + "\n";
    s += "# tool_version: " + manifest_.tool_version + "\n";
    s += "# timestamp: " + manifest_.timestamp + "\n";
    for (std::size_t j = 0; j < columns.size(); ++j) s += (j ? "," : "") + columns[j];
    s += "\n";
    const std::size_t rows = data.front()->size();
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < data.size(); ++j) s += (j ? "," : "") + num((*data[j])[i]);
      s += "\n";
    }
    files_.emplace_back(name, std::move(s));
  }

  void summary(ordered_json body) {
    body["manifest"] = manifest_json(manifest_);
    files_.emplace_back("summary.json", body.dump(2) + "\n");
  }

  // Temp-then-rename per file; on any failure everything written is removed.
  void commit() {
    std::vector<fs::path> done;
    try {
      fs::create_directories(dir_);
      for (const auto& [name, text] : files_) {
        const fs::path final_path = dir_ / name;
        const fs::path tmp = dir_ / ("." + name + ".tmp");
        {
          std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
          out << text;
          out.close();
          if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("cannot write " + tmp.string());
          }
        }
        fs::rename(tmp, final_path);
        done.push_back(final_path);
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& p : done) fs::remove(p, ec);
      throw;
    }
  }

 private:
  fs::path dir_;
  RunManifest manifest_;
  std::vector<std::pair<std::string, std::string>> files_;
};

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json peak_json(const PeakStats& p) {
  return {{"peak_value", p.peak_value},
          {"peak_lag_s", p.peak_lag},
          {"fwhm_s", p.fwhm},
          {"background", p.background}};
}

std::vector<double> time_axis(std::size_t n, double dt) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) * dt;
  return t;
}

// Shared by waveforms and analyze so both give identical statistics.
void analyze_pair(const IntensitySeries& s1, const IntensitySeries& s2, double max_lag,
                  Outputs& out, ordered_json& summary) {
  const CorrelationCurve curve = cross_correlation(s1, s2, max_lag);
  out.csv("g2_curve.csv", {"tau_s", "g2"}, {&curve.lags, &curve.values});
  summary["samples"] = s1.fluctuations.size();
  summary["dt_s"] = s1.dt;
  summary["g2_zero"] = correlation_at_lag(s1.fluctuations, s2.fluctuations, 0);
  ordered_json peak;  // stays null when the curve has no resolvable peak
  try {
    peak = peak_json(peak_stats(curve));
  } catch (const NumericalError&) {
  }
  summary["peak"] = std::move(peak);
  summary["median_frequency_hz"] = {median_frequency(power_spectrum(s1)),
                                    median_frequency(power_spectrum(s2))};
}

void eit_command(const RunConfig& c, unsigned threads, Outputs& out) {
  const EitSweep s = eit_sweep(c.experiment, threads);
  out.csv("eit_sweep.csv", {"b_gauss", "transmission1", "transmission2"},
          {&s.b_values, &s.transmission1, &s.transmission2});
  ordered_json j;
  j["eit_fwhm_gauss"] = optional_json(s.fwhm);
  j["peak_transmission"] = s.peak_transmission;
  j["peak_b_gauss"] = s.peak_b;
  j["single_beam_transmission"] = single_beam_transmission(c.experiment);
  j["power_mw"] = c.experiment.power_mw;
  out.summary(std::move(j));
}

void waveforms_command(const RunConfig& c, Outputs& out) {
  const WaveformPair w = synthesize_waveforms(c.experiment, c.waveform_b_gauss);
  const auto t = time_axis(w.beam1.fluctuations.size(), w.beam1.dt);
  out.csv("waveforms.csv", {"t_s", "dI1", "dI2"},
          {&t, &w.beam1.fluctuations, &w.beam2.fluctuations});
  ordered_json j;
  j["b_gauss"] = c.waveform_b_gauss;
  j["mean_intensity"] = {w.beam1.mean, w.beam2.mean};
  analyze_pair(w.beam1, w.beam2, c.max_lag, out, j);
  out.summary(std::move(j));
}

void correlate_command(const RunConfig& c, unsigned threads, Outputs& out) {
  const SweepResult r = correlation_vs_field(c.experiment, threads);
  out.csv("eit_sweep.csv", {"b_gauss", "transmission1", "transmission2"},
          {&r.b_values, &r.transmission1, &r.transmission2});
  out.csv("corr_sweep.csv", {"b_gauss", "g2_zero"}, {&r.b_values, &r.g2_zero});
  const TransitionSummary t = summarize_transition(r);
  ordered_json j;
  j["eit_fwhm_gauss"] = optional_json(r.eit_fwhm);
  j["corr_fwhm_gauss"] = optional_json(r.corr_fwhm);
  j["width_ratio"] = optional_json(r.width_ratio);
  j["g2_at_zero"] = t.g2_at_zero;
  j["g2_min"] = t.g2_min;
  j["b_at_min_gauss"] = t.b_at_min;
  j["sign_flip"] = {{"negative_side", t.sign_change_negative_side},
                    {"positive_side", t.sign_change_positive_side}};
  j["power_mw"] = c.experiment.power_mw;
  out.summary(std::move(j));
}

void analyze_command(const RunConfig& c, const std::string& input, Outputs& out) {
  if (input.empty()) throw InputError("analyze needs --input or input_csv");
  const WaveformTable table = read_waveform_csv(input);
  const double dt = table.dt.value_or(c.experiment.sample_dt);
  const auto s1 = IntensitySeries::from_fluctuations(dt, table.beam1);
  const auto s2 = IntensitySeries::from_fluctuations(dt, table.beam2);
  if (c.max_lag > 0.2 * s1.duration()) {
    throw InputError("max_lag exceeds 20% of the record in " + input);
  }
  ordered_json j;
  j["input"] = input;
  analyze_pair(s1, s2, c.max_lag, out, j);
  out.summary(std::move(j));
}

void lock_command(const RunConfig& c, Outputs& out) {
  const PhaseTrajectory traj = integrate_theta(c.lock);
  const auto t = time_axis(traj.theta.size(), traj.dt);
  out.csv("theta.csv", {"t_s", "theta_rad"}, {&t, &traj.theta});
  const LockDiagnostics d = lock_diagnostics(traj, c.lock);
  ordered_json j;
  j["a_rad_s"] = c.lock.a;
  j["b_rad_s"] = c.lock.b;
  j["locked"] = d.locked;
  j["mean_drift_rate_rad_s"] = d.mean_drift_rate;
  j["circular_spread_rad"] = d.circular_spread;
  out.summary(std::move(j));
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"eit-sweep", "waveforms", "correlate-sweep",
                                              "analyze", "phase-lock"};
  return names;
}

WaveformTable read_waveform_csv(const fs::path& path) {
  std::istringstream in(read_file(path));
  WaveformTable t;
  std::vector<double> time;
  std::string line;
  bool header_seen = false;
  std::size_t columns = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header_seen) {
      header_seen = true;
      columns = cells.size();
      if (columns != 2 && columns != 3) {
        throw InputError(path.string() + ": expected 2 or 3 columns, header has " +
                         std::to_string(columns));
      }
      continue;
    }
    if (cells.size() != columns) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(columns) + " values");
    }
    std::vector<double> v;
    for (const auto& s : cells) {
      char* end = nullptr;
      const double x = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0' || !std::isfinite(x)) {
        throw InputError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
      }
      v.push_back(x);
    }
    if (columns == 3) time.push_back(v[0]);
    t.beam1.push_back(v[columns - 2]);
    t.beam2.push_back(v[columns - 1]);
  }
  if (t.beam1.size() < 2) throw InputError(path.string() + ": fewer than 2 data rows");
  if (columns == 3) {
    const double dt = time[1] - time[0];
    if (!(dt > 0)) throw InputError(path.string() + ": time column must increase");
    t.dt = dt;
  }
  return t;
}

int run(const RunRequest& req, std::ostream& err) {
  const auto& names = subcommands();
  if (std::find(names.begin(), names.end(), req.subcommand) == names.end()) {
    err << "error: unknown subcommand '" << req.subcommand << "'\n";
    return kConfigError;
  }
  RunConfig config;
  try {
    config = parse_config(req.config_path.empty() ? std::string() : read_file(req.config_path));
    if (req.seed) {
      config.experiment.noise.seed = *req.seed;
      config.lock.seed = *req.seed;
    }
  } catch (const ConfigError& e) {
    err << "error: " << (req.config_path.empty() ? "<defaults>" : req.config_path) << ":\n";
    for (const auto& issue : e.issues()) err << "  " << issue << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  RunManifest manifest;
  manifest.config_path = req.config_path;
  manifest.subcommand = req.subcommand;
  manifest.seed = config.experiment.noise.seed;
  manifest.output_dir = req.out_dir.string();
  manifest.timestamp = req.timestamp.value_or(utc_now());
  Outputs out(req.out_dir, manifest);
  const unsigned threads = std::max(1u, req.threads);

  try {
    if (req.subcommand == "eit-sweep") {
      eit_command(config, threads, out);
    } else if (req.subcommand == "waveforms") {
      waveforms_command(config, out);
    } else if (req.subcommand == "correlate-sweep") {
      correlate_command(config, threads, out);
    } else if (req.subcommand == "analyze") {
      analyze_command(config, req.input.empty() ? config.input_csv : req.input, out);
    } else {
      lock_command(config, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }

  try {
    out.commit();
  } catch (const std::exception& e) {
    err << "error: writing outputs: " << e.what() << "\n";
    return kNumericalError;
  }
  return kOk;
}

}  // namespace eitcorr::cli
