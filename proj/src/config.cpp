#include "eitcorr/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "eitcorr/errors.hpp"

namespace eitcorr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAngularMHz = kTwoPi * 1e6;

struct Unit {
  const char* suffix;
  double scale;  // value * scale = internal
};

// The last unit of every list is the internal one and is what emit_config writes.
const std::vector<Unit> kRate{{"mhz", kAngularMHz}, {"rad_s", 1.0}};
const std::vector<Unit> kLength{{"cm", 1e-2}, {"m", 1.0}};
const std::vector<Unit> kDensity{{"per_cm3", 1e6}, {"per_m3", 1.0}};
const std::vector<Unit> kCarrier{{"thz", kTwoPi * 1e12}, {"rad_s", 1.0}};
const std::vector<Unit> kHertz{{"mhz", 1e6}, {"hz", 1.0}};
const std::vector<Unit> kTime{{"us", 1e-6}, {"s", 1.0}};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> to_integer(const std::string& s) {
  Int v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

const char* lowpass_name(GroundCoherenceFilter::Mode m) {
  switch (m) {
    case GroundCoherenceFilter::Mode::off: return "off";
    case GroundCoherenceFilter::Mode::power_broadened: return "power_broadened";
    case GroundCoherenceFilter::Mode::fixed: return "fixed";
  }
  return "off";
}

// Reads keys out of the parsed table into a RunConfig.
class Reader {
 public:
  explicit Reader(std::map<std::string, Entry>& table, std::vector<std::string>& issues)
      : table_(table), issues_(issues) {}

  void real(const std::string& base, const std::vector<Unit>& units, double& target) {
    if (auto v = scaled(base, units)) target = *v;
  }

  void optional_real(const std::string& base, const std::vector<Unit>& units,
                     std::optional<double>& target) {
    if (auto v = scaled(base, units)) target = *v;
  }

  void plain(const std::string& key, double& target) {
    if (auto* e = take(key)) {
      if (auto v = to_double(e->value)) target = *v;
      else bad(key, *e, "expected a finite number");
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& target) {
    if (auto* e = take(key)) {
      if (auto v = to_integer<Int>(e->value)) target = *v;
      else bad(key, *e, "expected a non-negative integer");
    }
  }

  void boolean(const std::string& key, bool& target) {
    if (auto* e = take(key)) {
      if (e->value == "true") target = true;
      else if (e->value == "false") target = false;
      else bad(key, *e, "expected true or false");
    }
  }

  void text(const std::string& key, std::string& target) {
    if (auto* e = take(key)) target = e->value;
  }

  void list(const std::string& key, std::vector<double>& target) {
    auto* e = take(key);
    if (!e) return;
    const std::string& v = e->value;
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
      bad(key, *e, "expected a list [v1, v2, ...]");
      return;
    }
    std::vector<double> out;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto x = to_double(trim(item));
      if (!x) {
        bad(key, *e, "list item '" + trim(item) + "' is not a finite number");
        return;
      }
      out.push_back(*x);
    }
    target = std::move(out);
  }

  void noise_kind(const std::string& key, NoiseKind& target) {
    if (auto* e = take(key)) {
      try {
        target = noise_kind_from_string(e->value);
      } catch (const std::invalid_argument&) {
        bad(key, *e, "expected ou_frequency or white_phase_diffusion");
      }
    }
  }

  void lowpass(const std::string& key, GroundCoherenceFilter::Mode& target) {
    if (auto* e = take(key)) {
      if (e->value == "off") target = GroundCoherenceFilter::Mode::off;
      else if (e->value == "power_broadened") target = GroundCoherenceFilter::Mode::power_broadened;
      else if (e->value == "fixed") target = GroundCoherenceFilter::Mode::fixed;
      else bad(key, *e, "expected off, power_broadened or fixed");
    }
  }

  bool has(const std::string& key) const { return table_.count(key) > 0; }

 private:
  Entry* take(const std::string& key) {
    auto it = table_.find(key);
    if (it == table_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  std::optional<double> scaled(const std::string& base, const std::vector<Unit>& units) {
    std::optional<double> result;
    std::string first;
    for (const auto& u : units) {
      const std::string key = base + "_" + u.suffix;
      auto* e = take(key);
      if (!e) continue;
      if (!first.empty()) {
        issues_.push_back(key + ": conflicts with " + first + " (line " +
                          std::to_string(e->line) + ")");
        continue;
      }
      first = key;
      if (auto v = to_double(e->value)) result = *v * u.scale;
      else bad(key, *e, "expected a finite number");
    }
    return result;
  }

  void bad(const std::string& key, const Entry& e, const std::string& what) {
    issues_.push_back(key + ": " + what + ", got '" + e.value + "' (line " +
                      std::to_string(e.line) + ")");
  }

  std::map<std::string, Entry>& table_;
  std::vector<std::string>& issues_;
};

// Writes every key in its internal unit.
class Writer {
 public:
  void real(const std::string& base, const std::vector<Unit>& units, const double& v) {
    line(base + "_" + units.back().suffix, format_double(v));
  }
  void optional_real(const std::string& base, const std::vector<Unit>& units,
                     const std::optional<double>& v) {
    if (v) real(base, units, *v);
  }
  void plain(const std::string& key, const double& v) { line(key, format_double(v)); }
  template <typename Int>
  void integer(const std::string& key, const Int& v) {
    line(key, std::to_string(v));
  }
  void boolean(const std::string& key, const bool& v) { line(key, v ? "true" : "false"); }
  void text(const std::string& key, const std::string& v) {
    if (!v.empty()) line(key, "\"" + v + "\"");
  }
  void list(const std::string& key, const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
    line(key, s + "]");
  }
  void noise_kind(const std::string& key, const NoiseKind& k) { line(key, to_string(k)); }
  void lowpass(const std::string& key, const GroundCoherenceFilter::Mode& m) {
    line(key, lowpass_name(m));
  }
  void section(const char* name) { out_ << "\n[" << name << "]\n"; }
  std::string str() const { return out_.str(); }

 private:
  void line(const std::string& key, const std::string& value) {
    out_ << key << " = " << value << "\n";
  }
  std::ostringstream out_;
};

// Keys shared by both directions. Writer::section is a no-op concept for the
// reader, so sections are emitted separately.
template <typename V, typename C>
void atom_keys(V& v, C& a) {
  v.real("gamma_ab", kRate, a.gamma_ab);
  v.real("gamma_ca", kRate, a.gamma_ca);
  v.real("gamma_cb", kRate, a.gamma_cb);
  v.real("omega_ab", kRate, a.omega_ab);
  v.real("omega_ac", kRate, a.omega_ac);
  v.real("omega_cb", kRate, a.omega_cb);
  v.plain("n_a", a.n_a);
  v.plain("n_b", a.n_b);
  v.plain("n_c", a.n_c);
}

template <typename V, typename C>
void medium_keys(V& v, C& m) {
  v.real("cell_length", kLength, m.length);
  v.integer("n_slabs", m.n_slabs);
  v.real("density", kDensity, m.density);
  v.plain("dipole_b_coulomb_m", m.dipole_b);
  v.plain("dipole_c_coulomb_m", m.dipole_c);
  v.real("carrier_frequency", kCarrier, m.carrier);
}

template <typename V, typename C>
void noise_keys(V& v, C& n) {
  v.noise_kind("noise_kind", n.kind);
  v.real("linewidth", kHertz, n.linewidth);
  v.real("correlation_time", kTime, n.correlation_time);
  v.integer("seed", n.seed);
}

template <typename V, typename C>
void run_keys(V& v, C& c) {
  auto& e = c.experiment;
  v.real("rabi", kRate, e.rabi_input);
  v.plain("power_mw", e.power_mw);
  v.real("record_length", kTime, e.record_length);
  v.real("sample_dt", kTime, e.sample_dt);
  v.plain("zeeman_rate_mhz_per_gauss", e.zeeman_rate);
  v.boolean("conjugate_omega2", e.response.conjugate_omega2);
  v.boolean("literal_rho_ca", e.propagation.literal_rho_ca);
  v.lowpass("response_lowpass", e.response_lowpass.mode);
  v.optional_real("detector_highpass", kHertz, e.detector_highpass);
  v.optional_real("detector_lowpass", kHertz, e.detector_lowpass);
  v.plain("waveform_b_gauss", c.waveform_b_gauss);
  v.real("max_lag", kTime, c.max_lag);
  v.text("input_csv", c.input_csv);
}

template <typename V, typename C>
void lock_keys(V& v, C& l) {
  v.plain("lock_a_rad_s", l.a);
  v.plain("lock_b_rad_s", l.b);
  v.plain("lock_diffusion_rad2_s", l.diffusion);
  v.plain("lock_theta0_rad", l.theta0);
  v.plain("lock_dt_s", l.dt);
  v.integer("lock_steps", l.n_steps);
}

std::map<std::string, Entry> tokenize(std::string_view text, std::vector<std::string>& issues) {
  std::map<std::string, Entry> table;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    // A '#' starts a comment unless it sits inside a quoted string.
    bool quoted = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        raw.resize(i);
        break;
      }
    }
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      issues.push_back("line " + std::to_string(line_no) + ": missing key");
      continue;
    }
    auto [it, inserted] = table.try_emplace(key, Entry{value, line_no, false});
    if (!inserted) {
      issues.push_back(key + ": duplicate key (lines " + std::to_string(it->second.line) + " and " +
                       std::to_string(line_no) + ")");
    }
  }
  return table;
}

}  // namespace

std::vector<std::string> violations(const RunConfig& c) {
  std::vector<std::string> out = violations(c.experiment);
  for (auto& s : violations(c.lock)) out.push_back(std::move(s));
  if (!(std::isfinite(c.max_lag) && c.max_lag > 0)) out.emplace_back("max_lag must be > 0");
  if (!std::isfinite(c.waveform_b_gauss)) out.emplace_back("waveform_b_gauss must be finite");
  return out;
}

RunConfig parse_config(std::string_view text) {
  std::vector<std::string> issues;
  auto table = tokenize(text, issues);
  Reader r(table, issues);
  RunConfig c;
  auto& e = c.experiment;

  atom_keys(r, e.atom);
  medium_keys(r, e.medium);
  noise_keys(r, e.noise);
  run_keys(r, c);
  lock_keys(r, c.lock);

  // eta override: both or neither.
  std::optional<double> eta_b, eta_c;
  r.optional_real("eta_b", {{"rad_per_s_m", 1.0}}, eta_b);
  r.optional_real("eta_c", {{"rad_per_s_m", 1.0}}, eta_c);
  if (eta_b && eta_c) {
    e.medium.eta_override = CouplingConstants{*eta_b, *eta_c};
  } else if (eta_b || eta_c) {
    issues.emplace_back("eta_b_rad_per_s_m and eta_c_rad_per_s_m must be given together");
  } else if (r.has("dipole_b_coulomb_m") || r.has("dipole_c_coulomb_m") ||
             r.has("density_per_cm3") || r.has("density_per_m3")) {
    // Microscopic coupling requested: drop the calibrated override.
    e.medium.eta_override.reset();
  }

  std::optional<double> rate;
  r.optional_real("response_lowpass_rate", kRate, rate);
  if (e.response_lowpass.mode == GroundCoherenceFilter::Mode::fixed) {
    if (rate) e.response_lowpass.rate = *rate;
    else issues.emplace_back("response_lowpass = fixed needs response_lowpass_rate_mhz or _rad_s");
  } else if (rate) {
    issues.emplace_back("response_lowpass_rate is only used with response_lowpass = fixed");
  }

  // Field grid: an explicit list or an evenly spaced range.
  const bool has_range = r.has("b_min_gauss") || r.has("b_max_gauss") || r.has("b_points");
  if (r.has("b_grid_gauss") && has_range) {
    issues.emplace_back("b_grid_gauss conflicts with b_min_gauss/b_max_gauss/b_points");
  }
  r.list("b_grid_gauss", e.b_grid);
  if (has_range) {
    double lo = e.b_grid.empty() ? -1.0 : e.b_grid.front();
    double hi = e.b_grid.empty() ? 1.0 : e.b_grid.back();
    std::size_t n = e.b_grid.size();
    r.plain("b_min_gauss", lo);
    r.plain("b_max_gauss", hi);
    r.integer("b_points", n);
    if (n < 1) issues.emplace_back("b_points must be >= 1");
    else if (!(lo <= hi)) issues.emplace_back("b_min_gauss must not exceed b_max_gauss");
    else e.b_grid = linspace(lo, hi, n);
  }

  for (const auto& [key, entry] : table) {
    if (!entry.used) {
      issues.push_back(key + ": unknown key (line " + std::to_string(entry.line) + ")");
    }
  }

  e.noise.dt = e.sample_dt;
  c.lock.seed = e.noise.seed;
  for (auto& s : violations(c)) issues.push_back(std::move(s));
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

std::string emit_config(const RunConfig& c) {
  Writer w;
  const auto& e = c.experiment;
  w.section("atom");
  atom_keys(w, e.atom);
  w.section("medium");
  medium_keys(w, e.medium);
  if (e.medium.eta_override) {
    w.plain("eta_b_rad_per_s_m", e.medium.eta_override->eta_b);
    w.plain("eta_c_rad_per_s_m", e.medium.eta_override->eta_c);
  }
  w.section("noise");
  noise_keys(w, e.noise);
  w.section("experiment");
  w.list("b_grid_gauss", e.b_grid);
  run_keys(w, c);
  if (e.response_lowpass.mode == GroundCoherenceFilter::Mode::fixed) {
    w.real("response_lowpass_rate", kRate, e.response_lowpass.rate);
  }
  w.section("lock");
  lock_keys(w, c.lock);
  return w.str();
}

}  // namespace eitcorr
