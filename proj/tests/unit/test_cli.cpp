#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eitcorr/cli.hpp"
#include "eitcorr/config.hpp"

using namespace eitcorr;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("eitcorr_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

constexpr const char* kSmall =
    "b_min_gauss = -0.5\n"
    "b_max_gauss = 0.5\n"
    "b_points = 5\n"
    "record_length_us = 1\n"
    "n_slabs = 16\n"
    "lock_steps = 2000\n";

int run(const std::string& sub, const fs::path& cfg, const fs::path& out, std::string input = {},
        unsigned threads = 1) {
  cli::RunRequest r;
  r.subcommand = sub;
  r.config_path = cfg.string();
  r.out_dir = out;
  r.threads = threads;
  r.timestamp = "2000-01-01T00:00:00Z";
  r.input = std::move(input);
  std::ostringstream err;
  const int code = cli::run(r, err);
  if (code != 0) MESSAGE(err.str());
  return code;
}

// Data lines (after the manifest block and header).
std::vector<std::string> rows(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::string> out;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("every subcommand writes its schema") {
  TempDir tmp;
  const auto cfg = tmp.path / "small.cfg";
  write(cfg, kSmall);

  struct Expect {
    const char* sub;
    const char* file;
    const char* header;
  };
  for (const Expect& e : {Expect{"eit-sweep", "eit_sweep.csv", "b_gauss,transmission1,transmission2"},
                          Expect{"correlate-sweep", "corr_sweep.csv", "b_gauss,g2_zero"},
                          Expect{"waveforms", "waveforms.csv", "t_s,dI1,dI2"},
                          Expect{"phase-lock", "theta.csv", "t_s,theta_rad"}}) {
    CAPTURE(e.sub);
    const auto out = tmp.path / e.sub;
    REQUIRE(run(e.sub, cfg, out) == cli::kOk);
    const std::string text = slurp(out / e.file);
    CHECK(text.rfind("# config_path: " + cfg.string() + "\n", 0) == 0);
    CHECK(text.find("\n# tool_version: 0.1.0\n") != std::string::npos);
    CHECK(text.find(std::string("\n") + e.header + "\n") != std::string::npos);
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(summary["manifest"]["subcommand"] == e.sub);
    CHECK(summary["manifest"]["seed"] == 1);
    CHECK(summary["manifest"]["timestamp"] == "2000-01-01T00:00:00Z");
    for (const auto& entry : fs::directory_iterator(out)) {
      CHECK(entry.path().filename().string().front() != '.');
    }
  }
  const auto eit = rows(tmp.path / "eit-sweep" / "eit_sweep.csv");
  REQUIRE(eit.size() == 5);
  CHECK(eit[2].rfind("0,", 0) == 0);
  const auto s = nlohmann::json::parse(slurp(tmp.path / "eit-sweep" / "summary.json"));
  CHECK(s["peak_b_gauss"] == 0.0);
  const auto cs = nlohmann::json::parse(slurp(tmp.path / "correlate-sweep" / "summary.json"));
  CHECK(cs["sign_flip"]["negative_side"] == true);
  CHECK(cs["sign_flip"]["positive_side"] == true);
  CHECK(cs["corr_fwhm_gauss"].get<double>() < cs["eit_fwhm_gauss"].get<double>());
}

TEST_CASE("numbers carry 17 significant digits") {
  TempDir tmp;
  const auto cfg = tmp.path / "c.cfg";
  write(cfg, kSmall);
  REQUIRE(run("eit-sweep", cfg, tmp.path) == 0);
  const auto rs = rows(tmp.path / "eit_sweep.csv");
  const auto t1 = rs[1].substr(rs[1].find(',') + 1, rs[1].rfind(',') - rs[1].find(',') - 1);
  const double v = std::stod(t1);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  CHECK(t1 == buf);
}

TEST_CASE("re-analysis of emitted waveforms is bit-identical") {
  TempDir tmp;
  const auto cfg = tmp.path / "c.cfg";
  write(cfg, kSmall);
  REQUIRE(run("waveforms", cfg, tmp.path / "w") == 0);
  REQUIRE(run("analyze", cfg, tmp.path / "a", (tmp.path / "w" / "waveforms.csv").string()) == 0);
  auto w = nlohmann::json::parse(slurp(tmp.path / "w" / "summary.json"));
  auto a = nlohmann::json::parse(slurp(tmp.path / "a" / "summary.json"));
  for (const char* key : {"samples", "dt_s", "g2_zero", "peak", "median_frequency_hz"}) {
    CAPTURE(key);
    CHECK(w[key] == a[key]);
  }
  CHECK(rows(tmp.path / "w" / "g2_curve.csv") == rows(tmp.path / "a" / "g2_curve.csv"));
}

TEST_CASE("analyze matches the library on an external two-column file") {
  TempDir tmp;
  const auto cfg = tmp.path / "c.cfg";
  write(cfg, "sample_dt_s = 1e-9\nmax_lag_s = 2e-8\n");
  std::ostringstream csv;
  csv << "ch1,ch2\n";
  std::vector<double> x, y;
  for (int i = 0; i < 400; ++i) {
    x.push_back(std::sin(0.1 * i) + 0.01 * (i % 7));
    y.push_back(std::cos(0.1 * i + 0.3) + 5.0);
    char line[80];
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", x.back(), y.back());
    csv << line;
  }
  write(tmp.path / "ext.csv", csv.str());
  REQUIRE(run("analyze", cfg, tmp.path / "a", (tmp.path / "ext.csv").string()) == 0);

  const auto s1 = IntensitySeries::from_fluctuations(1e-9, x);
  const auto s2 = IntensitySeries::from_fluctuations(1e-9, y);
  const auto curve = cross_correlation(s1, s2, 2e-8);
  const auto got = rows(tmp.path / "a" / "g2_curve.csv");
  REQUIRE(got.size() == curve.values.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    const double v = std::stod(got[i].substr(got[i].find(',') + 1));
    CHECK(v == curve.values[i]);
  }
}

TEST_CASE("re-runs are byte-identical, threads do not matter") {
  TempDir tmp;
  const auto cfg = tmp.path / "c.cfg";
  write(cfg, kSmall);
  REQUIRE(run("correlate-sweep", cfg, tmp.path / "x", {}, 1) == 0);
  REQUIRE(run("correlate-sweep", cfg, tmp.path / "x2", {}, 1) == 0);
  REQUIRE(run("correlate-sweep", cfg, tmp.path / "x", {}, 4) == 0);
  // output_dir is part of the manifest, so compare the rerun in place.
  CHECK(rows(tmp.path / "x" / "corr_sweep.csv") == rows(tmp.path / "x2" / "corr_sweep.csv"));
}

TEST_CASE("exit codes and cleanup") {
  TempDir tmp;
  const auto bad = tmp.path / "bad.cfg";
  write(bad, "gamma_cb_mhz = -1\n");
  CHECK(run("eit-sweep", bad, tmp.path / "o1") == cli::kConfigError);
  CHECK_FALSE(fs::exists(tmp.path / "o1"));
  CHECK(run("nonsense", {}, tmp.path / "o2") == cli::kConfigError);
  CHECK(run("analyze", {}, tmp.path / "o3") == cli::kConfigError);
  CHECK(run("eit-sweep", tmp.path / "missing.cfg", tmp.path / "o4") == cli::kConfigError);

  const auto boom = tmp.path / "boom.cfg";
  write(boom, "eta_b_rad_per_s_m = 1e308\neta_c_rad_per_s_m = 1e308\nn_slabs = 1\n"
              "b_grid_gauss = [0]\n");
  CHECK(run("eit-sweep", boom, tmp.path / "o5") == cli::kNumericalError);
  CHECK_FALSE(fs::exists(tmp.path / "o5"));
}

TEST_CASE("waveform reader") {
  TempDir tmp;
  write(tmp.path / "three.csv", "# note\nt,a,b\n0,1,2\n0.5,3,4\n1,5,6\n");
  const auto t = cli::read_waveform_csv(tmp.path / "three.csv");
  REQUIRE(t.dt.has_value());
  CHECK(*t.dt == 0.5);
  CHECK(t.beam2 == std::vector<double>{2, 4, 6});
  write(tmp.path / "bad.csv", "a,b\n1,2\n3\n");
  CHECK_THROWS(cli::read_waveform_csv(tmp.path / "bad.csv"));
}

}  // TEST_SUITE
