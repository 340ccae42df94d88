#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "eitcorr/errors.hpp"
#include "eitcorr/scenarios.hpp"

using namespace eitcorr;

namespace {

// Short records keep the pipeline tests quick; statistics at 2 us are
// already well resolved for the 20 ns noise.
ExperimentConfig quick() {
  auto c = default_experiment();
  c.record_length = 2e-6;
  return c;
}

double g2_zero(const WaveformPair& w) {
  return correlation_at_lag(w.beam1.fluctuations, w.beam2.fluctuations, 0);
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("zeeman detuning") {
  const double two_pi = 2 * std::numbers::pi;
  CHECK(zeeman_detuning(0.0, 0.7) == 0.0);
  CHECK(zeeman_detuning(1.0, 0.7) == doctest::Approx(two_pi * 0.7e6).epsilon(1e-15));
  CHECK(zeeman_detuning(-0.47, 0.7) == doctest::Approx(-two_pi * 0.329e6).epsilon(1e-14));
}

TEST_CASE("field shifts split the ground levels symmetrically") {
  const auto c = default_experiment();
  const auto p = atom_at_field(c, 0.5);
  const double s = zeeman_detuning(0.5, c.zeeman_rate);
  CHECK(p.omega_cb - c.atom.omega_cb == doctest::Approx(s));
  CHECK(p.omega_ab - c.atom.omega_ab == doctest::Approx(0.5 * s));
  CHECK(p.omega_ac - c.atom.omega_ac == doctest::Approx(-0.5 * s));
}

TEST_CASE("linspace") {
  const auto g = linspace(-1, 1, 41);
  REQUIRE(g.size() == 41);
  CHECK(g.front() == -1.0);
  CHECK(g.back() == 1.0);
  CHECK(g[20] == 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == -g[g.size() - 1 - i]);
  CHECK(linspace(2, 3, 1) == std::vector<double>{2.0});
}

TEST_CASE("default experiment is valid and converged") {
  const auto c = default_experiment();
  CHECK(violations(c).empty());
  CHECK(c.samples() == 100000);
  CHECK_NOTHROW(verify_convergence(c));
}

TEST_CASE("EIT sweep structure") {
  const auto c = default_experiment();
  const auto s = eit_sweep(c);
  CHECK(s.peak_b == 0.0);
  CHECK(s.peak_transmission == doctest::Approx(0.63).epsilon(0.15 / 0.63));
  CHECK(single_beam_transmission(c) < 0.01);
  REQUIRE(s.fwhm.has_value());

  auto low = c;
  low.rabi_input /= std::sqrt(2.0);
  const auto sl = eit_sweep(low);
  REQUIRE(sl.fwhm.has_value());
  CHECK(*sl.fwhm < *s.fwhm);

  const auto again = eit_sweep(c);
  CHECK(again.transmission1 == s.transmission1);
  CHECK(*again.fwhm == *s.fwhm);
}

TEST_CASE("noiseless laser gives flat waveforms") {
  auto c = quick();
  c.noise.linewidth = 0.0;
  c.medium.n_slabs = 16;
  const auto w = synthesize_waveforms(c, -0.3);
  for (double v : w.beam1.fluctuations) CHECK(v == 0.0);
  for (double v : w.beam2.fluctuations) CHECK(v == 0.0);
  CHECK(w.beam1.mean > 0.0);
}

TEST_CASE("bunching at resonance, anti-bunching off resonance") {
  const auto c = quick();
  CHECK(g2_zero(synthesize_waveforms(c, 0.0)) > 0.8);
  CHECK(g2_zero(synthesize_waveforms(c, -0.4)) < -0.5);
}

TEST_CASE("waveform synthesis is seed-deterministic") {
  auto c = quick();
  c.medium.n_slabs = 16;
  const auto a = synthesize_waveforms(c, 0.2, 5);
  const auto b = synthesize_waveforms(c, 0.2, 5);
  const auto d = synthesize_waveforms(c, 0.2, 6);
  CHECK(a.beam1.fluctuations == b.beam1.fluctuations);
  CHECK(a.beam2.fluctuations == b.beam2.fluctuations);
  CHECK(a.beam1.fluctuations != d.beam1.fluctuations);
}

TEST_CASE("correlation is even in the field") {
  const auto c = default_experiment();
  for (double b : {0.2, 0.4, 0.7}) {
    const double plus = g2_zero(synthesize_waveforms(c, b, 100));
    const double minus = g2_zero(synthesize_waveforms(c, -b, 200));
    CHECK(std::abs(plus - minus) < 0.1);
  }
}

TEST_CASE("parallel sweep equals serial sweep") {
  auto c = quick();
  c.record_length = 1e-6;
  c.medium.n_slabs = 16;
  c.b_grid = linspace(-0.6, 0.6, 7);
  const auto serial = correlation_vs_field(c, 1);
  const auto parallel = correlation_vs_field(c, 3);
  CHECK(serial.g2_zero == parallel.g2_zero);
  CHECK(serial.transmission1 == parallel.transmission1);
  CHECK(serial.corr_fwhm == parallel.corr_fwhm);
  for (double g : serial.g2_zero) {
    CHECK(g <= 1.0);
    CHECK(g >= -1.0);
  }
}

TEST_CASE("transition summary") {
  SweepResult r;
  r.b_values = {-2, -1, 0, 1, 2};
  r.g2_zero = {0.1, -0.6, 0.9, -0.4, 0.2};
  const auto t = summarize_transition(r);
  CHECK(t.g2_at_zero == 0.9);
  CHECK(t.g2_min == -0.6);
  CHECK(t.b_at_min == -1);
  CHECK(t.sign_change_negative_side);
  CHECK(t.sign_change_positive_side);
  r.g2_zero = {0.1, 0.2, 0.9, -0.4, 0.2};
  CHECK_FALSE(summarize_transition(r).sign_change_negative_side);
}

TEST_CASE("failures name the field") {
  auto c = default_experiment();
  c.b_grid = {0.25};
  c.medium.eta_override = CouplingConstants{1e308, 1e308};
  c.medium.n_slabs = 1;
  try {
    eit_sweep(c);
    FAIL("expected a NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("b = 0.25") != std::string::npos);
  }
}

TEST_CASE("invalid experiments are rejected") {
  auto c = default_experiment();
  c.record_length = 1e-8;
  c.b_grid = {1.0, -1.0};
  c.rabi_input = 0.0;
  CHECK(violations(c).size() >= 3);
  CHECK_THROWS_AS(eit_sweep(c), std::invalid_argument);
}

}  // TEST_SUITE
