#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "eitcorr/errors.hpp"
#include "eitcorr/propagation.hpp"
#include "eitcorr/scenarios.hpp"

using namespace eitcorr;

namespace {

LambdaAtomParams unit_atom() {
  LambdaAtomParams p;
  p.gamma_ab = 1.0;
  p.gamma_ca = 1.0;
  p.gamma_cb = 0.01;
  return p;
}

MediumConfig eta_medium(double eta, double length, int slabs) {
  MediumConfig m;
  m.length = length;
  m.n_slabs = slabs;
  m.eta_override = CouplingConstants{eta, eta};
  return m;
}

}  // namespace

TEST_SUITE("propagation") {

TEST_CASE("coupling constants") {
  MediumConfig m;
  m.dipole_b = 2.537e-29;
  m.dipole_c = 2.537e-29;
  m.density = 0.0;
  auto eta = coupling_constants(m, m.carrier);
  CHECK(eta.eta_b == 0.0);
  CHECK(eta.eta_c == 0.0);

  m.density = 1e18;
  eta = coupling_constants(m, 2.0 * 3.14159265358979323846 * 377.107463380e12);
  // nu N p / (2 eps0 c), evaluated by hand.
  CHECK(eta.eta_b == doctest::Approx(11323118.041164733).epsilon(1e-13));
  CHECK(eta.eta_c == eta.eta_b);

  m.eta_override = CouplingConstants{5.0, 5.0};
  eta = coupling_constants(m, 123.0);
  CHECK(eta.eta_b == 5.0);
  CHECK(eta.eta_c == 5.0);
  CHECK_THROWS_AS(coupling_constants(m, std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
}

TEST_CASE("zero coupling step is the identity") {
  const FieldState in{cplx(0.1, 0.02), cplx(0.05, -0.03), 0.0};
  const FieldState out = step(in, unit_atom(), {0.0, 0.0}, 0.1);
  CHECK(out.omega1 == in.omega1);
  CHECK(out.omega2 == in.omega2);
}

TEST_CASE("one step against the Euler reference") {
  const FieldState in{0.1, 0.1, 0.0};
  const FieldState out = step(in, unit_atom(), {1.0, 1.0}, 0.1);
  // Euler: 0.1 - 0.1 * 1 * (1/60) = 0.098333...
  const double euler = 0.1 - 0.1 / 60.0;
  CHECK(std::abs(out.omega1.imag()) < 1e-15);
  CHECK(out.omega1.real() == doctest::Approx(euler).epsilon(1e-4));
  CHECK(std::abs(out.omega1.real() - 0.098333) < 1e-5);
  const auto [t1, t2] = transmission(in, out);
  CHECK(t1 == doctest::Approx(0.96694).epsilon(1e-4));
  CHECK(t2 == doctest::Approx(t1).epsilon(1e-12));
}

TEST_CASE("transmission") {
  const FieldState in{cplx(0.3, 0.1), cplx(0.2, 0.0), 0.0};
  auto [a, b] = transmission(in, in);
  CHECK(a == 1.0);
  CHECK(b == 1.0);
  const FieldState half{in.omega1 * 0.5, in.omega2 * 0.5, 0.0};
  std::tie(a, b) = transmission(in, half);
  CHECK(a == 0.25);
  CHECK(b == 0.25);
  CHECK_THROWS_AS(transmission({0.0, 0.1, 0.0}, in), std::invalid_argument);
}

TEST_CASE("Beer's law with one beam") {
  auto p = unit_atom();
  p.gamma_ab = p.gamma_ca = 2.0;
  const double eta = 3.0, length = 1.0;
  const auto r = propagate({0.01, 0.0, 0.0}, p, eta_medium(eta, length, 200));
  const double k = eta * p.n_ba() / p.gamma_ab;
  const std::size_t mid = r.profile.z_grid.size() / 2;
  CHECK(r.profile.z_grid[mid] == doctest::Approx(0.5 * length).epsilon(1e-14));
  CHECK(std::abs(r.profile.omega1_of_z[mid]) ==
        doctest::Approx(0.01 * std::exp(-k * 0.5 * length)).epsilon(1e-10));
  CHECK(std::abs(r.fields_out.omega1) == doctest::Approx(0.01 * std::exp(-k * length)).epsilon(1e-10));
  CHECK(r.fields_out.omega2 == cplx(0.0, 0.0));
}

TEST_CASE("vacuum cell is the identity bit for bit") {
  MediumConfig m;
  m.density = 0.0;
  m.dipole_b = m.dipole_c = 1e-29;
  const FieldState in{cplx(0.3, 0.1), cplx(-0.2, 0.05), 0.0};
  const auto r = propagate(in, unit_atom(), m);
  CHECK(r.fields_out.omega1 == in.omega1);
  CHECK(r.fields_out.omega2 == in.omega2);
}

TEST_CASE("profile invariants") {
  const FieldState in{0.1, 0.05, 0.0};
  const auto r = propagate(in, unit_atom(), eta_medium(1.0, 0.3, 17));
  const auto& z = r.profile.z_grid;
  REQUIRE(z.size() == 18);
  CHECK(z.front() == 0.0);
  CHECK(z.back() == 0.3);
  for (std::size_t i = 1; i < z.size(); ++i) CHECK(z[i] > z[i - 1]);
  CHECK(r.profile.omega1_of_z.front() == in.omega1);
  CHECK(r.profile.omega2_of_z.front() == in.omega2);
  CHECK(r.profile.omega1_of_z.back() == r.fields_out.omega1);
}

// The ground coherence expression encodes n_b = n_c; with unequal ground
// populations it can move power between beams faster than it is absorbed.
TEST_CASE("total power is passive for equal couplings") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    LambdaAtomParams p;
    p.gamma_ab = 0.5 + u(rng);
    p.gamma_ca = 0.5 + u(rng);
    p.gamma_cb = 0.001 + 0.05 * u(rng);
    p.omega_ab = 4 * u(rng) - 2;
    p.omega_ac = 4 * u(rng) - 2;
    p.omega_cb = 0.4 * u(rng) - 0.2;
    const FieldState in{cplx(u(rng), u(rng) - 0.5), cplx(u(rng), u(rng) - 0.5), 0.0};
    const auto out = propagate(in, p, eta_medium(0.5 + 3 * u(rng), 1.0, 100)).fields_out;
    CHECK(std::norm(out.omega1) + std::norm(out.omega2) <=
          (std::norm(in.omega1) + std::norm(in.omega2)) * (1 + 1e-12));
  }
}

TEST_CASE("transmission peaks at two-photon resonance") {
  const auto c = default_experiment();
  const FieldState in{c.rabi_input, c.rabi_input, 0.0};
  const auto t0 = transmission(in, propagate(in, atom_at_field(c, 0.0), c.medium).fields_out);
  for (double b : {-0.8, -0.3, -0.05, 0.02, 0.2, 0.6}) {
    const auto t = transmission(in, propagate(in, atom_at_field(c, b), c.medium).fields_out);
    CHECK(t0.first >= t.first);
    CHECK(t0.second >= t.second);
  }
}

TEST_CASE("grid convergence self-check") {
  const auto c = default_experiment();
  const FieldState in{c.rabi_input, c.rabi_input, 0.0};
  CHECK_NOTHROW(check_convergence(in, c.atom, c.medium, 1e-6));
  // Near two-photon resonance the medium is almost transparent, so the
  // coarse grid is probed in the absorbing wing.
  auto coarse = c.medium;
  coarse.n_slabs = 1;
  CHECK_THROWS_AS(check_convergence(in, atom_at_field(c, 1.0), coarse, 1e-6), NumericalError);
}

TEST_CASE("runaway growth is reported") {
  const FieldState in{0.1, 0.1, 0.0};
  CHECK_THROWS_AS(step(in, unit_atom(), {1e308, 1e308}, 1e10), NumericalError);
}

TEST_CASE("literal coherence flag changes the second beam") {
  auto p = unit_atom();
  p.omega_ab = 0.3;
  p.omega_ac = 0.3;
  const FieldState in{0.1, 0.1, 0.0};
  const auto m = eta_medium(1.0, 1.0, 50);
  const auto a = propagate(in, p, m).fields_out;
  const auto b = propagate(in, p, m, {.literal_rho_ca = true}).fields_out;
  CHECK(std::abs(a.omega2 - b.omega2) > 1e-6);
}

TEST_CASE("unfiltered series reproduces per-sample propagation exactly") {
  auto c = default_experiment();
  c.medium.n_slabs = 20;
  const auto p = atom_at_field(c, -0.3);
  std::vector<double> nu{0.0, 2e6, -5e6, 1.3e7, -2.2e7};
  const auto s = propagate_series(c.rabi_input, c.rabi_input, nu, 1e-10, p, c.medium);
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const auto r = propagate({c.rabi_input, c.rabi_input, nu[i]}, p, c.medium).fields_out;
    CHECK(s.intensity1[i] == std::norm(r.omega1));
    CHECK(s.intensity2[i] == std::norm(r.omega2));
  }
}

TEST_CASE("filter on a constant carrier changes nothing") {
  auto c = default_experiment();
  c.medium.n_slabs = 10;
  const auto p = atom_at_field(c, 0.2);
  std::vector<double> nu(16, 3e6);
  const auto off = propagate_series(c.rabi_input, c.rabi_input, nu, 1e-10, p, c.medium);
  const auto on = propagate_series(c.rabi_input, c.rabi_input, nu, 1e-10, p, c.medium,
                                   {GroundCoherenceFilter::Mode::power_broadened, 0.0});
  CHECK(off.intensity1 == on.intensity1);
  CHECK(off.intensity2 == on.intensity2);
}

TEST_CASE("slow filter suppresses the two-photon response to fast noise") {
  // With a very slow ground coherence the medium sees only the average
  // carrier, so a sample far off resonance moves toward the mean response.
  auto c = default_experiment();
  c.medium.n_slabs = 10;
  const auto p = atom_at_field(c, 0.0);
  std::vector<double> nu(200, 0.0);
  for (std::size_t i = 0; i < nu.size(); i += 2) nu[i] = 2e7;  // rho_cb is even in nu at b = 0
  const auto off = propagate_series(c.rabi_input, c.rabi_input, nu, 1e-10, p, c.medium);
  const auto slow = propagate_series(c.rabi_input, c.rabi_input, nu, 1e-10, p, c.medium,
                                     {GroundCoherenceFilter::Mode::fixed, 1e3});
  CHECK(off.intensity1 != slow.intensity1);
  CHECK_THROWS_AS(propagate_series(c.rabi_input, c.rabi_input, nu, 1e-10, p, c.medium,
                                   {GroundCoherenceFilter::Mode::fixed, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("medium validation") {
  MediumConfig m;
  m.length = -1;
  m.n_slabs = 0;
  CHECK(violations(m).size() >= 3);  // length, slabs, dipoles
  CHECK_THROWS_AS(validate(m), std::invalid_argument);
}

}  // TEST_SUITE
