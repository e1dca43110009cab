#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "sdol/constants.hpp"

using namespace sdol;

namespace {

// Hand values from the exact SI Planck constant (not the hbar stored in the
// library) and the atomic mass of 87Rb.
constexpr double planck = 6.62607015e-34;
constexpr double rb87_mass_kg = 86.909180520 * 1.66053906660e-27;
constexpr double lambda_l = 795.456e-9;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("recoil energy matches a hand calculation from h") {
  const double hand = planck * planck / (2.0 * rb87_mass_kg * lambda_l * lambda_l);
  CHECK(hand == doctest::Approx(2.40400e-30).epsilon(1e-5));
  CHECK(rel(recoil_energy(lambda_l, rb87_mass_kg), hand) < 1e-8);
}

TEST_CASE("recoil energy scaling laws") {
  const double e = recoil_energy(lambda_l, rb87_mass_kg);
  CHECK(rel(recoil_energy(2 * lambda_l, rb87_mass_kg), e / 4) < 1e-14);
  CHECK(rel(recoil_energy(lambda_l, 2 * rb87_mass_kg), e / 2) < 1e-14);
  CHECK_THROWS(recoil_energy(-1.0, rb87_mass_kg));
}

TEST_CASE("Zeeman energy per mG in recoil units") {
  const auto atom = AtomSpec::rubidium87();
  const UnitSystem units(atom, lambda_l);
  // g mu_B * 1e-7 T, mu_B from an independent lookup (9.274 010 0783e-24 J/T).
  const double hand = 0.5 * 9.2740100783e-24 * 1e-7 / (planck * planck / (2.0 * rb87_mass_kg * lambda_l * lambda_l));
  CHECK(hand == doctest::Approx(0.193).epsilon(2e-3));
  CHECK(rel(zeeman_energy_per_mG(atom, units), hand) < 1e-8);

  auto no_moment = atom;
  no_moment.g_factor = 0;
  CHECK(zeeman_energy_per_mG(no_moment, units) == 0.0);
}

TEST_CASE("contact couplings") {
  const auto atom = AtomSpec::rubidium87();
  const UnitSystem units(atom, lambda_l);
  const auto c = contact_couplings(atom, units);

  // 4 pi hbar^2 (a0 + 2 a2) / (3 m), divided by lambda_l for the 2D
  // reduction and expressed in E_rec lambda_l^2.
  const double hbar = planck / (2.0 * M_PI);
  const double e_rec = planck * planck / (2.0 * rb87_mass_kg * lambda_l * lambda_l);
  const double hand_c0 =
      4.0 * M_PI * hbar * hbar / rb87_mass_kg * (5.387e-9 + 2.0 * 5.313e-9) / 3.0 / (e_rec * std::pow(lambda_l, 3));
  CHECK(rel(c.c0_2d, hand_c0) < 1e-8);
  CHECK(c.c2_2d < 0);
  CHECK(rel(c.c2_2d / c.c0_2d, (atom.a2 - atom.a0) / (atom.a0 + 2 * atom.a2)) < 1e-13);

  auto equal = atom;
  equal.a2 = equal.a0;
  CHECK(contact_couplings(equal, units).c2_2d == 0.0);
}

TEST_CASE("unit conversions round-trip") {
  const UnitSystem units(AtomSpec::rubidium87(), lambda_l);
  for (double v : {1e-35, 3.7e-30, 2.2e-27}) CHECK(rel(units.to_si_energy(units.to_dimensionless_energy(v)), v) < 1e-12);
  for (double v : {0.013, 1.0, 41.5}) {
    CHECK(rel(units.to_dimensionless_energy(units.to_si_energy(v)), v) < 1e-12);
    CHECK(rel(units.to_dimensionless_length(units.to_si_length(v)), v) < 1e-12);
  }
}

TEST_CASE("laser angular frequency") {
  CHECK(angular_frequency(lambda_l) == doctest::Approx(2.36801e15).epsilon(1e-5));
  CHECK_THROWS(angular_frequency(0.0));
}

TEST_CASE("atom parameter invariants") {
  const auto atom = AtomSpec::rubidium87();
  CHECK(atom.nuclear_spin == 1.5);
  CHECK(atom.g_factor == 0.5);
  CHECK(atom.a2 < atom.a0);
  CHECK(atom.omega_half < atom.omega_threehalf);
  CHECK_NOTHROW(atom.validate());
  auto bad = atom;
  bad.mass = -1;
  CHECK_THROWS(bad.validate());
}
