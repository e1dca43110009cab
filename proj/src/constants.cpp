#include "sdol/constants.hpp"

#include <stdexcept>
#include <string>

namespace sdol {

using std::numbers::pi;

double angular_frequency(double lambda) {
  if (!(lambda > 0)) throw std::domain_error("angular_frequency: wavelength must be positive");
  return 2.0 * pi * codata::speed_of_light / lambda;
}

AtomSpec AtomSpec::rubidium87() {
  const double ea = codata::elementary_charge * codata::bohr_radius;
  AtomSpec a;
  a.mass = rb87::mass_u * codata::atomic_mass_unit;
  a.nuclear_spin = rb87::nuclear_spin;
  a.g_factor = rb87::g_factor;
  a.a0 = rb87::a0_nm * 1e-9;
  a.a2 = rb87::a2_nm * 1e-9;
  a.d_half = rb87::d1_reduced_dipole_eab * ea;
  a.d_threehalf = rb87::d2_reduced_dipole_eab * ea;
  a.omega_half = angular_frequency(rb87::d1_wavelength_nm * 1e-9);
  a.omega_threehalf = angular_frequency(rb87::d2_wavelength_nm * 1e-9);
  return a;
}

void AtomSpec::validate() const {
  auto require_positive = [](double v, const char* name) {
    if (!(v > 0)) throw std::invalid_argument(std::string("AtomSpec: ") + name + " must be positive");
  };
  require_positive(mass, "mass");
  require_positive(nuclear_spin, "nuclear_spin");
  require_positive(a0, "a0");
  require_positive(a2, "a2");
  require_positive(omega_half, "omega_half");
  require_positive(omega_threehalf, "omega_threehalf");
  if (g_factor < 0) throw std::invalid_argument("AtomSpec: g_factor must be non-negative");
  if (d_half < 0 || d_threehalf < 0)
    throw std::invalid_argument("AtomSpec: reduced dipole elements must be non-negative");
  if (!(omega_half < omega_threehalf))
    throw std::invalid_argument("AtomSpec: D1 must lie below D2");
}

double recoil_energy(double lambda_l, double mass) {
  if (!(lambda_l > 0) || !(mass > 0))
    throw std::domain_error("recoil_energy: wavelength and mass must be positive");
  const double p = 2.0 * pi * codata::hbar / lambda_l;
  return p * p / (2.0 * mass);
}

UnitSystem::UnitSystem(const AtomSpec& atom, double lambda_l)
    : lambda_l_(lambda_l), recoil_energy_(sdol::recoil_energy(lambda_l, atom.mass)) {}

double zeeman_energy_per_mG(const AtomSpec& atom, const UnitSystem& units) {
  constexpr double one_milligauss = 1e-7;  // T
  return units.to_dimensionless_energy(atom.g_factor * codata::bohr_magneton * one_milligauss);
}

CouplingConstants contact_couplings(const AtomSpec& atom, const UnitSystem& units) {
  const double hbar2_over_m = codata::hbar * codata::hbar / atom.mass;
  const double c0 = 4.0 * pi * hbar2_over_m * (atom.a0 + 2.0 * atom.a2) / 3.0;
  const double c2 = 4.0 * pi * hbar2_over_m * (atom.a2 - atom.a0) / 3.0;
  // 3D couplings (J m^3) -> 2D (J m^2) -> E_rec lambda^2.
  const double lambda = units.lambda_l();
  const double scale = units.recoil_energy() * lambda * lambda * lambda;
  return {c0 / scale, c2 / scale};
}

}  // namespace sdol
