#pragma once

#include <numbers>

/// Physical constants, 87Rb data and the recoil-unit system.
///
/// Everything downstream of this header works in dimensionless units:
/// lengths in laser wavelengths, energies in recoil energies
/// E_rec = (2 pi hbar)^2 / (2 m lambda_l^2). SI values never leave this module.
namespace sdol {

namespace codata {
// CODATA 2018 recommended values.
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double speed_of_light = 299792458.0;      // m/s (exact)
inline constexpr double epsilon0 = 8.8541878128e-12;       // F/m
inline constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
inline constexpr double bohr_radius = 5.29177210903e-11;   // m
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J/T
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
}  // namespace codata

namespace rb87 {
// Atomic mass: Steck, "Rubidium 87 D Line Data" (rev. 2.2.1).
inline constexpr double mass_u = 86.909180520;
inline constexpr double nuclear_spin = 1.5;
inline constexpr double g_factor = 0.5;  // F = 1 hyperfine Lande factor magnitude
inline constexpr double a0_nm = 5.387;
inline constexpr double a2_nm = 5.313;
inline constexpr double d1_wavelength_nm = 794.979;
inline constexpr double d2_wavelength_nm = 780.241;
inline constexpr double d1_reduced_dipole_eab = 2.992;  // units of e a_B
inline constexpr double d2_reduced_dipole_eab = 4.227;
inline constexpr double laser_wavelength_nm = 795.456;
}  // namespace rb87

/// Kinetic prefactor hbar^2/(2m) in units of E_rec * lambda_l^2.
inline constexpr double kinetic_prefactor = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);

/// Angular frequency of light with vacuum wavelength `lambda` (m).
double angular_frequency(double lambda);

struct AtomSpec {
  double mass = 0;           // kg
  double nuclear_spin = 0;   // I
  double g_factor = 0;       // g
  double a0 = 0;             // F_tot = 0 scattering length, m
  double a2 = 0;             // F_tot = 2 scattering length, m
  double d_half = 0;         // <P1/2||d||S1/2>, C m
  double d_threehalf = 0;    // <P3/2||d||S1/2>, C m
  double omega_half = 0;     // D1 angular frequency, rad/s
  double omega_threehalf = 0;  // D2 angular frequency, rad/s

  static AtomSpec rubidium87();

  /// Throws std::invalid_argument if a physical field is nonpositive or the
  /// D lines are out of order.
  void validate() const;
};

double recoil_energy(double lambda_l, double mass);

/// Conversion between SI and the recoil-unit system of one laser wavelength.
class UnitSystem {
 public:
  UnitSystem(const AtomSpec& atom, double lambda_l);

  double lambda_l() const { return lambda_l_; }
  double recoil_energy() const { return recoil_energy_; }

  double to_dimensionless_energy(double joules) const { return joules / recoil_energy_; }
  double to_si_energy(double recoil) const { return recoil * recoil_energy_; }
  double to_dimensionless_length(double meters) const { return meters / lambda_l_; }
  double to_si_length(double lambdas) const { return lambdas * lambda_l_; }

 private:
  double lambda_l_;
  double recoil_energy_;
};

/// g mu_B (1 mG) / E_rec: Zeeman energy per unit m_F per milligauss.
double zeeman_energy_per_mG(const AtomSpec& atom, const UnitSystem& units);

struct CouplingConstants {
  double c0_2d = 0;  // spin-independent, E_rec lambda_l^2
  double c2_2d = 0;  // spin-dependent, E_rec lambda_l^2
};

/// Contact couplings reduced to 2D by dividing by one wavelength of vertical extent.
CouplingConstants contact_couplings(const AtomSpec& atom, const UnitSystem& units);

}  // namespace sdol
