#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdol/constants.hpp"
#include "sdol/gpe.hpp"
#include "sdol/lattice_field.hpp"
#include "sdol/single_atom.hpp"

/// Run configuration: a flat key = value file with [sections].
///
///   [laser]
///   intensity_W_cm2 = 70
///   # comments start with '#' or ';'
///
/// Every key has a compiled-in default, so an empty file is a valid
/// configuration. Unknown sections or keys are errors.
namespace sdol {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // [atom]
  double mass_u = rb87::mass_u;
  double nuclear_spin = rb87::nuclear_spin;
  double g_factor = rb87::g_factor;
  double a0_nm = rb87::a0_nm;
  double a2_nm = rb87::a2_nm;
  double d1_wavelength_nm = rb87::d1_wavelength_nm;
  double d2_wavelength_nm = rb87::d2_wavelength_nm;
  double d1_dipole_eab = rb87::d1_reduced_dipole_eab;
  double d2_dipole_eab = rb87::d2_reduced_dipole_eab;

  // [laser]
  double intensity_W_cm2 = 70;
  double wavelength_nm = rb87::laser_wavelength_nm;

  // [grid]
  double side = 0.7;
  int points = 256;
  std::string field_model = "isotropic";

  // [radial]
  double r_max = 0.5;
  int radial_points = 256;
  int levels = 5;
  std::vector<int> zetas{-3, -2, -1, 0, 1, 2, 3};

  // [field]  b_list, when non-empty, replaces the start/stop/step range
  double b_start_mG = 0;
  double b_stop_mG = 100;
  double b_step_mG = 10;
  std::vector<double> b_list_mG;

  // [system]
  double n_atoms = 100;
  bool interactions = true;

  // [solver]
  double dtau = 1e-4;
  double min_dtau = 1e-6;
  long max_iters = 400000;
  double energy_tol = 1e-10;
  int check_interval = 100;
  double residual_tol = 1e-6;
  double noise_amplitude = 0.02;
  double sigma = 0;

  // [sweep]
  double refine_tol_mG = 0.5;

  // [polarizability]
  double scan_min_nm = 770;
  double scan_max_nm = 830;
  int scan_points = 601;

  // [run]
  std::string output_dir = "out";
  int threads = 1;
  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;

  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);
  std::string serialize() const;

  /// SDOL_OUTPUT_DIR and SDOL_THREADS, when set.
  void apply_environment();

  /// Throws ConfigError on a nonpositive physical field, a bad grid or a
  /// non-monotone field range.
  void validate() const;

  /// FNV-1a hash of serialize(), as 16 hex digits.
  std::string hash() const;

  AtomSpec atom() const;
  UnitSystem units() const;
  BeamConfig beams() const;
  LightShift light_shift() const;
  /// Light shift at another intensity with everything else unchanged.
  LightShift light_shift_at(double intensity_W_cm2) const;
  GridSpec grid() const;
  FieldModel model() const;
  RadialGrid radial_grid() const;
  CouplingConstants couplings() const;
  SolverParams solver() const;
  std::vector<double> b_values() const;
};

}  // namespace sdol
