#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sdol/config.hpp"
#include "sdol/gpe.hpp"
#include "sdol/lattice_field.hpp"
#include "sdol/observables.hpp"
#include "sdol/polarizability.hpp"
#include "sdol/single_atom.hpp"

/// Text output. Every file opens with '#' header lines carrying the tool
/// version, the file kind and the hash of the fully resolved configuration.
namespace sdol {

inline constexpr const char* tool_version = "0.1.0";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using HeaderFields = std::vector<std::pair<std::string, std::string>>;

std::string file_header(const std::string& kind, const RunConfig& config, const HeaderFields& extra = {});

/// Creates the directory (and parents); throws IoError if that fails or the
/// path is not writable.
void ensure_output_dir(const std::filesystem::path& dir);

/// Writes `content` to `path`, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& content);

/// "x y V Bx By", one grid point per line, row-major.
std::string format_field_dump(const FieldMaps& maps, const RunConfig& config);

/// CSV "r,V,B" of the isotropic closed forms.
std::string format_radial_profile(const LightShift& shift, double r_max, int samples, const RunConfig& config);

/// CSV "omega_rad_s,wavelength_nm,alpha0_SI,alpha1_SI,ratio"; resonant points are skipped.
std::string format_polarizability_scan(const AtomSpec& atom, const RunConfig& config);

struct LevelRow {
  double b_ext_mG = 0;
  int zeta = 0;
  int n = 0;
  double energy = 0;
};

/// CSV "B_ext_mG,zeta,n,energy_recoil".
std::string format_levels(const std::vector<LevelRow>& rows, const RunConfig& config, const HeaderFields& extra = {});

/// CSV "intensity_W_cm2,B_ext_mG,gap_recoil" with the interpolated crossing in the header.
std::string format_intensity_scan(const std::vector<IntensityGap>& scan, double b_ext_mG, const RunConfig& config);

/// Components as "x y re_p1 im_p1 re_0 im_0 re_m1 im_m1" with the energy decomposition in the header.
std::string format_state_dump(const GroundStateReport& report, const RunConfig& config);

/// "x y Fx Fy Fz density".
std::string format_texture(const std::vector<TexturePoint>& texture, double b_ext_mG, const RunConfig& config);

/// Sweep table plus a trailing summary comment with B* and B*/max B_fic.
std::string format_sweep(const SweepResult& sweep, double b_fic_max, const RunConfig& config);

/// JSON summary of a ground-state run.
std::string format_ground_report(const GroundStateReport& report, const RunConfig& config);

}  // namespace sdol
