#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "sdol/constants.hpp"

/// Six-beam spin-dependent optical lattice: envelope, scalar light shift and
/// fictitious magnetic field, in recoil units with positions in laser wavelengths.
namespace sdol {

struct Vec2 {
  double x = 0;
  double y = 0;
};

using ComplexVec3 = std::array<std::complex<double>, 3>;
using Vec3 = std::array<double, 3>;

struct BeamConfig {
  double intensity = 0;  // W/m^2, per beam
  double lambda_l = 0;   // m

  static BeamConfig from_W_per_cm2(double intensity_W_cm2, double lambda_l);

  /// Squared field amplitude E_0^2 = 2 I / (c eps0), V^2/m^2.
  double field_amplitude_squared() const;
};

/// Beam wavevectors q_n = -2 pi (cos(n pi/3), sin(n pi/3)), n = 1..6, in 1/lambda_l.
std::array<Vec2, 6> beam_wavevectors();

/// Field envelope in units of E_0 at position r (units of lambda_l).
ComplexVec3 envelope(Vec2 r);

/// Strength of the two light-shift terms in recoil units.
///   V(r)        = -(scalar / 4) |e(r)|^2
///   g mu_B B(r) =  vector * (-i e* x e)
/// where e is the envelope in units of E_0.
struct LightShift {
  double scalar = 0;  // alpha0 E0^2 / E_rec
  double vector = 0;  // alpha1 E0^2 / (4 (2I+1) E_rec)

  static LightShift from_beams(const BeamConfig& beams, const AtomSpec& atom, const UnitSystem& units);

  /// Harmonic quantum hbar*omega of the isotropic well at the site centre, E_rec.
  double harmonic_quantum() const;
  /// Oscillator length of the same well, lambda_l.
  double harmonic_length() const;
};

/// The cross-product term i e* x e at r (real up to rounding, z component zero).
Vec3 spin_cross_term(Vec2 r);

double scalar_potential(Vec2 r, const LightShift& shift);

/// g mu_B B_fic at r in recoil units, oriented radially outward near the centre
/// for alpha1 > 0. Throws std::logic_error if the cross product carries an
/// imaginary residue above 1e-12 of its magnitude.
Vec3 fictitious_field(Vec2 r, const LightShift& shift);

struct RadialProfile {
  double V = 0;  // scalar potential
  double B = 0;  // radial component of g mu_B B_fic
};

/// Bessel-sum closed forms valid near the site centre.
RadialProfile isotropic_profiles(double r, const LightShift& shift);

struct FieldMaximum {
  double radius = 0;
  double value = 0;
};

/// Maximum of the isotropic radial field profile over the cell.
FieldMaximum isotropic_field_maximum(const LightShift& shift);

/// Square periodic box centred on the site. Sample points are cell-centred,
/// x_i = (i - (n-1)/2) h, so the point set is invariant under 90-degree rotation.
struct GridSpec {
  double side = 0;  // lambda_l
  int points = 0;

  double spacing() const { return side / points; }
  double coordinate(int i) const { return (i - 0.5 * (points - 1)) * spacing(); }
  std::size_t size() const { return static_cast<std::size_t>(points) * points; }
  void validate() const;
};

/// Inscribed radius of the hexagonal Wigner-Seitz cell, lambda_l.
double cell_inscribed_radius();

enum class FieldModel { hexagonal, isotropic };

std::string to_string(FieldModel model);
FieldModel field_model_from_string(const std::string& name);

/// Sampled V and in-plane B on a grid. Storage index is i * n + j with i the
/// x index and j the y index.
struct FieldMaps {
  GridSpec grid;
  FieldModel model = FieldModel::hexagonal;
  LightShift shift;
  std::vector<double> V;
  std::vector<double> Bx;
  std::vector<double> By;
  std::vector<std::string> warnings;

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * grid.points + j; }
};

FieldMaps render_field_maps(const GridSpec& grid, const LightShift& shift,
                            FieldModel model = FieldModel::hexagonal);

}  // namespace sdol
