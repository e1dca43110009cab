#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sdol/spinor_field.hpp"

/// Diagnostics of a condensate state: populations, spin and orbital angular
/// momentum, vortex windings and the local spin texture.
namespace sdol {

class UndefinedWindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (N_{+1}, N_0, N_{-1}).
std::array<double, 3> populations(const SpinorField& state);

struct AngularMomentum {
  double fz_mean = 0;                // per atom
  std::array<double, 3> lz{};        // <l_z> per atom of each component; 0 for an empty component
  double abs_lz_mean = 0;            // sum_c (N_c/N) |<l_z>_c|
  double zeta_measured = 0;          // fz_mean + sum_c (N_c/N) <l_z>_c
};

/// l_z = -i (x d/dy - y d/dx) about the site centre, with spectral derivatives.
AngularMomentum angular_momentum(const SpinorField& state, const SpectralGrid& spectral);
AngularMomentum angular_momentum(const SpinorField& state);

struct WindingOptions {
  double loop_radius = 0.05;  // lambda_l
  double threshold = 1e-6;    // minimum |psi| on the loop, relative to the component's peak
  int samples = 512;
};

/// Phase circulation of one component around a circle centred on the site,
/// sampled by bilinear interpolation. Throws UndefinedWindingError if the
/// amplitude drops below the threshold anywhere on the loop.
int winding_number(std::span<const std::complex<double>> component, const GridSpec& grid,
                   const WindingOptions& options = {});

struct TextureRegion {
  double x_min = 0, x_max = 0.077;
  double y_min = 0, y_max = 0.077;
};

struct TexturePoint {
  double x = 0, y = 0;
  double fx = 0, fy = 0, fz = 0;  // <F>/n, zero where the density vanishes
  double density = 0;
};

std::vector<TexturePoint> spin_texture(const SpinorField& state, const TextureRegion& region = {});

struct ObservableBundle {
  std::array<double, 3> populations{};
  double n_total = 0;
  AngularMomentum angular;
  std::array<std::optional<int>, 3> windings;
  /// Common value of winding + m_F over the populated components, if they agree.
  std::optional<int> zeta_from_windings;
  std::vector<TexturePoint> texture;
};

struct ObservableOptions {
  WindingOptions winding;
  TextureRegion texture;
  double populated_fraction = 1e-3;  // components below this share of N are ignored for zeta
};

ObservableBundle measure(const SpinorField& state, const SpectralGrid& spectral, const ObservableOptions& options = {});

}  // namespace sdol
