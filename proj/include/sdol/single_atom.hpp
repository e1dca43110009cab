#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sdol/lattice_field.hpp"

/// One atom in a lattice site.
///
/// In the isotropic approximation the total angular momentum projection
/// zeta = m_F + m_l is conserved, and writing
///   Psi(r, phi) = e^{i zeta phi} sum_k g_k(r) chi_k(phi)
/// reduces the problem to three coupled radial equations per zeta. Solved on a
/// staggered grid r_i = (i + 1/2) h with the banded LAPACK eigensolver. A 2D
/// spectral discretisation of the full hexagonal field serves as an independent
/// check.
namespace sdol {

class EigensolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RadialGrid {
  double r_max = 0.5;  // lambda_l
  int n_points = 256;

  double spacing() const { return r_max / n_points; }
  double radius(int i) const { return (i + 0.5) * spacing(); }
  void validate() const;
};

struct ZetaSector {
  int zeta = 0;
  double b_ext_mG = 0;
};

/// Scalar potential and radial fictitious field sampled on the radial grid.
struct RadialPotentials {
  std::vector<double> V;
  std::vector<double> B;

  static RadialPotentials isotropic(const RadialGrid& grid, const LightShift& shift);
  /// V = curvature * r^2, B = 0.
  static RadialPotentials harmonic(const RadialGrid& grid, double curvature);
};

/// Real symmetric banded matrix with channels interleaved: row 3*i + c holds
/// channel c (chi_{+1}, chi_0, chi_{-1}) at radius r_i. Half-bandwidth 3.
class BandedMatrix {
 public:
  static constexpr int half_bandwidth = 3;

  explicit BandedMatrix(int dim);
  int dim() const { return dim_; }
  double& at(int row, int col);
  double operator()(int row, int col) const;
  /// Largest |A(i,j) - A(j,i)| over the band.
  double max_asymmetry() const;
  /// LAPACK upper band storage, column-major, leading dimension kd + 1.
  std::vector<double> upper_band_storage() const;
  Eigen::MatrixXd dense() const;

 private:
  int dim_;
  std::vector<double> full_;  // (2 kd + 1) x dim, full_[(row - col + kd) + (2kd+1) * col]
};

/// Centrifugal coupling matrix (zeta - F_z^chi)^2 in the chi basis, the
/// coefficient of kinetic_prefactor / r^2 acting on g(r).
Eigen::Matrix3d centrifugal_matrix(int zeta);

/// Discretised radial Hamiltonian in recoil units. The unknowns are
/// u_c(r_i) = sqrt(r_i) g_c(r_i); the kinetic part is the conservative
/// finite-volume form of -(1/r) d/dr r d/dr, which in the u variables is
/// -d^2/dr^2 - 1/(4 r^2). Together with centrifugal_matrix this gives the
/// coupled equations with the 1/8, 3/8, 1/4 and zeta/sqrt2 coefficients.
BandedMatrix build_radial_hamiltonian(const ZetaSector& sector, const RadialGrid& grid,
                                      const RadialPotentials& potentials, double zeeman_per_mG);

struct SpectrumResult {
  ZetaSector sector;
  RadialGrid grid;
  std::vector<double> eigenvalues;  // ascending, recoil units
  /// Column k is eigenvector k in interleaved layout, normalised so that
  /// sum_c int |u_c|^2 dr = 1.
  Eigen::MatrixXd eigenvectors;

  /// Oscillator label n = |zeta| + 2k of the k-th level in this sector.
  int principal(int k) const;
  double channel(int level, int i, int c) const { return eigenvectors(3 * i + c, level); }
  /// Population of each m_F component (+1, 0, -1) of a level.
  std::array<double, 3> mf_populations(int level) const;
};

SpectrumResult solve_sector(const ZetaSector& sector, const RadialGrid& grid, const RadialPotentials& potentials,
                            double zeeman_per_mG, int n_levels);

struct LabelledLevel {
  int zeta = 0;
  int n = 0;
  double energy = 0;
};

/// All levels of the listed sectors at one field, sorted by energy.
std::vector<LabelledLevel> level_diagram(double b_ext_mG, const std::vector<int>& zetas, const RadialGrid& grid,
                                         const RadialPotentials& potentials, double zeeman_per_mG,
                                         int levels_per_sector);

struct CrossingSearch {
  bool found = false;
  double b_ext_mG = 0;
};

/// Field in [b_lo, b_hi] where the lowest zeta=0 and zeta=other levels cross,
/// located by bisection on their energy difference.
CrossingSearch ground_crossing_field(int other_zeta, double b_lo, double b_hi, const RadialGrid& grid,
                                     const RadialPotentials& potentials, double zeeman_per_mG,
                                     double tolerance_mG = 1e-3);

struct CartesianOracleOptions {
  int block = 10;
  int max_iterations = 800;
  double tolerance = 1e-9;
};

struct CartesianSpectrum {
  std::vector<double> eigenvalues;
  int iterations = 0;
  bool converged = false;
};

/// Lowest eigenvalues of the full 2D three-component Hamiltonian
///   -kinetic Laplacian + V - B_fic.F - b F_z
/// with spectral kinetic energy on the maps' periodic grid.
CartesianSpectrum cartesian_oracle(double b_ext_mG, const FieldMaps& maps, double zeeman_per_mG, int n_levels,
                                   const CartesianOracleOptions& options = {});

struct IntensityGap {
  double intensity_W_cm2 = 0;
  double gap = 0;  // E(zeta=0) - E(zeta=+1), lowest level of each
};

/// Light-shift strengths at a given intensity, for intensity scans.
using ShiftAtIntensity = std::function<LightShift(double intensity_W_cm2)>;

std::vector<IntensityGap> crossing_intensity_scan(double b_ext_mG, const std::vector<double>& intensities_W_cm2,
                                                  const ShiftAtIntensity& shift_at, const RadialGrid& grid,
                                                  double zeeman_per_mG);

/// Linear interpolation of the first sign change of the gap; NaN if none.
double crossing_intensity(const std::vector<IntensityGap>& scan);

}  // namespace sdol
