#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

/// Spin-1 algebra in the m_F = (+1, 0, -1) basis.
namespace sdol::spin1 {

using Spinor = std::array<std::complex<double>, 3>;
using Vec3 = std::array<double, 3>;

enum class Axis { x, y, z };

struct SpinMatrices {
  Eigen::Matrix3cd fx;
  Eigen::Matrix3cd fy;
  Eigen::Matrix3cd fz;
};

const SpinMatrices& spin_matrices();

Spinor apply_spin_matrix(Axis which, const Spinor& psi);

/// Rows are chi_{+1}, chi_0, chi_{-1}: eigenvectors of F_r = cos(phi) F_x + sin(phi) F_y
/// with eigenvalues +1, 0, -1, written in the m_F basis.
Eigen::Matrix3cd chi_basis(double phi);

/// Coefficients of psi along chi_{+1}, chi_0, chi_{-1}: c_k = chi_k^dagger psi.
Spinor to_chi_basis(const Spinor& psi, double phi);
/// Inverse of to_chi_basis: psi = sum_k c_k chi_k.
Spinor from_chi_basis(const Spinor& coeffs, double phi);

/// F_z expressed in the chi basis. The phases of the chi vectors cancel, so the
/// result is real and independent of phi.
Eigen::Matrix3d fz_in_chi_basis();

/// (psi^dag F_x psi, psi^dag F_y psi, psi^dag F_z psi); unnormalised.
Vec3 local_spin_expectation(const Spinor& psi);

/// exp(-tau h.F) psi for a real field h, using (n.F)^3 = n.F for spin 1.
Spinor apply_spin_exponential(const Vec3& h, double tau, const Spinor& psi);

}  // namespace sdol::spin1
