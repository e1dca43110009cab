#include "sdol/spin1.hpp"

#include <cmath>
#include <numbers>

namespace sdol::spin1 {

namespace {
constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
const std::complex<double> I(0.0, 1.0);

// n.F psi for a unit (or any real) vector n.
Spinor apply_nf(const Vec3& n, const Spinor& psi) {
  const std::complex<double> minus(n[0], -n[1]);  // n_x - i n_y
  const std::complex<double> plus(n[0], n[1]);
  return {n[2] * psi[0] + inv_sqrt2 * minus * psi[1],
          inv_sqrt2 * (plus * psi[0] + minus * psi[2]),
          inv_sqrt2 * plus * psi[1] - n[2] * psi[2]};
}
}  // namespace

const SpinMatrices& spin_matrices() {
  static const SpinMatrices m = [] {
    SpinMatrices s;
    const double a = inv_sqrt2;
    s.fx << 0, a, 0,
            a, 0, a,
            0, a, 0;
    s.fy << 0, -I * a, 0,
            I * a, 0, -I * a,
            0, I * a, 0;
    s.fz << 1, 0, 0,
            0, 0, 0,
            0, 0, -1;
    return s;
  }();
  return m;
}

Spinor apply_spin_matrix(Axis which, const Spinor& psi) {
  switch (which) {
    case Axis::x: return apply_nf({1, 0, 0}, psi);
    case Axis::y: return apply_nf({0, 1, 0}, psi);
    case Axis::z: return apply_nf({0, 0, 1}, psi);
  }
  return psi;
}

Eigen::Matrix3cd chi_basis(double phi) {
  const auto em = std::polar(1.0, -phi);
  const auto ep = std::polar(1.0, phi);
  const double s2 = std::numbers::sqrt2;
  Eigen::Matrix3cd u;
  u << 0.5 * em, 0.5 * s2, 0.5 * ep,
       inv_sqrt2 * em, 0.0, -inv_sqrt2 * ep,
       0.5 * em, -0.5 * s2, 0.5 * ep;
  return u;
}

Spinor to_chi_basis(const Spinor& psi, double phi) {
  const Eigen::Vector3cd v(psi[0], psi[1], psi[2]);
  const Eigen::Vector3cd c = chi_basis(phi).conjugate() * v;
  return {c[0], c[1], c[2]};
}

Spinor from_chi_basis(const Spinor& coeffs, double phi) {
  const Eigen::Vector3cd c(coeffs[0], coeffs[1], coeffs[2]);
  const Eigen::Vector3cd v = chi_basis(phi).transpose() * c;
  return {v[0], v[1], v[2]};
}

Eigen::Matrix3d fz_in_chi_basis() {
  const Eigen::Matrix3cd u = chi_basis(0.0);
  return (u.conjugate() * spin_matrices().fz * u.transpose()).real();
}

Vec3 local_spin_expectation(const Spinor& psi) {
  // psi^dag F_+ psi with F_+ = F_x + i F_y.
  const auto fplus = std::numbers::sqrt2 * (std::conj(psi[0]) * psi[1] + std::conj(psi[1]) * psi[2]);
  return {fplus.real(), fplus.imag(), std::norm(psi[0]) - std::norm(psi[2])};
}

Spinor apply_spin_exponential(const Vec3& h, double tau, const Spinor& psi) {
  const double eta = std::sqrt(h[0] * h[0] + h[1] * h[1] + h[2] * h[2]);
  if (eta == 0.0) return psi;
  const Vec3 n{h[0] / eta, h[1] / eta, h[2] / eta};
  // exp(a n.F) = 1 + sinh(a) n.F + (cosh(a) - 1) (n.F)^2 with a = -tau eta,
  // both coefficients from one expm1 so small steps keep full precision.
  const double em = std::expm1(-tau * eta);
  const double ratio = em / (1.0 + em);
  const double s = 0.5 * (em + ratio);
  const double c = 0.5 * (em - ratio);
  const Spinor f1 = apply_nf(n, psi);
  const Spinor f2 = apply_nf(n, f1);
  Spinor out;
  for (int k = 0; k < 3; ++k) out[k] = psi[k] + s * f1[k] + c * f2[k];
  return out;
}

}  // namespace sdol::spin1
