#pragma once

#include <array>
#include <complex>

#include "sdol/lattice_field.hpp"
#include "sdol/spectral.hpp"
#include "sdol/spin1.hpp"

namespace sdol {

/// Three-component condensate wavefunction (m_F = +1, 0, -1) on a square grid.
/// Amplitudes are in 1/lambda_l, so sum_c int |psi_c|^2 dA counts atoms.
struct SpinorField {
  GridSpec grid;
  double n_atoms = 0;
  std::array<ComplexGrid, 3> psi;

  SpinorField() = default;
  /// All components zero.
  SpinorField(const GridSpec& grid, double n_atoms);

  std::size_t size() const { return grid.size(); }
  double cell_area() const { return grid.spacing() * grid.spacing(); }

  spin1::Spinor at(std::size_t k) const { return {psi[0][k], psi[1][k], psi[2][k]}; }
  void set(std::size_t k, const spin1::Spinor& s) {
    for (int c = 0; c < 3; ++c) psi[c][k] = s[c];
  }
  double density(std::size_t k) const {
    return std::norm(psi[0][k]) + std::norm(psi[1][k]) + std::norm(psi[2][k]);
  }

  /// sum_c int |psi_c|^2 dA.
  double norm() const;
  /// Rescales to n_atoms. Throws std::domain_error on a zero or non-finite norm.
  void normalize();
};

}  // namespace sdol
