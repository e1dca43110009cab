#pragma once

#include <stdexcept>
#include <string>

#include "sdol/constants.hpp"

/// Scalar and vector dynamic polarizabilities of the 87Rb 5S1/2 ground state
/// from the two D-line contributions (linewidths neglected).
///
/// The general multipole form alpha^(K) sums over excited fine-structure
/// levels |n'J'> with weights
///   (-1)^(K+J+1) sqrt(2K+1) (-1)^J' {1 K 1; J J' J} |<n'J'||d||nJ>|^2
///   * Re[1/(w' - w - i g/2) + (-1)^K / (w' + w + i g/2)] / hbar.
/// Only the D1/D2 terms of that sum enter here and g -> 0; the counter-rotating
/// term is dropped, which is what the closed forms below encode. The tensor part
/// vanishes identically for J = 1/2.
namespace sdol {

/// Thrown when the evaluation frequency sits on a D line.
class ResonanceError : public std::domain_error {
 public:
  ResonanceError(std::string line, double omega)
      : std::domain_error("polarizability is singular at the " + line + " resonance"),
        line_(std::move(line)),
        omega_(omega) {}
  const std::string& line() const { return line_; }
  double omega() const { return omega_; }

 private:
  std::string line_;
  double omega_;
};

struct Polarizabilities {
  double omega = 0;   // rad/s
  double alpha0 = 0;  // C^2 m^2 / J
  double alpha1 = 0;  // C^2 m^2 / J
};

double alpha0(double omega, const AtomSpec& atom);
double alpha1(double omega, const AtomSpec& atom);
double polarizability_ratio(double omega, const AtomSpec& atom);
Polarizabilities polarizabilities(double omega, const AtomSpec& atom);

}  // namespace sdol
