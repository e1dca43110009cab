#include "sdol/polarizability.hpp"

#include <cmath>

namespace sdol {
namespace {

struct LineTerms {
  double d1;  // d_{1/2}^2 / (hbar (w_{1/2} - w))
  double d2;  // d_{3/2}^2 / (hbar (w_{3/2} - w))
};

LineTerms line_terms(double omega, const AtomSpec& atom) {
  constexpr double rel_tol = 1e-12;
  if (std::abs(atom.omega_half - omega) <= rel_tol * atom.omega_half)
    throw ResonanceError("D1", omega);
  if (std::abs(atom.omega_threehalf - omega) <= rel_tol * atom.omega_threehalf)
    throw ResonanceError("D2", omega);
  return {atom.d_half * atom.d_half / (codata::hbar * (atom.omega_half - omega)),
          atom.d_threehalf * atom.d_threehalf / (codata::hbar * (atom.omega_threehalf - omega))};
}

}  // namespace

double alpha0(double omega, const AtomSpec& atom) {
  const auto t = line_terms(omega, atom);
  return t.d1 / 6.0 + t.d2 / 6.0;
}

double alpha1(double omega, const AtomSpec& atom) {
  const auto t = line_terms(omega, atom);
  return t.d1 / 3.0 - t.d2 / 6.0;
}

double polarizability_ratio(double omega, const AtomSpec& atom) {
  const double a0 = alpha0(omega, atom);
  if (a0 == 0.0) throw std::domain_error("polarizability_ratio: scalar polarizability vanishes");
  return alpha1(omega, atom) / a0;
}

Polarizabilities polarizabilities(double omega, const AtomSpec& atom) {
  return {omega, alpha0(omega, atom), alpha1(omega, atom)};
}

}  // namespace sdol
