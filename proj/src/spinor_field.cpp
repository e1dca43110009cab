#include "sdol/spinor_field.hpp"

#include <cmath>
#include <stdexcept>

namespace sdol {

SpinorField::SpinorField(const GridSpec& g, double n) : grid(g), n_atoms(n) {
  grid.validate();
  if (!(n > 0)) throw std::invalid_argument("SpinorField: atom number must be positive");
  for (auto& comp : psi) comp.assign(grid.size(), {0.0, 0.0});
}

double SpinorField::norm() const {
  double sum = 0;
  for (const auto& comp : psi)
    for (const auto& v : comp) sum += std::norm(v);
  return sum * cell_area();
}

void SpinorField::normalize() {
  const double current = norm();
  if (!(current > 0) || !std::isfinite(current))
    throw std::domain_error("SpinorField: cannot normalise a state with norm " + std::to_string(current));
  const double scale = std::sqrt(n_atoms / current);
  for (auto& comp : psi)
    for (auto& v : comp) v *= scale;
}

}  // namespace sdol
