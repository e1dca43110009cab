#include "sdol/lattice_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sdol/polarizability.hpp"

namespace sdol {

using std::numbers::pi;
using std::numbers::sqrt3;

BeamConfig BeamConfig::from_W_per_cm2(double intensity_W_cm2, double lambda_l) {
  return {intensity_W_cm2 * 1e4, lambda_l};
}

double BeamConfig::field_amplitude_squared() const {
  return 2.0 * intensity / (codata::speed_of_light * codata::epsilon0);
}

std::array<Vec2, 6> beam_wavevectors() {
  std::array<Vec2, 6> q;
  for (int n = 1; n <= 6; ++n) {
    const double angle = n * pi / 3.0;
    q[n - 1] = {-2.0 * pi * std::cos(angle), -2.0 * pi * std::sin(angle)};
  }
  return q;
}

ComplexVec3 envelope(Vec2 r) {
  ComplexVec3 e{};
  for (const auto& q : beam_wavevectors()) {
    // Polarisation e_z + q_hat x e_z = (q_y, -q_x, |q|) / |q|.
    const double norm = std::hypot(q.x, q.y);
    const std::complex<double> phase = std::polar(1.0, q.x * r.x + q.y * r.y);
    e[0] += (q.y / norm) * phase;
    e[1] += (-q.x / norm) * phase;
    e[2] += phase;
  }
  for (auto& c : e) c /= 3.0;
  return e;
}

LightShift LightShift::from_beams(const BeamConfig& beams, const AtomSpec& atom,
                                  const UnitSystem& units) {
  if (!(beams.intensity >= 0)) throw std::invalid_argument("LightShift: intensity must be non-negative");
  const double omega = angular_frequency(beams.lambda_l);
  const auto pol = polarizabilities(omega, atom);
  const double e0_sq = beams.field_amplitude_squared();
  const double spin_states = 2.0 * atom.nuclear_spin + 1.0;
  return {units.to_dimensionless_energy(pol.alpha0 * e0_sq),
          units.to_dimensionless_energy(pol.alpha1 * e0_sq / (4.0 * spin_states))};
}

// Near the centre V = -scalar + pi^2 scalar r^2 and the kinetic term is
// -(1/4pi^2) Laplacian, so hbar omega = 2 sqrt(pi^2 scalar / 4pi^2).
double LightShift::harmonic_quantum() const { return std::sqrt(scalar); }

double LightShift::harmonic_length() const {
  return std::pow(kinetic_prefactor / (pi * pi * scalar), 0.25);
}

Vec3 spin_cross_term(Vec2 r) {
  const auto e = envelope(r);
  const std::complex<double> I(0.0, 1.0);
  const ComplexVec3 c{std::conj(e[1]) * e[2] - std::conj(e[2]) * e[1],
                      std::conj(e[2]) * e[0] - std::conj(e[0]) * e[2],
                      std::conj(e[0]) * e[1] - std::conj(e[1]) * e[0]};
  Vec3 out{};
  double residue = 0, magnitude = 0;
  for (int k = 0; k < 3; ++k) {
    const auto v = I * c[k];
    out[k] = v.real();
    residue = std::max(residue, std::abs(v.imag()));
    magnitude = std::max(magnitude, std::abs(v.real()));
  }
  // e* x e is purely imaginary; anything else is a construction bug.
  if (residue > 1e-12 * std::max(magnitude, 1.0))
    throw std::logic_error("spin_cross_term: non-negligible imaginary residue");
  return out;
}

double scalar_potential(Vec2 r, const LightShift& shift) {
  const auto e = envelope(r);
  double intensity = 0;
  for (const auto& c : e) intensity += std::norm(c);
  return -0.25 * shift.scalar * intensity;
}

// With the envelope as written, +i e* x e points towards the site centre.
// The sign is flipped so that the field points outward near the centre, as in
// the Bessel closed form and the red-detuned picture. The two orientations
// differ by a pi spin rotation about z, which leaves every observable here
// unchanged.
Vec3 fictitious_field(Vec2 r, const LightShift& shift) {
  auto c = spin_cross_term(r);
  for (auto& v : c) v *= -shift.vector;
  return c;
}

RadialProfile isotropic_profiles(double r, const LightShift& shift) {
  if (r < 0) throw std::domain_error("isotropic_profiles: radius must be non-negative");
  const double k = 2.0 * pi * r;
  const double v = 2.0 + 3.0 * std::cyl_bessel_j(0.0, k) + std::cyl_bessel_j(0.0, sqrt3 * k);
  const double b = std::cyl_bessel_j(1.0, k) + std::cyl_bessel_j(1.0, 2.0 * k) +
                   sqrt3 * std::cyl_bessel_j(1.0, sqrt3 * k);
  // alpha1 E0^2 / (3 (2I+1)) = (4/3) * vector.
  return {-shift.scalar / 6.0 * v, 4.0 / 3.0 * shift.vector * b};
}

FieldMaximum isotropic_field_maximum(const LightShift& shift) {
  const double r_end = cell_inscribed_radius();
  constexpr int samples = 4000;
  int best = 0;
  double best_value = -1;
  for (int i = 0; i <= samples; ++i) {
    const double b = std::abs(isotropic_profiles(r_end * i / samples, shift).B);
    if (b > best_value) {
      best_value = b;
      best = i;
    }
  }
  // Golden-section refinement on the bracketing samples.
  double lo = r_end * std::max(best - 1, 0) / samples;
  double hi = r_end * std::min(best + 1, samples) / samples;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double r) { return std::abs(isotropic_profiles(r, shift).B); };
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = f(a), fb = f(b);
  while (hi - lo > 1e-12) {
    if (fa > fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = f(b);
    }
  }
  const double r = 0.5 * (lo + hi);
  return {r, f(r)};
}

void GridSpec::validate() const {
  if (!(side > 0)) throw std::invalid_argument("GridSpec: side must be positive");
  if (points < 4 || points % 2 != 0) throw std::invalid_argument("GridSpec: points must be even and >= 4");
}

// Primitive lattice constant is 2/sqrt3 lambda_l; the inscribed radius of the
// hexagonal cell is half of it.
double cell_inscribed_radius() { return 1.0 / sqrt3; }

std::string to_string(FieldModel model) {
  return model == FieldModel::hexagonal ? "hexagonal" : "isotropic";
}

FieldModel field_model_from_string(const std::string& name) {
  if (name == "hexagonal") return FieldModel::hexagonal;
  if (name == "isotropic") return FieldModel::isotropic;
  throw std::invalid_argument("unknown field model '" + name + "'");
}

FieldMaps render_field_maps(const GridSpec& grid, const LightShift& shift, FieldModel model) {
  grid.validate();
  FieldMaps maps;
  maps.grid = grid;
  maps.model = model;
  maps.shift = shift;
  maps.V.resize(grid.size());
  maps.Bx.resize(grid.size());
  maps.By.resize(grid.size());

  const double half_diagonal = 0.5 * grid.side * std::sqrt(2.0);
  if (half_diagonal > cell_inscribed_radius()) {
    std::ostringstream msg;
    msg << "grid half-diagonal " << half_diagonal << " lambda_l exceeds the cell inscribed radius "
        << cell_inscribed_radius() << "; the model is site-local only";
    maps.warnings.push_back(msg.str());
  }

  for (int i = 0; i < grid.points; ++i) {
    for (int j = 0; j < grid.points; ++j) {
      const Vec2 r{grid.coordinate(i), grid.coordinate(j)};
      const auto k = maps.index(i, j);
      if (model == FieldModel::hexagonal) {
        maps.V[k] = scalar_potential(r, shift);
        const auto b = fictitious_field(r, shift);
        maps.Bx[k] = b[0];
        maps.By[k] = b[1];
      } else {
        const double rho = std::hypot(r.x, r.y);
        const auto p = isotropic_profiles(rho, shift);
        maps.V[k] = p.V;
        maps.Bx[k] = rho > 0 ? p.B * r.x / rho : 0.0;
        maps.By[k] = rho > 0 ? p.B * r.y / rho : 0.0;
      }
    }
  }
  return maps;
}

}  // namespace sdol
